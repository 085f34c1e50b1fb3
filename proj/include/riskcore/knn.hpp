#pragma once

#include "riskcore/classifier.hpp"

namespace riskcore::models {

// Positive fraction among the k nearest (Euclidean) training rows.
// Distance ties break toward the lower row index.
double knn_predict(const data::LabeledDataset& train, const Vector& x, int k);

class KnnClassifier : public Classifier {
 public:
  explicit KnnClassifier(int k = 5) : k_(k) {}

  void fit(const data::LabeledDataset& train) override { train_ = train; }
  double predict_proba(const Vector& x) const override {
    return knn_predict(train_, x, k_);
  }
  bool probabilistic() const override { return false; }
  std::string name() const override { return "knn"; }

 private:
  int k_;
  data::LabeledDataset train_;
};

}  // namespace riskcore::models
