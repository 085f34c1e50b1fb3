#pragma once

#include <cstdint>

#include "riskcore/classifier.hpp"

namespace riskcore::models {

struct LrConfig {
  double learning_rate = 1.0;  // initial step, shrunk by backtracking
  int max_iters = 500;
  double tol = 1e-6;  // gradient infinity-norm stopping threshold
  std::uint64_t seed = 0;
};

struct LrModel {
  Vector coefficients;
  double intercept = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Unregularized maximum likelihood by full-batch gradient descent on the
// negative log-likelihood, with backtracking so the NLL never increases.
LrModel lr_fit(const data::LabeledDataset& train, const LrConfig& config = {});

double lr_predict_proba(const LrModel& model, const Vector& x);

double lr_nll(const LrModel& model, const Matrix& x,
              const std::vector<int>& y);

class LrClassifier : public Classifier {
 public:
  explicit LrClassifier(LrConfig config = {}) : config_(config) {}

  void fit(const data::LabeledDataset& train) override {
    model_ = lr_fit(train, config_);
  }
  double predict_proba(const Vector& x) const override {
    return lr_predict_proba(model_, x);
  }
  bool probabilistic() const override { return true; }
  std::string name() const override { return "lr"; }

  const LrModel& model() const { return model_; }

 private:
  LrConfig config_;
  LrModel model_;
};

}  // namespace riskcore::models
