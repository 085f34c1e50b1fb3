#pragma once

#include <cstdint>

#include "riskcore/classifier.hpp"

namespace riskcore::models {

struct SvmConfig {
  int grid_exponent_min = -3;  // c and gamma both swept over 2^e
  int grid_exponent_max = 3;
  int cv_folds = 3;
  std::uint64_t seed = 0;
  double kkt_tolerance = 1e-3;
  int max_passes = 10;       // consecutive no-change sweeps before stopping
  int max_sweeps = 2000;     // hard cap on total sweeps
};

struct SvmModel {
  Matrix support_vectors;  // rows of the training set
  Vector dual_coeffs;      // alpha_i * y_i, y in {-1,+1}
  Vector alphas;
  std::vector<int> sv_labels;  // original 0/1 labels of the support rows
  double bias = 0.0;
  double c = 1.0;
  double gamma = 1.0;
  bool converged = true;

  double decision_value(const Vector& x) const;
};

double rbf_kernel(const Vector& a, const Vector& b, double gamma);

// SMO on the soft-margin dual at fixed (c, gamma).
SvmModel svm_train_fixed(const data::LabeledDataset& train, double c,
                         double gamma, const SvmConfig& config);

// 7x7 grid over {2^e}, 3-fold stratified CV maximizing mean F1
// (ties prefer smaller c, then smaller gamma), then refit on full train.
SvmModel svm_fit(const data::LabeledDataset& train, const SvmConfig& config);

class SvmClassifier : public Classifier {
 public:
  explicit SvmClassifier(SvmConfig config = {}) : config_(config) {}

  void fit(const data::LabeledDataset& train) override {
    model_ = svm_fit(train, config_);
  }
  // Rank-preserving sigmoid of the margin.
  double predict_proba(const Vector& x) const override;
  bool probabilistic() const override { return true; }
  std::string name() const override { return "svm"; }

  const SvmModel& model() const { return model_; }

 private:
  SvmConfig config_;
  SvmModel model_;
};

}  // namespace riskcore::models
