#pragma once

#include "riskcore/tree.hpp"

namespace riskcore::models {

struct BoostConfig {
  int n_estimators = 200;
  int max_depth = 10;
  int min_samples_split = 10;
};

// Two-class SAMME over weight-aware Gini trees. Stage weight
// alpha_m = ln((1-eps_m)/eps_m); stops early at eps_m = 0 or >= 0.5.
class AdaBoostClassifier : public Classifier {
 public:
  explicit AdaBoostClassifier(BoostConfig config = {}) : config_(config) {}

  void fit(const data::LabeledDataset& train) override;

  // Normalized weighted vote for the positive class, in [0,1].
  double predict_proba(const Vector& x) const override;
  bool probabilistic() const override { return false; }
  std::string name() const override { return "adaboost"; }

  int ensemble_size() const { return static_cast<int>(trees_.size()); }
  const std::vector<double>& stage_weights() const { return alphas_; }

 private:
  BoostConfig config_;
  std::vector<DecisionTree> trees_;
  std::vector<double> alphas_;
};

}  // namespace riskcore::models
