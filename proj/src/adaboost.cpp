#include "riskcore/adaboost.hpp"

#include <cmath>

namespace riskcore::models {

void AdaBoostClassifier::fit(const data::LabeledDataset& train) {
  const Index n = train.rows();
  const long pos = train.count_label(1);
  if (pos == 0 || pos == n)
    throw MissingClass("AdaBoost needs both classes present");

  trees_.clear();
  alphas_.clear();
  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  TreeConfig tree_cfg{config_.max_depth, config_.min_samples_split};

  for (int m = 0; m < config_.n_estimators; ++m) {
    DecisionTree tree;
    tree.fit(train, tree_cfg, w);

    std::vector<int> pred(static_cast<size_t>(n));
    double eps = 0.0;
    for (Index i = 0; i < n; ++i) {
      pred[static_cast<size_t>(i)] = tree.predict(train.features.row(i).transpose());
      if (pred[static_cast<size_t>(i)] != train.labels[static_cast<size_t>(i)])
        eps += w[i];
    }

    if (eps >= 0.5) break;  // learner no better than chance; discard
    if (eps == 0.0) {
      // Perfect learner dominates; keep it alone and stop.
      trees_.push_back(std::move(tree));
      alphas_.push_back(std::log((1.0 - 1e-10) / 1e-10));
      break;
    }

    const double alpha = std::log((1.0 - eps) / eps);
    for (Index i = 0; i < n; ++i)
      if (pred[static_cast<size_t>(i)] != train.labels[static_cast<size_t>(i)])
        w[i] *= std::exp(alpha);
    w /= w.sum();

    trees_.push_back(std::move(tree));
    alphas_.push_back(alpha);
  }
}

double AdaBoostClassifier::predict_proba(const Vector& x) const {
  if (trees_.empty()) return 0.5;
  double vote = 0.0, total = 0.0;
  for (size_t m = 0; m < trees_.size(); ++m) {
    if (trees_[m].predict(x) == 1) vote += alphas_[m];
    total += alphas_[m];
  }
  return vote / total;
}

}  // namespace riskcore::models
