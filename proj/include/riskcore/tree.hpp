#pragma once

#include <memory>

#include "riskcore/classifier.hpp"

namespace riskcore::models {

struct TreeConfig {
  int max_depth = -1;          // -1: grow until leaves are pure
  int min_samples_split = 2;   // nodes smaller than this become leaves
};

// Binary CART with the Gini criterion. Supports per-sample weights so the
// boosting stage can reuse it. Thresholds are midpoints of adjacent sorted
// values; feature ties break toward the lower index.
class DecisionTree {
 public:
  void fit(const data::LabeledDataset& train, const TreeConfig& config = {},
           const Vector& sample_weights = Vector());

  // Weighted positive fraction of the reached leaf.
  double predict_proba(const Vector& x) const;
  int predict(const Vector& x) const { return predict_proba(x) >= 0.5; }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int depth() const;

  // Weighted Gini impurity of a two-class node.
  static double gini(double weight_pos, double weight_total);

 private:
  struct Node {
    Index feature = -1;      // -1 marks a leaf
    double threshold = 0.0;  // go left when value <= threshold
    int left = -1, right = -1;
    double positive_fraction = 0.0;
    int node_depth = 0;
  };
  std::vector<Node> nodes_;
  Index n_features_ = 0;

  int build(const data::LabeledDataset& train, const Vector& w,
            std::vector<Index>& idx, const TreeConfig& config, int depth);
};

class TreeClassifier : public Classifier {
 public:
  explicit TreeClassifier(TreeConfig config = {}) : config_(config) {}

  void fit(const data::LabeledDataset& train) override {
    tree_.fit(train, config_);
  }
  double predict_proba(const Vector& x) const override {
    return tree_.predict(x) ? 1.0 : 0.0;
  }
  bool probabilistic() const override { return false; }
  std::string name() const override { return "dt"; }

  const DecisionTree& tree() const { return tree_; }

 private:
  TreeConfig config_;
  DecisionTree tree_;
};

}  // namespace riskcore::models
