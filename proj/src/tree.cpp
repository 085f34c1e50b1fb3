#include "riskcore/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riskcore::models {

double DecisionTree::gini(double weight_pos, double weight_total) {
  if (weight_total <= 0.0) return 0.0;
  const double p = weight_pos / weight_total;
  return 2.0 * p * (1.0 - p);
}

void DecisionTree::fit(const data::LabeledDataset& train,
                       const TreeConfig& config,
                       const Vector& sample_weights) {
  const Index n = train.rows();
  if (n == 0) throw EmptyBatch("decision tree needs a non-empty train set");
  Vector w = sample_weights;
  if (w.size() == 0)
    w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  else if (w.size() != n)
    throw ShapeMismatch("sample weights length mismatch");

  nodes_.clear();
  n_features_ = train.cols();
  std::vector<Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  build(train, w, idx, config, 0);
}

int DecisionTree::build(const data::LabeledDataset& train, const Vector& w,
                        std::vector<Index>& idx, const TreeConfig& config,
                        int depth) {
  double wt = 0.0, wp = 0.0;
  for (Index i : idx) {
    wt += w[i];
    wp += w[i] * train.labels[static_cast<size_t>(i)];
  }
  const double node_gini = gini(wp, wt);

  Node node;
  node.node_depth = depth;
  node.positive_fraction = wt > 0.0 ? wp / wt : 0.0;

  const bool splittable =
      node_gini > 0.0 &&
      static_cast<int>(idx.size()) >= config.min_samples_split &&
      (config.max_depth < 0 || depth < config.max_depth);

  Index best_feature = -1;
  double best_threshold = 0.0;
  double best_decrease = 1e-12;

  if (splittable) {
    std::vector<Index> sorted = idx;
    for (Index f = 0; f < train.cols(); ++f) {
      std::sort(sorted.begin(), sorted.end(), [&](Index a, Index b) {
        return train.features(a, f) < train.features(b, f);
      });
      double lw = 0.0, lp = 0.0;
      for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        const Index row = sorted[i];
        lw += w[row];
        lp += w[row] * train.labels[static_cast<size_t>(row)];
        const double v = train.features(row, f);
        const double vn = train.features(sorted[i + 1], f);
        if (v == vn) continue;
        const double rw = wt - lw, rp = wp - lp;
        const double decrease =
            node_gini - (lw * gini(lp, lw) + rw * gini(rp, rw)) / wt;
        if (decrease > best_decrease) {
          best_decrease = decrease;
          best_feature = f;
          best_threshold = (v + vn) / 2.0;
        }
      }
    }
  }

  const int my_id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);

  if (best_feature >= 0) {
    std::vector<Index> left, right;
    for (Index i : idx)
      (train.features(i, best_feature) <= best_threshold ? left : right)
          .push_back(i);
    nodes_[static_cast<size_t>(my_id)].feature = best_feature;
    nodes_[static_cast<size_t>(my_id)].threshold = best_threshold;
    const int l = build(train, w, left, config, depth + 1);
    nodes_[static_cast<size_t>(my_id)].left = l;
    const int r = build(train, w, right, config, depth + 1);
    nodes_[static_cast<size_t>(my_id)].right = r;
  }
  return my_id;
}

double DecisionTree::predict_proba(const Vector& x) const {
  if (nodes_.empty()) throw DataError("tree not fitted");
  if (x.size() != n_features_)
    throw DimensionMismatch("tree input width mismatch");
  int cur = 0;
  while (nodes_[static_cast<size_t>(cur)].feature >= 0) {
    const Node& nd = nodes_[static_cast<size_t>(cur)];
    cur = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes_[static_cast<size_t>(cur)].positive_fraction;
}

int DecisionTree::depth() const {
  int d = 0;
  for (const auto& nd : nodes_) d = std::max(d, nd.node_depth);
  return d;
}

}  // namespace riskcore::models
