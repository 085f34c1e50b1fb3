#include "riskcore/knn.hpp"

#include <algorithm>
#include <numeric>

namespace riskcore::models {

double knn_predict(const data::LabeledDataset& train, const Vector& x, int k) {
  const Index n = train.rows();
  if (k < 1 || static_cast<Index>(k) > n)
    throw InvalidK("k must satisfy 1 <= k <= n");
  if (x.size() != train.cols())
    throw DimensionMismatch("KNN input width mismatch");

  std::vector<std::pair<double, Index>> dist;
  dist.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    dist.emplace_back((train.features.row(i).transpose() - x).squaredNorm(),
                      i);
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

  int hits = 0;
  for (int i = 0; i < k; ++i)
    hits += train.labels[static_cast<size_t>(dist[static_cast<size_t>(i)]
                                                 .second)];
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace riskcore::models
