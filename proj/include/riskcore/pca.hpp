#pragma once

#include <vector>

#include "riskcore/mlp.hpp"
#include "riskcore/types.hpp"

namespace riskcore::pca {

struct PcaModel {
  Vector mean;
  Matrix axes;               // d x 2, orthonormal columns
  Vector explained_variance; // length 2, non-increasing
  bool rank_deficient = false;

  // (x - mean) projected onto the axes.
  Matrix transform(const Matrix& x) const;
};

// Top-2 principal axes of the sample covariance by power iteration with
// deflation. Sign convention: each axis's largest-magnitude entry is
// positive.
PcaModel pca_fit(const Matrix& x, double tol = 1e-10, int max_iters = 10000);

struct LayerProjection {
  std::string layer_name;
  PcaModel pca;
  Matrix coordinates;  // n x 2
  bool degenerate = false;  // all activations identical (e.g. zero weights)
};

// Independent 2-D PCA per representation: input, each hidden layer.
std::vector<LayerProjection> project_layers(const mlp::MlpModel& model,
                                            const Matrix& features);

// Training accuracy of a logistic fit on 2-D coordinates.
double separability_probe(const Matrix& coordinates,
                          const std::vector<int>& labels);

}  // namespace riskcore::pca
