#include "riskcore/scaling.hpp"

#include <algorithm>

namespace riskcore::scaling {

ScalingParams fit_scaling(const Matrix& m, Orientation orientation) {
  if (m.rows() == 0 || m.cols() == 0)
    throw EmptyMatrix("fit_scaling needs at least one row and one column");
  ScalingParams p;
  p.orientation = orientation;
  p.col_max = m.colwise().maxCoeff();
  p.col_min = m.colwise().minCoeff();
  p.constant.resize(static_cast<size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j)
    p.constant[static_cast<size_t>(j)] = (p.col_max[j] == p.col_min[j]);
  return p;
}

Matrix apply_scaling(const ScalingParams& params, const Matrix& m) {
  if (m.cols() != params.dimension())
    throw DimensionMismatch("apply_scaling: matrix has " +
                            std::to_string(m.cols()) + " columns, params " +
                            std::to_string(params.dimension()));
  Matrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    if (params.constant[static_cast<size_t>(j)]) {
      out.col(j).setZero();
      continue;
    }
    const double range = params.col_max[j] - params.col_min[j];
    for (Index i = 0; i < m.rows(); ++i) {
      double v = params.orientation == Orientation::Paper
                     ? (params.col_max[j] - m(i, j)) / range
                     : (m(i, j) - params.col_min[j]) / range;
      out(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace riskcore::scaling
