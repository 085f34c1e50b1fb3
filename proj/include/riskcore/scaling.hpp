#pragma once

#include <vector>

#include "riskcore/types.hpp"

namespace riskcore::scaling {

// Which direction the [0,1] map runs. Paper: column min -> 1, max -> 0.
// Standard: min -> 0, max -> 1.
enum class Orientation { Paper, Standard };

struct ScalingParams {
  Vector col_max;
  Vector col_min;
  std::vector<bool> constant;  // col_max == col_min
  Orientation orientation = Orientation::Paper;

  Index dimension() const { return col_max.size(); }
};

// Records column-wise max/min of a non-empty matrix.
ScalingParams fit_scaling(const Matrix& m,
                          Orientation orientation = Orientation::Paper);

// Maps every entry to [0,1]. Constant columns map to 0. Values outside the
// fitted range (possible when params came from a different set) are clamped.
Matrix apply_scaling(const ScalingParams& params, const Matrix& m);

}  // namespace riskcore::scaling
