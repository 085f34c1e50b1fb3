#pragma once

#include <string>
#include <vector>

#include "riskcore/logistic.hpp"
#include "riskcore/mlp.hpp"
#include "riskcore/types.hpp"

namespace riskcore::importance {

enum class LrScoreMode { AbsCoefficient, AbsCoefficientTimesSigma };

struct ContributionRanking {
  Vector scores;               // C_i, length N, non-negative
  Vector sigma;                // per-factor sample deviation
  std::vector<Index> order;    // descending score; ties -> lower index
  std::vector<std::string> factor_names;

  Index dimension() const { return scores.size(); }
};

// C_i = sigma_i * sum_j |w_ij| over the input -> first-hidden matrix.
ContributionRanking dnn_contributions(
    const mlp::MlpModel& model, const Vector& sigma,
    const std::vector<std::string>& factor_names = {});

ContributionRanking lr_contributions(
    const models::LrModel& model, const Vector& sigma,
    LrScoreMode mode = LrScoreMode::AbsCoefficient,
    const std::vector<std::string>& factor_names = {});

// k = ceil(fraction * N) highest-score indices, returned in score order.
std::vector<Index> select_top_fraction(const ContributionRanking& ranking,
                                       double fraction);

}  // namespace riskcore::importance
