#include "riskcore/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riskcore::importance {

namespace {

ContributionRanking make_ranking(Vector scores, Vector sigma,
                                 std::vector<std::string> names) {
  ContributionRanking r;
  r.order.resize(static_cast<size_t>(scores.size()));
  std::iota(r.order.begin(), r.order.end(), Index{0});
  std::stable_sort(r.order.begin(), r.order.end(), [&scores](Index a, Index b) {
    return scores[a] > scores[b];
  });
  r.scores = std::move(scores);
  r.sigma = std::move(sigma);
  r.factor_names = std::move(names);
  return r;
}

}  // namespace

ContributionRanking dnn_contributions(
    const mlp::MlpModel& model, const Vector& sigma,
    const std::vector<std::string>& factor_names) {
  const Matrix& w = model.first_layer_weights();
  if (sigma.size() != w.rows())
    throw DimensionMismatch("sigma length != model input size");
  Vector scores(w.rows());
  for (Index i = 0; i < w.rows(); ++i)
    scores[i] = sigma[i] * w.row(i).cwiseAbs().sum();
  return make_ranking(std::move(scores), sigma, factor_names);
}

ContributionRanking lr_contributions(
    const models::LrModel& model, const Vector& sigma, LrScoreMode mode,
    const std::vector<std::string>& factor_names) {
  if (sigma.size() != model.coefficients.size())
    throw DimensionMismatch("sigma length != coefficient count");
  Vector scores = model.coefficients.cwiseAbs();
  if (mode == LrScoreMode::AbsCoefficientTimesSigma)
    scores = scores.cwiseProduct(sigma);
  return make_ranking(std::move(scores), sigma, factor_names);
}

std::vector<Index> select_top_fraction(const ContributionRanking& ranking,
                                       double fraction) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw InvalidFraction("fraction must be in (0,1]");
  const auto k = static_cast<size_t>(std::ceil(
      fraction * static_cast<double>(ranking.dimension())));
  return {ranking.order.begin(),
          ranking.order.begin() + static_cast<std::ptrdiff_t>(k)};
}

}  // namespace riskcore::importance
