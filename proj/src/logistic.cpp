#include "riskcore/logistic.hpp"

#include <cmath>

namespace riskcore::models {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double nll(const Matrix& x, const std::vector<int>& y, const Vector& w,
           double b) {
  double s = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    const double z = x.row(i).dot(w) + b;
    // log(1 + exp(z)) - y*z, computed stably.
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z))
                                  : std::log1p(std::exp(z));
    s += softplus - y[static_cast<size_t>(i)] * z;
  }
  return s / static_cast<double>(x.rows());
}

}  // namespace

LrModel lr_fit(const data::LabeledDataset& train, const LrConfig& config) {
  const Index n = train.rows();
  long pos = train.count_label(1);
  if (pos == 0 || pos == n)
    throw MissingClass("logistic regression needs both classes");
  const Matrix& x = train.features;
  const auto& y = train.labels;

  Vector w = Vector::Zero(x.cols());
  double b = 0.0;
  double cur = nll(x, y, w, b);
  LrModel model;
  for (int it = 0; it < config.max_iters; ++it) {
    Vector p(n);
    for (Index i = 0; i < n; ++i) p[i] = sigmoid(x.row(i).dot(w) + b);
    Vector resid(n);
    for (Index i = 0; i < n; ++i)
      resid[i] = p[i] - static_cast<double>(y[static_cast<size_t>(i)]);
    Vector gw = x.transpose() * resid / static_cast<double>(n);
    double gb = resid.mean();
    const double gnorm = std::max(gw.cwiseAbs().maxCoeff(), std::fabs(gb));
    model.iterations = it + 1;
    if (gnorm < config.tol) {
      model.converged = true;
      break;
    }
    double step = config.learning_rate;
    const double gsq = gw.squaredNorm() + gb * gb;
    while (step > 1e-12) {
      const Vector w_try = w - step * gw;
      const double b_try = b - step * gb;
      const double next = nll(x, y, w_try, b_try);
      if (next <= cur - 1e-4 * step * gsq) {
        w = w_try;
        b = b_try;
        cur = next;
        break;
      }
      step *= 0.5;
    }
  }
  model.coefficients = std::move(w);
  model.intercept = b;
  return model;
}

double lr_predict_proba(const LrModel& model, const Vector& x) {
  if (x.size() != model.coefficients.size())
    throw DimensionMismatch("LR input width mismatch");
  return sigmoid(x.dot(model.coefficients) + model.intercept);
}

double lr_nll(const LrModel& model, const Matrix& x,
              const std::vector<int>& y) {
  return nll(x, y, model.coefficients, model.intercept);
}

}  // namespace riskcore::models
