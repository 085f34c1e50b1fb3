#include "riskcore/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "riskcore/metrics.hpp"

namespace riskcore::models {

double rbf_kernel(const Vector& a, const Vector& b, double gamma) {
  return std::exp(-gamma * (a - b).squaredNorm());
}

double SvmModel::decision_value(const Vector& x) const {
  double s = bias;
  for (Index i = 0; i < support_vectors.rows(); ++i)
    s += dual_coeffs[i] *
         rbf_kernel(support_vectors.row(i).transpose(), x, gamma);
  return s;
}

namespace {

struct SmoResult {
  Vector alpha;
  double bias = 0.0;
  bool converged = true;
};

// Platt-style SMO with a deterministic max-|E_i - E_j| partner choice.
SmoResult smo(const Matrix& kernel, const std::vector<double>& y, double c,
              const SvmConfig& config) {
  const Index n = kernel.rows();
  SmoResult res;
  res.alpha = Vector::Zero(n);
  double b = 0.0;

  // Error cache: e[k] = f(x_k) - y_k, updated incrementally.
  Vector e(n);
  for (Index k = 0; k < n; ++k) e[k] = -y[static_cast<size_t>(k)];

  const double tol = config.kkt_tolerance;
  int passes = 0, sweeps = 0;
  while (passes < config.max_passes && sweeps < config.max_sweeps) {
    ++sweeps;
    int changed = 0;
    for (Index i = 0; i < n; ++i) {
      const double yi = y[static_cast<size_t>(i)];
      const double ei = e[i];
      if (!((yi * ei < -tol && res.alpha[i] < c) ||
            (yi * ei > tol && res.alpha[i] > 0)))
        continue;

      Index j = -1;
      double best = -1.0;
      for (Index cand = 0; cand < n; ++cand) {
        if (cand == i) continue;
        const double gap = std::fabs(ei - e[cand]);
        if (gap > best) {
          best = gap;
          j = cand;
        }
      }
      if (j < 0) continue;
      const double yj = y[static_cast<size_t>(j)];
      const double ej = e[j];

      const double ai_old = res.alpha[i], aj_old = res.alpha[j];
      double lo, hi;
      if (yi != yj) {
        lo = std::max(0.0, aj_old - ai_old);
        hi = std::min(c, c + aj_old - ai_old);
      } else {
        lo = std::max(0.0, ai_old + aj_old - c);
        hi = std::min(c, ai_old + aj_old);
      }
      if (lo >= hi) continue;
      const double eta = 2.0 * kernel(i, j) - kernel(i, i) - kernel(j, j);
      if (eta >= 0.0) continue;

      double aj = aj_old - yj * (ei - ej) / eta;
      aj = std::clamp(aj, lo, hi);
      if (std::fabs(aj - aj_old) < 1e-5) continue;
      const double ai = ai_old + yi * yj * (aj_old - aj);
      res.alpha[i] = ai;
      res.alpha[j] = aj;

      const double b1 = b - ei - yi * (ai - ai_old) * kernel(i, i) -
                        yj * (aj - aj_old) * kernel(i, j);
      const double b2 = b - ej - yi * (ai - ai_old) * kernel(i, j) -
                        yj * (aj - aj_old) * kernel(j, j);
      double b_new;
      if (ai > 0 && ai < c)
        b_new = b1;
      else if (aj > 0 && aj < c)
        b_new = b2;
      else
        b_new = (b1 + b2) / 2.0;

      e += yi * (ai - ai_old) * kernel.col(i) +
           yj * (aj - aj_old) * kernel.col(j) +
           Vector::Constant(n, b_new - b);
      b = b_new;
      ++changed;
    }
    passes = changed == 0 ? passes + 1 : 0;
  }
  res.bias = b;
  res.converged = sweeps < config.max_sweeps;
  return res;
}

std::vector<std::vector<Index>> stratified_folds(
    const std::vector<int>& labels, int folds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Index>> out(static_cast<size_t>(folds));
  for (int cls : {0, 1}) {
    std::vector<Index> members;
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(static_cast<Index>(i));
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t i = 0; i < members.size(); ++i)
      out[i % static_cast<size_t>(folds)].push_back(members[i]);
  }
  return out;
}

}  // namespace

SvmModel svm_train_fixed(const data::LabeledDataset& train, double c,
                         double gamma, const SvmConfig& config) {
  const Index n = train.rows();
  const long pos = train.count_label(1);
  if (pos == 0 || pos == n) throw MissingClass("SVM needs both classes");
  if (c <= 0.0 || gamma <= 0.0)
    throw InvalidConfig("SVM c and gamma must be positive");

  std::vector<double> y(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    y[static_cast<size_t>(i)] =
        train.labels[static_cast<size_t>(i)] == 1 ? 1.0 : -1.0;

  Matrix kernel(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const double k = rbf_kernel(train.features.row(i).transpose(),
                                  train.features.row(j).transpose(), gamma);
      kernel(i, j) = k;
      kernel(j, i) = k;
    }

  const SmoResult sol = smo(kernel, y, c, config);

  SvmModel model;
  model.c = c;
  model.gamma = gamma;
  model.bias = sol.bias;
  model.converged = sol.converged;
  std::vector<Index> sv;
  for (Index i = 0; i < n; ++i)
    if (sol.alpha[i] > 0.0) sv.push_back(i);
  model.support_vectors.resize(static_cast<Index>(sv.size()), train.cols());
  model.dual_coeffs.resize(static_cast<Index>(sv.size()));
  model.alphas.resize(static_cast<Index>(sv.size()));
  for (size_t i = 0; i < sv.size(); ++i) {
    model.support_vectors.row(static_cast<Index>(i)) =
        train.features.row(sv[i]);
    model.alphas[static_cast<Index>(i)] = sol.alpha[sv[i]];
    model.dual_coeffs[static_cast<Index>(i)] =
        sol.alpha[sv[i]] * y[static_cast<size_t>(sv[i])];
    model.sv_labels.push_back(train.labels[static_cast<size_t>(sv[i])]);
  }
  return model;
}

SvmModel svm_fit(const data::LabeledDataset& train, const SvmConfig& config) {
  const long pos = train.count_label(1);
  if (pos == 0 || pos == train.rows())
    throw MissingClass("SVM needs both classes");

  const auto folds =
      stratified_folds(train.labels, config.cv_folds, config.seed);

  double best_f1 = -1.0, best_c = 0.0, best_gamma = 0.0;
  for (int ec = config.grid_exponent_min; ec <= config.grid_exponent_max;
       ++ec) {
    for (int eg = config.grid_exponent_min; eg <= config.grid_exponent_max;
         ++eg) {
      const double c = std::pow(2.0, ec);
      const double gamma = std::pow(2.0, eg);
      double f1_sum = 0.0;
      int f1_count = 0;
      for (size_t fold = 0; fold < folds.size(); ++fold) {
        std::vector<Index> fit_idx;
        for (size_t other = 0; other < folds.size(); ++other)
          if (other != fold)
            fit_idx.insert(fit_idx.end(), folds[other].begin(),
                           folds[other].end());
        const auto fit_set = train.select_rows(fit_idx);
        if (fit_set.count_label(1) == 0 ||
            fit_set.count_label(0) == 0)
          continue;
        const SvmModel m = svm_train_fixed(fit_set, c, gamma, config);
        std::vector<int> yv, pv;
        for (Index i : folds[fold]) {
          yv.push_back(train.labels[static_cast<size_t>(i)]);
          pv.push_back(
              m.decision_value(train.features.row(i).transpose()) >= 0.0 ? 1
                                                                         : 0);
        }
        const auto met = metrics::derive(metrics::confusion(yv, pv));
        f1_sum += met.f1.value_or(0.0);  // empty-prediction folds score 0
        ++f1_count;
      }
      const double mean_f1 = f1_count > 0 ? f1_sum / f1_count : 0.0;
      if (mean_f1 > best_f1) {  // strict: ties keep smaller c, then gamma
        best_f1 = mean_f1;
        best_c = c;
        best_gamma = gamma;
      }
    }
  }
  return svm_train_fixed(train, best_c, best_gamma, config);
}

double SvmClassifier::predict_proba(const Vector& x) const {
  return 1.0 / (1.0 + std::exp(-model_.decision_value(x)));
}

}  // namespace riskcore::models
