#include "riskcore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riskcore::metrics {

ConfusionCounts confusion(const std::vector<int>& labels,
                          const std::vector<int>& predictions) {
  if (labels.size() != predictions.size())
    throw LengthMismatch("labels and predictions differ in length");
  if (labels.empty()) throw LengthMismatch("empty label vector");
  ConfusionCounts c;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i], p = predictions[i];
    if ((y != 0 && y != 1) || (p != 0 && p != 1))
      throw NonBinary("labels and predictions must be 0/1");
    if (y == 1)
      (p == 1 ? c.tp : c.fn)++;
    else
      (p == 1 ? c.fp : c.tn)++;
  }
  return c;
}

namespace {

std::optional<double> ratio(long num, long den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

RunMetrics derive(const ConfusionCounts& c) {
  RunMetrics m;
  m.sensitivity = ratio(c.tp, c.tp + c.fn);
  m.fnr = ratio(c.fn, c.tp + c.fn);
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.specificity = ratio(c.tn, c.fp + c.tn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  if (m.precision && m.sensitivity && (*m.precision + *m.sensitivity) > 0.0)
    m.f1 = 2.0 * *m.precision * *m.sensitivity /
           (*m.precision + *m.sensitivity);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  return m;
}

RocResult auc(const std::vector<int>& labels,
              const std::vector<double>& scores) {
  if (labels.size() != scores.size())
    throw LengthMismatch("labels and scores differ in length");
  long pos = 0, neg = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!std::isfinite(scores[i])) throw NonFiniteValue("non-finite score");
    (labels[i] == 1 ? pos : neg)++;
  }
  if (pos == 0 || neg == 0)
    throw MissingClass("AUC needs both classes present");

  std::vector<size_t> order(labels.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&scores](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocResult res;
  res.points.push_back({0.0, 0.0});
  long tp = 0, fp = 0;
  double area = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    const double prev_fpr = static_cast<double>(fp) / static_cast<double>(neg);
    const double prev_tpr = static_cast<double>(tp) / static_cast<double>(pos);
    // Consume the whole tie group at this threshold.
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == 1 ? tp : fp)++;
      ++i;
    }
    const double cur_fpr = static_cast<double>(fp) / static_cast<double>(neg);
    const double cur_tpr = static_cast<double>(tp) / static_cast<double>(pos);
    area += (cur_fpr - prev_fpr) * (cur_tpr + prev_tpr) / 2.0;
    res.points.push_back({cur_fpr, cur_tpr});
  }
  res.auc = area;
  return res;
}

namespace {

AggregateStat collect(const std::vector<RunMetrics>& runs,
                      std::optional<double> RunMetrics::*field) {
  AggregateStat s;
  std::vector<double> vals;
  for (const auto& r : runs)
    if (r.*field) vals.push_back(*(r.*field));
  s.defined_runs = static_cast<int>(vals.size());
  if (vals.empty()) return s;
  const double mean =
      std::accumulate(vals.begin(), vals.end(), 0.0) /
      static_cast<double>(vals.size());
  s.mean = mean;
  if (vals.size() >= 2) {
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(vals.size() - 1));
  }
  return s;
}

}  // namespace

AggregateReport aggregate(const std::vector<RunMetrics>& runs) {
  if (runs.empty()) throw TooFewSamples("aggregate needs at least one run");
  AggregateReport rep;
  rep.run_count = static_cast<int>(runs.size());
  rep.sensitivity = collect(runs, &RunMetrics::sensitivity);
  rep.fpr = collect(runs, &RunMetrics::fpr);
  rep.specificity = collect(runs, &RunMetrics::specificity);
  rep.fnr = collect(runs, &RunMetrics::fnr);
  rep.precision = collect(runs, &RunMetrics::precision);
  rep.f1 = collect(runs, &RunMetrics::f1);
  rep.accuracy = collect(runs, &RunMetrics::accuracy);
  rep.auc = collect(runs, &RunMetrics::auc);
  return rep;
}

// Lentz continued fraction for the incomplete beta, after Numerical Recipes.
namespace {

double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double compare_runs(const std::vector<double>& a,
                    const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw DegenerateSamples("each sample needs length >= 2");
  auto mean_var = [](const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) /
                     static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair<double, double>{m, ss / static_cast<double>(v.size() - 1)};
  };
  const auto [ma, va] = mean_var(a);
  const auto [mb, vb] = mean_var(b);
  const double sa = va / static_cast<double>(a.size());
  const double sb = vb / static_cast<double>(b.size());
  if (sa + sb == 0.0) {
    if (ma == mb) return 1.0;
    throw DegenerateSamples("both samples have zero variance");
  }
  const double t = (ma - mb) / std::sqrt(sa + sb);
  const double dof =
      (sa + sb) * (sa + sb) /
      (sa * sa / static_cast<double>(a.size() - 1) +
       sb * sb / static_cast<double>(b.size() - 1));
  // Two-sided p from the t distribution survival function.
  const double x = dof / (dof + t * t);
  return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

RunMetrics evaluate_baseline(const data::LabeledDataset& data) {
  if (!data.has_suspected())
    throw MissingSuspectedColumn("dataset has no suspected column");
  return derive(confusion(data.labels, data.suspected));
}

std::string format_percent_cell(const AggregateStat& s) {
  if (!s.mean) return "None";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << *s.mean * 100.0;
  if (s.std_dev) {
    os << " (";
    os.precision(2);
    os << *s.std_dev * 100.0 << ")";
  }
  return os.str();
}

std::string format_auc_cell(const AggregateStat& s) {
  if (!s.mean) return "None";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << *s.mean;
  if (s.std_dev) {
    os << " (";
    os.precision(3);
    os << *s.std_dev << ")";
  }
  return os.str();
}

}  // namespace riskcore::metrics
