#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riskcore/dataset.hpp"
#include "riskcore/types.hpp"

namespace riskcore::metrics {

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  long total() const { return tp + fp + tn + fn; }
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// Ratios are nullopt when their denominator is zero; never silently 0.
struct RunMetrics {
  std::optional<double> sensitivity;
  std::optional<double> fpr;
  std::optional<double> specificity;
  std::optional<double> fnr;
  std::optional<double> precision;
  std::optional<double> f1;
  std::optional<double> accuracy;
  std::optional<double> auc;  // probabilistic models only
  std::vector<RocPoint> roc_points;
};

struct AggregateStat {
  std::optional<double> mean;
  std::optional<double> std_dev;  // needs >= 2 defined runs
  int defined_runs = 0;
};

struct AggregateReport {
  AggregateStat sensitivity, fpr, specificity, fnr, precision, f1, accuracy,
      auc;
  int run_count = 0;
};

ConfusionCounts confusion(const std::vector<int>& labels,
                          const std::vector<int>& predictions);

RunMetrics derive(const ConfusionCounts& counts);

struct RocResult {
  double auc = 0.0;
  std::vector<RocPoint> points;
};

// ROC by descending-threshold sweep; AUC by trapezoid. Equals the
// Mann-Whitney pair statistic with ties counted 0.5.
RocResult auc(const std::vector<int>& labels, const std::vector<double>& scores);

AggregateReport aggregate(const std::vector<RunMetrics>& runs);

// Two-sided Welch's t-test p-value (Welch-Satterthwaite dof).
double compare_runs(const std::vector<double>& a, const std::vector<double>& b);

// Metrics of the expert pre-screen column against the diagnosis labels.
RunMetrics evaluate_baseline(const data::LabeledDataset& data);

// Table-style cells: percentage metrics at 2 decimals, AUC at 3,
// "None" when undefined or absent.
std::string format_percent_cell(const AggregateStat& s);
std::string format_auc_cell(const AggregateStat& s);

// Regularized incomplete beta function I_x(a, b); exposed for tests.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace riskcore::metrics
