#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riskcore/adaboost.hpp"
#include "riskcore/dataset.hpp"
#include "riskcore/importance.hpp"
#include "riskcore/knn.hpp"
#include "riskcore/logistic.hpp"
#include "riskcore/metrics.hpp"
#include "riskcore/mlp.hpp"
#include "riskcore/pca.hpp"
#include "riskcore/scaling.hpp"
#include "riskcore/svm.hpp"
#include "riskcore/synthetic.hpp"
#include "riskcore/tree.hpp"

namespace riskcore::pipeline {

inline const std::vector<std::string> kAllModels = {
    "baseline", "lr", "knn", "svm", "dt", "adaboost", "dnn"};

struct ModelOverrides {
  int knn_k = 5;
  models::LrConfig lr;
  models::SvmConfig svm;
  models::TreeConfig tree;
  models::BoostConfig boost;
  mlp::MlpConfig mlp;  // layer_sizes.front() is replaced by the data width
};

struct ExperimentConfig {
  std::string dataset_path;  // empty when synthetic is set
  std::optional<data::SyntheticConfig> synthetic;
  std::vector<std::string> models = kAllModels;
  int repeats = 10;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.8;
  bool stratified_split = false;
  scaling::Orientation orientation = scaling::Orientation::Paper;
  bool leakage_safe = false;  // reuse train scaling params on the test set
  std::vector<double> ablation_fractions = {0.10, 0.25, 0.50, 0.75, 1.00};
  importance::LrScoreMode lr_score_mode =
      importance::LrScoreMode::AbsCoefficient;
  std::string out_dir = "out";
  ModelOverrides overrides;

  void validate() const;
};

// Sub-stream offsets keep the per-run seed streams disjoint.
constexpr std::uint64_t kUndersampleSeedOffset = 10'000;
constexpr std::uint64_t kModelSeedOffset = 20'000;

struct PreparedRun {
  data::LabeledDataset train;  // balanced, scaled
  data::LabeledDataset test;   // unbalanced, scaled
  Vector sigma;                // per-column std of the scaled train matrix
  std::uint64_t model_seed = 0;
};

// split -> undersample -> per-set Eq. 1 scaling for repeat r.
PreparedRun prepare_run(const data::LabeledDataset& data,
                        const ExperimentConfig& cfg, int run_index);

struct ModelRunResult {
  std::vector<metrics::RunMetrics> per_run;
  metrics::AggregateReport aggregate;
};

struct ExperimentReport {
  std::vector<std::string> model_order;
  std::map<std::string, ModelRunResult> models;
  // Two-sided Welch p-values on per-run sensitivity; NaN when degenerate.
  Matrix p_values;
};

ExperimentReport run_experiment(const data::LabeledDataset& data,
                                const ExperimentConfig& cfg);

struct ImportanceReport {
  std::vector<std::string> factor_names;
  // One score vector per repeat.
  std::vector<Vector> dnn_scores;
  std::vector<Vector> lr_scores;
  std::vector<std::vector<Index>> dnn_top_per_run;  // per-repeat top-10% sets
  Vector dnn_mean, dnn_std, lr_mean, lr_std;
  std::vector<Index> top_fraction_indices;  // from mean scores
  double top_fraction = 0.10;
};

ImportanceReport run_importance(const data::LabeledDataset& data,
                                const ExperimentConfig& cfg,
                                double top_fraction = 0.10);

struct AblationRow {
  double fraction = 1.0;
  Index selected_count = 0;
  metrics::AggregateReport aggregate;
  std::vector<metrics::RunMetrics> per_run;
};

struct AblationResult {
  std::vector<AblationRow> rows;  // ascending fraction, 1.0 always present
};

AblationResult run_ablation(const data::LabeledDataset& data,
                            const ExperimentConfig& cfg);

struct PcaReport {
  std::vector<pca::LayerProjection> layers;
  std::vector<int> labels;  // of the projected set
  std::vector<double> probe_accuracy;  // one per layer
};

// Trains the DNN on repeat 0 and projects the test-set representations.
PcaReport run_pca(const data::LabeledDataset& data,
                  const ExperimentConfig& cfg);

// Serialization helpers used by the CLI; all deterministic.
std::string report_to_json(const ExperimentReport& report);
std::string report_to_table_csv(const ExperimentReport& report);
std::string p_values_to_csv(const ExperimentReport& report);
std::string importance_to_csv(const ImportanceReport& rep, bool dnn);
std::string ablation_to_csv(const AblationResult& res);

// FNV-1a 64-bit digest of a file, hex encoded.
std::string file_digest(const std::string& path);

}  // namespace riskcore::pipeline
