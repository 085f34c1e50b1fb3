#include "riskcore/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace riskcore::pipeline {

void ExperimentConfig::validate() const {
  if (repeats < 1) throw InvalidConfig("repeats must be >= 1");
  if (models.empty()) throw InvalidConfig("select at least one model");
  for (const auto& m : models)
    if (std::find(kAllModels.begin(), kAllModels.end(), m) == kAllModels.end())
      throw InvalidConfig("unknown model: " + m);
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw InvalidConfig("train_fraction must be in (0,1)");
  for (double f : ablation_fractions)
    if (f <= 0.0 || f > 1.0)
      throw InvalidConfig("ablation fractions must be in (0,1]");
}

PreparedRun prepare_run(const data::LabeledDataset& data,
                        const ExperimentConfig& cfg, int run_index) {
  const auto r = static_cast<std::uint64_t>(run_index);
  data::SplitConfig split_cfg;
  split_cfg.train_fraction = cfg.train_fraction;
  split_cfg.seed = cfg.base_seed + r;
  split_cfg.stratified = cfg.stratified_split;
  auto split = data::split(data, split_cfg);

  auto balanced =
      data::undersample(split.train, cfg.base_seed + kUndersampleSeedOffset + r);

  const auto train_params =
      scaling::fit_scaling(balanced.features, cfg.orientation);
  PreparedRun run;
  run.train = balanced;
  run.train.features = scaling::apply_scaling(train_params, balanced.features);
  run.test = split.test;
  if (cfg.leakage_safe) {
    run.test.features = scaling::apply_scaling(train_params, split.test.features);
  } else {
    const auto test_params =
        scaling::fit_scaling(split.test.features, cfg.orientation);
    run.test.features = scaling::apply_scaling(test_params, split.test.features);
  }
  run.sigma = data::feature_stddev(run.train.features);
  run.model_seed = cfg.base_seed + kModelSeedOffset + r;
  return run;
}

namespace {

std::unique_ptr<models::Classifier> make_classifier(
    const std::string& name, const ExperimentConfig& cfg,
    std::uint64_t model_seed, Index input_size) {
  const auto& ov = cfg.overrides;
  if (name == "lr") {
    auto c = ov.lr;
    c.seed = model_seed;
    return std::make_unique<models::LrClassifier>(c);
  }
  if (name == "knn") return std::make_unique<models::KnnClassifier>(ov.knn_k);
  if (name == "svm") {
    auto c = ov.svm;
    c.seed = model_seed;
    return std::make_unique<models::SvmClassifier>(c);
  }
  if (name == "dt") return std::make_unique<models::TreeClassifier>(ov.tree);
  if (name == "adaboost")
    return std::make_unique<models::AdaBoostClassifier>(ov.boost);
  if (name == "dnn") {
    auto c = ov.mlp;
    c.layer_sizes.front() = input_size;
    c.seed = model_seed;
    struct MlpClassifier : models::Classifier {
      mlp::MlpConfig cfg;
      mlp::MlpModel model;
      explicit MlpClassifier(mlp::MlpConfig c) : cfg(std::move(c)) {}
      void fit(const data::LabeledDataset& train) override {
        model = mlp::train(train, cfg);
      }
      double predict_proba(const Vector& x) const override {
        return model.forward_one(x);
      }
      bool probabilistic() const override { return true; }
      std::string name() const override { return "dnn"; }
    };
    return std::make_unique<MlpClassifier>(c);
  }
  throw InvalidConfig("unknown model: " + name);
}

metrics::RunMetrics evaluate_on_test(const models::Classifier& clf,
                                     const data::LabeledDataset& test) {
  auto m = metrics::derive(
      metrics::confusion(test.labels, clf.predict_rows(test.features)));
  if (clf.probabilistic()) {
    const auto roc = metrics::auc(test.labels, clf.score_rows(test.features));
    m.auc = roc.auc;
    m.roc_points = roc.points;
  }
  return m;
}

}  // namespace

ExperimentReport run_experiment(const data::LabeledDataset& data,
                                const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  for (const auto& name : kAllModels)
    if (std::find(cfg.models.begin(), cfg.models.end(), name) !=
        cfg.models.end())
      report.model_order.push_back(name);

  for (int r = 0; r < cfg.repeats; ++r) {
    const PreparedRun run = prepare_run(data, cfg, r);
    for (const auto& name : report.model_order) {
      metrics::RunMetrics m;
      if (name == "baseline") {
        m = metrics::evaluate_baseline(run.test);
      } else {
        auto clf = make_classifier(name, cfg, run.model_seed,
                                   run.train.cols());
        clf->fit(run.train);
        m = evaluate_on_test(*clf, run.test);
      }
      report.models[name].per_run.push_back(std::move(m));
    }
  }
  for (auto& [name, res] : report.models)
    res.aggregate = metrics::aggregate(res.per_run);

  const auto k = report.model_order.size();
  report.p_values.resize(static_cast<Index>(k), static_cast<Index>(k));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i == j) {
        report.p_values(static_cast<Index>(i), static_cast<Index>(j)) = 1.0;
        continue;
      }
      auto collect = [&report](const std::string& name) {
        std::vector<double> v;
        for (const auto& m : report.models.at(name).per_run)
          if (m.sensitivity) v.push_back(*m.sensitivity);
        return v;
      };
      double p = std::numeric_limits<double>::quiet_NaN();
      try {
        p = metrics::compare_runs(collect(report.model_order[i]),
                                  collect(report.model_order[j]));
      } catch (const DegenerateSamples&) {
      }
      report.p_values(static_cast<Index>(i), static_cast<Index>(j)) = p;
    }
  }
  return report;
}

ImportanceReport run_importance(const data::LabeledDataset& data,
                                const ExperimentConfig& cfg,
                                double top_fraction) {
  cfg.validate();
  ImportanceReport rep;
  rep.factor_names = data.factor_names;
  rep.top_fraction = top_fraction;

  for (int r = 0; r < cfg.repeats; ++r) {
    const PreparedRun run = prepare_run(data, cfg, r);

    auto mlp_cfg = cfg.overrides.mlp;
    mlp_cfg.layer_sizes.front() = run.train.cols();
    mlp_cfg.seed = run.model_seed;
    const auto dnn = mlp::train(run.train, mlp_cfg);
    const auto dnn_rank = importance::dnn_contributions(dnn, run.sigma,
                                                        data.factor_names);
    rep.dnn_scores.push_back(dnn_rank.scores);
    rep.dnn_top_per_run.push_back(
        importance::select_top_fraction(dnn_rank, top_fraction));

    auto lr_cfg = cfg.overrides.lr;
    lr_cfg.seed = run.model_seed;
    const auto lr = models::lr_fit(run.train, lr_cfg);
    rep.lr_scores.push_back(
        importance::lr_contributions(lr, run.sigma, cfg.lr_score_mode,
                                     data.factor_names)
            .scores);
  }

  auto summarize = [](const std::vector<Vector>& scores, Vector& mean,
                      Vector& sd) {
    const Index n = scores.front().size();
    mean = Vector::Zero(n);
    for (const auto& s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    sd = Vector::Zero(n);
    if (scores.size() >= 2) {
      for (const auto& s : scores)
        sd += (s - mean).cwiseProduct(s - mean);
      sd = (sd / static_cast<double>(scores.size() - 1)).cwiseSqrt();
    }
  };
  summarize(rep.dnn_scores, rep.dnn_mean, rep.dnn_std);
  summarize(rep.lr_scores, rep.lr_mean, rep.lr_std);

  importance::ContributionRanking mean_rank;
  {
    Vector scores = rep.dnn_mean;
    std::vector<Index> order(static_cast<size_t>(scores.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&scores](Index a, Index b) {
                       return scores[a] > scores[b];
                     });
    mean_rank.scores = std::move(scores);
    mean_rank.sigma = Vector::Zero(rep.dnn_mean.size());
    mean_rank.order = std::move(order);
    mean_rank.factor_names = rep.factor_names;
  }
  rep.top_fraction_indices =
      importance::select_top_fraction(mean_rank, top_fraction);
  return rep;
}

AblationResult run_ablation(const data::LabeledDataset& data,
                            const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> fractions = cfg.ablation_fractions;
  if (std::find(fractions.begin(), fractions.end(), 1.0) == fractions.end())
    fractions.push_back(1.0);
  std::sort(fractions.begin(), fractions.end());

  AblationResult res;
  res.rows.resize(fractions.size());
  for (size_t fi = 0; fi < fractions.size(); ++fi)
    res.rows[fi].fraction = fractions[fi];

  for (int r = 0; r < cfg.repeats; ++r) {
    const PreparedRun run = prepare_run(data, cfg, r);

    auto mlp_cfg = cfg.overrides.mlp;
    mlp_cfg.layer_sizes.front() = run.train.cols();
    mlp_cfg.seed = run.model_seed;
    const auto full_model = mlp::train(run.train, mlp_cfg);
    const auto ranking = importance::dnn_contributions(full_model, run.sigma,
                                                       data.factor_names);

    for (size_t fi = 0; fi < fractions.size(); ++fi) {
      AblationRow& row = res.rows[fi];
      metrics::RunMetrics m;
      if (fractions[fi] == 1.0) {
        row.selected_count = run.train.cols();
        struct Wrap : models::Classifier {
          const mlp::MlpModel* model;
          void fit(const data::LabeledDataset&) override {}
          double predict_proba(const Vector& x) const override {
            return model->forward_one(x);
          }
          bool probabilistic() const override { return true; }
          std::string name() const override { return "dnn"; }
        } wrap;
        wrap.model = &full_model;
        m = evaluate_on_test(wrap, run.test);
      } else {
        auto selected =
            importance::select_top_fraction(ranking, fractions[fi]);
        std::sort(selected.begin(), selected.end());
        row.selected_count = static_cast<Index>(selected.size());
        const auto train_sub = run.train.select_columns(selected);
        const auto test_sub = run.test.select_columns(selected);
        auto sub_cfg = mlp_cfg;
        sub_cfg.layer_sizes.front() = train_sub.cols();
        const auto sub_model = mlp::train(train_sub, sub_cfg);
        struct Wrap : models::Classifier {
          const mlp::MlpModel* model;
          void fit(const data::LabeledDataset&) override {}
          double predict_proba(const Vector& x) const override {
            return model->forward_one(x);
          }
          bool probabilistic() const override { return true; }
          std::string name() const override { return "dnn"; }
        } wrap;
        wrap.model = &sub_model;
        m = evaluate_on_test(wrap, test_sub);
      }
      row.per_run.push_back(std::move(m));
    }
  }
  for (auto& row : res.rows) row.aggregate = metrics::aggregate(row.per_run);
  return res;
}

PcaReport run_pca(const data::LabeledDataset& data,
                  const ExperimentConfig& cfg) {
  cfg.validate();
  const PreparedRun run = prepare_run(data, cfg, 0);
  auto mlp_cfg = cfg.overrides.mlp;
  mlp_cfg.layer_sizes.front() = run.train.cols();
  mlp_cfg.seed = run.model_seed;
  const auto model = mlp::train(run.train, mlp_cfg);

  PcaReport rep;
  rep.labels = run.test.labels;
  rep.layers = pca::project_layers(model, run.test.features);
  for (const auto& layer : rep.layers)
    rep.probe_accuracy.push_back(
        pca::separability_probe(layer.coordinates, rep.labels));
  return rep;
}

namespace {

nlohmann::ordered_json metric_to_json(const metrics::RunMetrics& m) {
  nlohmann::ordered_json j;
  auto put = [&j](const char* key, const std::optional<double>& v) {
    if (v)
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  put("sensitivity", m.sensitivity);
  put("fpr", m.fpr);
  put("specificity", m.specificity);
  put("fnr", m.fnr);
  put("precision", m.precision);
  put("f1", m.f1);
  put("accuracy", m.accuracy);
  put("auc", m.auc);
  return j;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["models"] = nlohmann::ordered_json::object();
  for (const auto& name : report.model_order) {
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& m : report.models.at(name).per_run)
      runs.push_back(metric_to_json(m));
    doc["models"][name] = std::move(runs);
  }
  return doc.dump(2);
}

std::string report_to_table_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "Model,Sensitivity,FPR,Specificity,FNR,Accuracy,AUC\n";
  for (const auto& name : report.model_order) {
    const auto& a = report.models.at(name).aggregate;
    os << name << ',' << metrics::format_percent_cell(a.sensitivity) << ','
       << metrics::format_percent_cell(a.fpr) << ','
       << metrics::format_percent_cell(a.specificity) << ','
       << metrics::format_percent_cell(a.fnr) << ','
       << metrics::format_percent_cell(a.accuracy) << ','
       << metrics::format_auc_cell(a.auc) << '\n';
  }
  return os.str();
}

std::string p_values_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os.precision(6);
  os << "model";
  for (const auto& name : report.model_order) os << ',' << name;
  os << '\n';
  for (size_t i = 0; i < report.model_order.size(); ++i) {
    os << report.model_order[i];
    for (size_t j = 0; j < report.model_order.size(); ++j) {
      const double p =
          report.p_values(static_cast<Index>(i), static_cast<Index>(j));
      if (std::isnan(p))
        os << ",NA";
      else
        os << ',' << p;
    }
    os << '\n';
  }
  return os.str();
}

std::string importance_to_csv(const ImportanceReport& rep, bool dnn) {
  const Vector& mean = dnn ? rep.dnn_mean : rep.lr_mean;
  const Vector& sd = dnn ? rep.dnn_std : rep.lr_std;
  std::ostringstream os;
  os.precision(12);
  os << "factor,score_mean,score_std\n";
  for (Index i = 0; i < mean.size(); ++i) {
    const std::string name =
        rep.factor_names.empty() ? "f" + std::to_string(i)
                                 : rep.factor_names[static_cast<size_t>(i)];
    os << name << ',' << mean[i] << ',' << sd[i] << '\n';
  }
  return os.str();
}

std::string ablation_to_csv(const AblationResult& res) {
  std::ostringstream os;
  os << "fraction,selected,sensitivity_mean,sensitivity_std,fpr_mean,"
        "fpr_std,auc_mean,auc_std\n";
  os.precision(12);
  auto cell = [&os](const std::optional<double>& v) {
    if (v)
      os << *v;
    else
      os << "NA";
  };
  for (const auto& row : res.rows) {
    os << row.fraction << ',' << row.selected_count << ',';
    cell(row.aggregate.sensitivity.mean);
    os << ',';
    cell(row.aggregate.sensitivity.std_dev);
    os << ',';
    cell(row.aggregate.fpr.mean);
    os << ',';
    cell(row.aggregate.fpr.std_dev);
    os << ',';
    cell(row.aggregate.auc.mean);
    os << ',';
    cell(row.aggregate.auc.std_dev);
    os << '\n';
  }
  return os.str();
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open for digest: " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace riskcore::pipeline
