#include "riskcore/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "riskcore/scaling.hpp"

namespace riskcore::data {

void SyntheticConfig::validate() const {
  if (n_samples < 2) throw InvalidConfig("n_samples must be >= 2");
  if (schema.dimension() == 0) throw InvalidConfig("schema is empty");
  if (informative_dims.size() != true_coefficients.size())
    throw InvalidConfig("informative_dims/true_coefficients length mismatch");
  for (Index d : informative_dims)
    if (d < 0 || d >= schema.dimension())
      throw InvalidConfig("informative dim out of range: " + std::to_string(d));
  if (fill_in_max <= fill_in_min)
    throw InvalidConfig("fill_in range is empty");
}

std::string SyntheticTruth::to_json_string() const {
  nlohmann::ordered_json doc;
  doc["informative_dims"] = informative_dims;
  doc["true_coefficients"] = true_coefficients;
  doc["intercept"] = intercept;
  doc["seed"] = seed;
  return doc.dump(2);
}

namespace {
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
}  // namespace

SyntheticResult generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const Index n = cfg.n_samples;
  const Index dim = cfg.schema.dimension();

  Matrix raw(n, dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> fill(cfg.fill_in_min, cfg.fill_in_max);
  for (Index i = 0; i < n; ++i) {
    Index pos = 0;
    for (const auto& q : cfg.schema.questions()) {
      switch (q.kind) {
        case schema::QuestionKind::SingleChoice: {
          std::uniform_int_distribution<int> pick(0, q.option_count - 1);
          raw(i, pos++) = static_cast<double>(pick(rng));
          break;
        }
        case schema::QuestionKind::MultiChoice:
          for (int o = 0; o < q.option_count; ++o)
            raw(i, pos++) = unit(rng) < 0.5 ? 1.0 : 0.0;
          break;
        case schema::QuestionKind::FillIn:
          raw(i, pos++) = fill(rng);
          break;
      }
    }
  }

  // Labels come from the scaled view of the informative columns so that the
  // planted coefficients live on the same [0,1] scale the models see.
  auto params = scaling::fit_scaling(raw);
  Matrix scaled = scaling::apply_scaling(params, raw);

  SyntheticResult res;
  res.dataset.features = std::move(raw);
  res.dataset.factor_names = cfg.schema.factor_names();
  res.truth.informative_dims = cfg.informative_dims;
  res.truth.true_coefficients = cfg.true_coefficients;
  res.truth.intercept = cfg.intercept;
  res.truth.seed = cfg.seed;
  res.true_probabilities.resize(static_cast<size_t>(n));
  res.dataset.labels.resize(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    double z = cfg.intercept;
    for (size_t k = 0; k < cfg.informative_dims.size(); ++k)
      z += cfg.true_coefficients[k] * scaled(i, cfg.informative_dims[k]);
    const double p = sigmoid(z);
    res.true_probabilities[static_cast<size_t>(i)] = p;
    res.dataset.labels[static_cast<size_t>(i)] = unit(rng) < p ? 1 : 0;
  }

  // Suspected labels: noisy threshold on the true risk, mimicking an
  // expert pre-screen with limited sensitivity.
  std::vector<double> sorted = res.true_probabilities;
  std::sort(sorted.begin(), sorted.end());
  const auto qi = static_cast<size_t>(
      std::min<double>(static_cast<double>(sorted.size() - 1),
                       cfg.suspected_quantile *
                           static_cast<double>(sorted.size())));
  const double threshold = sorted[qi];
  res.dataset.suspected.resize(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    int s = res.true_probabilities[static_cast<size_t>(i)] > threshold ? 1 : 0;
    if (unit(rng) < cfg.suspected_flip) s = 1 - s;
    res.dataset.suspected[static_cast<size_t>(i)] = s;
  }

  res.dataset.validate();
  return res;
}

schema::QuestionnaireSchema default_schema_84() {
  using schema::QuestionKind;
  using schema::QuestionSpec;
  std::vector<QuestionSpec> qs;
  auto add = [&qs](const std::string& id, QuestionKind kind, int opts) {
    QuestionSpec q;
    q.id = id;
    q.name = id;
    q.kind = kind;
    q.option_count = opts;
    qs.push_back(std::move(q));
  };
  // 20 single-choice (20) + 10 multi-choice of 4 (40) + 24 fill-in (24) = 84.
  for (int i = 0; i < 20; ++i)
    add("S" + std::to_string(i), QuestionKind::SingleChoice, 3);
  for (int i = 0; i < 10; ++i)
    add("M" + std::to_string(i), QuestionKind::MultiChoice, 4);
  for (int i = 0; i < 24; ++i)
    add("F" + std::to_string(i), QuestionKind::FillIn, 0);
  return schema::QuestionnaireSchema(std::move(qs));
}

}  // namespace riskcore::data
