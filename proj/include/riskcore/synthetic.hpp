#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskcore/dataset.hpp"
#include "riskcore/schema.hpp"

namespace riskcore::data {

struct SyntheticConfig {
  schema::QuestionnaireSchema schema;
  Index n_samples = 0;
  std::vector<Index> informative_dims;   // indices into the risk vector
  std::vector<double> true_coefficients; // one per informative dim
  double intercept = 0.0;                // controls prevalence
  std::uint64_t seed = 0;
  double fill_in_min = 0.0;    // fill-in answers drawn uniformly from
  double fill_in_max = 100.0;  // [fill_in_min, fill_in_max]
  // Suspected labels: thresholded true risk with flip_probability noise.
  double suspected_quantile = 0.9;
  double suspected_flip = 0.3;

  void validate() const;
};

struct SyntheticTruth {
  std::vector<Index> informative_dims;
  std::vector<double> true_coefficients;
  double intercept = 0.0;
  std::uint64_t seed = 0;

  std::string to_json_string() const;
};

struct SyntheticResult {
  LabeledDataset dataset;  // raw (unscaled) features
  SyntheticTruth truth;
  std::vector<double> true_probabilities;  // per row
};

// Uniform raw responses per question kind; labels Bernoulli(sigmoid(
// intercept + sum coeff * scaled informative feature)). Deterministic by seed.
SyntheticResult generate_synthetic(const SyntheticConfig& cfg);

// Default 84-factor schema used by the CLI when none is supplied: a mix of
// single-choice, multi-choice, and fill-in questions whose widths sum to 84.
schema::QuestionnaireSchema default_schema_84();

}  // namespace riskcore::data
