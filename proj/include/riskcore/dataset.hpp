#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskcore/types.hpp"

namespace riskcore::data {

struct LabeledDataset {
  Matrix features;              // n x N
  std::vector<int> labels;      // 0/1, length n
  std::vector<int> suspected;   // 0/1, length n, may be empty
  std::vector<std::string> factor_names;  // length N

  Index rows() const { return features.rows(); }
  Index cols() const { return features.cols(); }
  bool has_suspected() const { return !suspected.empty(); }

  // Row counts agree, labels binary. Throws on violation.
  void validate() const;

  LabeledDataset select_rows(const std::vector<Index>& idx) const;
  LabeledDataset select_columns(const std::vector<Index>& idx) const;

  int count_label(int value) const;
};

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = false;
};

struct Split {
  LabeledDataset train;
  LabeledDataset test;
};

// Uniform random permutation by seed; train size = floor(train_fraction * n).
Split split(const LabeledDataset& data, const SplitConfig& cfg);

// Keeps all positives plus an equal-size uniformly random negative subset.
LabeledDataset undersample(const LabeledDataset& train, std::uint64_t seed);

// Per-column sample standard deviation (n-1 denominator).
Vector feature_stddev(const Matrix& features);

LabeledDataset read_csv(const std::string& path);
void write_csv(const LabeledDataset& data, const std::string& path);

}  // namespace riskcore::data
