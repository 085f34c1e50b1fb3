#include "riskcore/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace riskcore::data {

void LabeledDataset::validate() const {
  const auto n = static_cast<size_t>(features.rows());
  if (labels.size() != n)
    throw ShapeMismatch("label count does not match feature rows");
  if (!suspected.empty() && suspected.size() != n)
    throw ShapeMismatch("suspected count does not match feature rows");
  if (!factor_names.empty() &&
      static_cast<Index>(factor_names.size()) != features.cols())
    throw ShapeMismatch("factor_names length does not match feature columns");
  for (int y : labels)
    if (y != 0 && y != 1) throw NonBinary("labels must be 0/1");
  for (int y : suspected)
    if (y != 0 && y != 1) throw NonBinary("suspected labels must be 0/1");
}

LabeledDataset LabeledDataset::select_rows(
    const std::vector<Index>& idx) const {
  LabeledDataset out;
  out.factor_names = factor_names;
  out.features.resize(static_cast<Index>(idx.size()), features.cols());
  out.labels.reserve(idx.size());
  if (!suspected.empty()) out.suspected.reserve(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    out.features.row(static_cast<Index>(i)) = features.row(idx[i]);
    out.labels.push_back(labels[static_cast<size_t>(idx[i])]);
    if (!suspected.empty())
      out.suspected.push_back(suspected[static_cast<size_t>(idx[i])]);
  }
  return out;
}

LabeledDataset LabeledDataset::select_columns(
    const std::vector<Index>& idx) const {
  LabeledDataset out;
  out.labels = labels;
  out.suspected = suspected;
  out.features.resize(features.rows(), static_cast<Index>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) {
    out.features.col(static_cast<Index>(j)) = features.col(idx[j]);
    if (!factor_names.empty())
      out.factor_names.push_back(factor_names[static_cast<size_t>(idx[j])]);
  }
  return out;
}

int LabeledDataset::count_label(int value) const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), value));
}

Split split(const LabeledDataset& data, const SplitConfig& cfg) {
  if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0)
    throw InvalidConfig("train_fraction must be in (0,1)");
  const Index n = data.rows();
  if (n < 2) throw DegenerateSplit("need at least two rows to split");

  std::mt19937_64 rng(cfg.seed);
  std::vector<Index> train_idx, test_idx;
  if (cfg.stratified) {
    for (int cls : {0, 1}) {
      std::vector<Index> members;
      for (Index i = 0; i < n; ++i)
        if (data.labels[static_cast<size_t>(i)] == cls) members.push_back(i);
      std::shuffle(members.begin(), members.end(), rng);
      const auto k = static_cast<size_t>(
          std::floor(cfg.train_fraction * static_cast<double>(members.size())));
      train_idx.insert(train_idx.end(), members.begin(),
                       members.begin() + static_cast<std::ptrdiff_t>(k));
      test_idx.insert(test_idx.end(),
                      members.begin() + static_cast<std::ptrdiff_t>(k),
                      members.end());
    }
  } else {
    std::vector<Index> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto k = static_cast<size_t>(
        std::floor(cfg.train_fraction * static_cast<double>(n)));
    train_idx.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    test_idx.assign(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
  }
  if (train_idx.empty() || test_idx.empty())
    throw DegenerateSplit("split produced an empty side");
  return Split{data.select_rows(train_idx), data.select_rows(test_idx)};
}

LabeledDataset undersample(const LabeledDataset& train, std::uint64_t seed) {
  std::vector<Index> pos, neg;
  for (Index i = 0; i < train.rows(); ++i)
    (train.labels[static_cast<size_t>(i)] == 1 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty())
    throw MissingClass("undersample needs both classes present");
  if (neg.size() < pos.size())
    throw MissingClass("undersample expects negatives to be the majority");

  std::mt19937_64 rng(seed);
  std::shuffle(neg.begin(), neg.end(), rng);
  neg.resize(pos.size());

  std::vector<Index> keep = pos;
  keep.insert(keep.end(), neg.begin(), neg.end());
  std::sort(keep.begin(), keep.end());
  return train.select_rows(keep);
}

Vector feature_stddev(const Matrix& features) {
  const Index n = features.rows();
  if (n < 2) throw TooFewSamples("feature_stddev needs n >= 2");
  Vector mean = features.colwise().mean();
  Vector out(features.cols());
  for (Index j = 0; j < features.cols(); ++j) {
    double ss = (features.col(j).array() - mean[j]).square().sum();
    out[j] = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("bad numeric value '" + s + "' in " + ctx);
  }
}

}  // namespace

LabeledDataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto header = split_line(line);
  int label_col = -1, suspected_col = -1;
  std::vector<int> feature_cols;
  LabeledDataset out;
  for (size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "label")
      label_col = static_cast<int>(j);
    else if (header[j] == "suspected")
      suspected_col = static_cast<int>(j);
    else {
      feature_cols.push_back(static_cast<int>(j));
      out.factor_names.push_back(header[j]);
    }
  }
  if (label_col < 0) throw DataError("dataset header lacks a 'label' column");

  std::vector<std::vector<double>> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(lineno) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    const std::string ctx = path + ":" + std::to_string(lineno);
    std::vector<double> feat;
    feat.reserve(feature_cols.size());
    for (int j : feature_cols)
      feat.push_back(parse_double(cells[static_cast<size_t>(j)], ctx));
    rows.push_back(std::move(feat));
    double y = parse_double(cells[static_cast<size_t>(label_col)], ctx);
    if (y != 0.0 && y != 1.0)
      throw NonBinary("label must be 0/1 at " + ctx);
    out.labels.push_back(static_cast<int>(y));
    if (suspected_col >= 0) {
      double s = parse_double(cells[static_cast<size_t>(suspected_col)], ctx);
      if (s != 0.0 && s != 1.0)
        throw NonBinary("suspected must be 0/1 at " + ctx);
      out.suspected.push_back(static_cast<int>(s));
    }
  }

  out.features.resize(static_cast<Index>(rows.size()),
                      static_cast<Index>(feature_cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      out.features(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  out.validate();
  return out;
}

void write_csv(const LabeledDataset& data, const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw DataError("cannot write dataset: " + path);
  std::ostringstream os;
  os.precision(17);
  for (size_t j = 0; j < data.factor_names.size(); ++j)
    os << data.factor_names[j] << ',';
  os << "label";
  if (data.has_suspected()) os << ",suspected";
  os << '\n';
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) os << data.features(i, j) << ',';
    os << data.labels[static_cast<size_t>(i)];
    if (data.has_suspected())
      os << ',' << data.suspected[static_cast<size_t>(i)];
    os << '\n';
  }
  outf << os.str();
  if (!outf) throw DataError("write failed: " + path);
}

}  // namespace riskcore::data
