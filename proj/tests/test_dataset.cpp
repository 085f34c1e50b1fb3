#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "riskcore/dataset.hpp"
#include "riskcore/synthetic.hpp"

using namespace riskcore;
using namespace riskcore::data;

namespace {

LabeledDataset toy(Index n, Index d, double pos_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LabeledDataset ds;
  ds.features.resize(n, d);
  for (Index i = 0; i < ds.features.size(); ++i) ds.features(i) = unit(rng);
  for (Index i = 0; i < n; ++i)
    ds.labels.push_back(unit(rng) < pos_rate ? 1 : 0);
  for (Index j = 0; j < d; ++j)
    ds.factor_names.push_back("f" + std::to_string(j));
  return ds;
}

std::multiset<double> row_keys(const LabeledDataset& ds) {
  std::multiset<double> keys;
  for (Index i = 0; i < ds.rows(); ++i)
    keys.insert(ds.features.row(i).sum() +
                1000.0 * ds.labels[static_cast<size_t>(i)]);
  return keys;
}

}  // namespace

TEST_CASE("split sizes follow the floor rule") {
  auto ds = toy(10, 3, 0.5, 1);
  const auto sp = split(ds, {0.8, 7, false});
  CHECK(sp.train.rows() == 8);
  CHECK(sp.test.rows() == 2);
}

TEST_CASE("split sizes at the reference scale") {
  // floor(0.8 * 55891) = 44712.
  SplitConfig cfg{0.8, 0, false};
  const auto n = 55891;
  const auto k = static_cast<Index>(std::floor(cfg.train_fraction * n));
  CHECK(k == 44712);
  CHECK(n - k == 11179);
}

TEST_CASE("split is deterministic and partitions exactly") {
  auto ds = toy(57, 4, 0.4, 2);
  const auto a = split(ds, {0.8, 11, false});
  const auto b = split(ds, {0.8, 11, false});
  CHECK(a.train.features == b.train.features);
  CHECK(a.test.features == b.test.features);

  // Union of the two sides recovers the original row multiset.
  auto keys = row_keys(a.train);
  auto test_keys = row_keys(a.test);
  keys.insert(test_keys.begin(), test_keys.end());
  CHECK(keys == row_keys(ds));
}

TEST_CASE("stratified split keeps per-class fractions") {
  auto ds = toy(100, 2, 0.3, 5);
  const auto sp = split(ds, {0.8, 3, true});
  const auto pos_total = ds.count_label(1);
  const auto pos_train = sp.train.count_label(1);
  CHECK(pos_train ==
        static_cast<int>(std::floor(0.8 * static_cast<double>(pos_total))));
}

TEST_CASE("degenerate splits are rejected") {
  auto ds = toy(1, 2, 0.5, 1);
  CHECK_THROWS_AS(split(ds, {0.8, 0, false}), DegenerateSplit);
}

TEST_CASE("undersample balances classes and keeps all positives") {
  auto ds = toy(600, 3, 0.08, 9);
  const int pos = ds.count_label(1);
  REQUIRE(pos > 0);
  const auto balanced = undersample(ds, 13);
  CHECK(balanced.count_label(1) == pos);
  CHECK(balanced.count_label(0) == pos);
  CHECK(balanced.rows() == 2 * pos);
}

TEST_CASE("undersample at the reference counts") {
  auto ds = toy(200, 2, 0.0, 1);
  ds.labels.assign(200, 0);
  for (int i = 0; i < 50; ++i) ds.labels[static_cast<size_t>(i)] = 1;
  const auto balanced = undersample(ds, 1);
  CHECK(balanced.rows() == 100);
}

TEST_CASE("already balanced input passes through with equal counts") {
  auto ds = toy(40, 2, 0.0, 1);
  for (size_t i = 0; i < 20; ++i) ds.labels[i] = 1;
  for (size_t i = 20; i < 40; ++i) ds.labels[i] = 0;
  const auto balanced = undersample(ds, 4);
  CHECK(balanced.count_label(1) == 20);
  CHECK(balanced.count_label(0) == 20);
}

TEST_CASE("undersample without positives fails") {
  auto ds = toy(20, 2, 0.0, 1);
  ds.labels.assign(20, 0);
  CHECK_THROWS_AS(undersample(ds, 0), MissingClass);
}

TEST_CASE("undersample output rows are a subset of input rows") {
  auto ds = toy(300, 3, 0.1, 17);
  const auto balanced = undersample(ds, 23);
  std::set<std::vector<double>> input_rows;
  for (Index i = 0; i < ds.rows(); ++i) {
    const Vector r = ds.features.row(i).transpose();
    input_rows.insert({r.data(), r.data() + r.size()});
  }
  for (Index i = 0; i < balanced.rows(); ++i) {
    const Vector r = balanced.features.row(i).transpose();
    CHECK(input_rows.count({r.data(), r.data() + r.size()}) == 1);
  }
}

TEST_CASE("feature_stddev uses the n-1 denominator") {
  Matrix m(2, 1);
  m << 0, 1;
  CHECK(feature_stddev(m)[0] == doctest::Approx(std::sqrt(0.5)));
  Matrix m2(3, 2);
  m2 << 2, 7, 4, 7, 6, 7;
  const auto sd = feature_stddev(m2);
  CHECK(sd[0] == doctest::Approx(2.0));
  CHECK(sd[1] == 0.0);
  CHECK_THROWS_AS(feature_stddev(Matrix(1, 2)), TooFewSamples);
}

TEST_CASE("synthetic generator is deterministic and honors the schema") {
  SyntheticConfig cfg;
  cfg.schema = default_schema_84();
  cfg.n_samples = 200;
  cfg.seed = 5;
  const auto a = generate_synthetic(cfg);
  const auto b = generate_synthetic(cfg);
  CHECK(a.dataset.features == b.dataset.features);
  CHECK(a.dataset.labels == b.dataset.labels);
  CHECK(a.dataset.features.cols() == 84);
}

TEST_CASE("null generator hits ~50% prevalence at large n") {
  SyntheticConfig cfg;
  cfg.schema = default_schema_84();
  cfg.n_samples = 10000;
  cfg.intercept = 0.0;
  cfg.seed = 12;
  const auto res = generate_synthetic(cfg);
  const double rate =
      static_cast<double>(res.dataset.count_label(1)) / 10000.0;
  CHECK(rate > 0.45);
  CHECK(rate < 0.55);
}

TEST_CASE("synthetic prevalence tracks the analytic sigmoid expectation") {
  SyntheticConfig cfg;
  cfg.schema = default_schema_84();
  cfg.n_samples = 8000;
  cfg.informative_dims = {0, 1, 2};
  cfg.true_coefficients = {2.0, -1.0, 3.0};
  cfg.intercept = -1.0;
  cfg.seed = 77;
  const auto res = generate_synthetic(cfg);
  double expected = 0.0;
  for (double p : res.true_probabilities) expected += p;
  expected /= static_cast<double>(cfg.n_samples);
  const double rate = static_cast<double>(res.dataset.count_label(1)) /
                      static_cast<double>(cfg.n_samples);
  // Monte-Carlo tolerance: 5 sigma of a Bernoulli mean at n=8000.
  CHECK(std::fabs(rate - expected) < 5.0 * 0.5 / std::sqrt(8000.0));
}

TEST_CASE("synthetic config validation") {
  SyntheticConfig cfg;
  cfg.schema = default_schema_84();
  cfg.n_samples = 1;
  CHECK_THROWS_AS(generate_synthetic(cfg), InvalidConfig);
  cfg.n_samples = 10;
  cfg.informative_dims = {99};
  cfg.true_coefficients = {1.0};
  CHECK_THROWS_AS(generate_synthetic(cfg), InvalidConfig);
}

TEST_CASE("CSV round trip preserves the dataset") {
  auto ds = toy(25, 4, 0.4, 8);
  ds.suspected.assign(25, 0);
  ds.suspected[3] = 1;
  const std::string path = "riskcore_test_dataset.csv";
  write_csv(ds, path);
  const auto back = read_csv(path);
  CHECK(back.rows() == ds.rows());
  CHECK(back.cols() == ds.cols());
  CHECK(back.labels == ds.labels);
  CHECK(back.suspected == ds.suspected);
  CHECK((back.features - ds.features).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.factor_names == ds.factor_names);
  std::remove(path.c_str());
}

TEST_CASE("CSV reader rejects malformed input") {
  const std::string path = "riskcore_test_bad.csv";
  {
    std::ofstream out(path);
    out << "a,b,label\n1,2\n";
  }
  CHECK_THROWS_AS(read_csv(path), DataError);
  {
    std::ofstream out(path);
    out << "a,b\n1,2\n";
  }
  CHECK_THROWS_AS(read_csv(path), DataError);
  {
    std::ofstream out(path);
    out << "a,label\n1,3\n";
  }
  CHECK_THROWS_AS(read_csv(path), NonBinary);
  std::remove(path.c_str());
}
