#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "riskcore/mlp.hpp"

using namespace riskcore;
using namespace riskcore::mlp;

namespace {

Batch random_batch(Index n, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Batch b;
  b.features.resize(n, d);
  for (Index i = 0; i < b.features.size(); ++i) b.features(i) = unit(rng);
  std::uniform_int_distribution<int> bit(0, 1);
  for (Index i = 0; i < n; ++i) b.labels.push_back(bit(rng));
  return b;
}

// Central finite differences over every parameter of a copy of the model.
Gradients finite_difference(const MlpModel& model, const Batch& batch,
                            double h) {
  Gradients fd;
  MlpModel work = model;
  for (size_t l = 0; l < model.weights().size(); ++l) {
    Matrix g(model.weights()[l].rows(), model.weights()[l].cols());
    for (Index i = 0; i < g.size(); ++i) {
      const double orig = work.mutable_weights()[l](i);
      work.mutable_weights()[l](i) = orig + h;
      const double up = loss(work, batch);
      work.mutable_weights()[l](i) = orig - h;
      const double down = loss(work, batch);
      work.mutable_weights()[l](i) = orig;
      g(i) = (up - down) / (2.0 * h);
    }
    fd.weights.push_back(std::move(g));
    Vector gb(model.biases()[l].size());
    for (Index i = 0; i < gb.size(); ++i) {
      const double orig = work.mutable_biases()[l][i];
      work.mutable_biases()[l][i] = orig + h;
      const double up = loss(work, batch);
      work.mutable_biases()[l][i] = orig - h;
      const double down = loss(work, batch);
      work.mutable_biases()[l][i] = orig;
      gb[i] = (up - down) / (2.0 * h);
    }
    fd.biases.push_back(std::move(gb));
  }
  return fd;
}

double tensor_rel_error(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() /
         (b.cwiseAbs().maxCoeff() + 1e-8);
}

data::LabeledDataset separable_2d(Index n_per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.3);
  data::LabeledDataset ds;
  ds.features.resize(2 * n_per_class, 2);
  for (Index i = 0; i < n_per_class; ++i) {
    ds.features(i, 0) = gauss(rng) - 1.5;
    ds.features(i, 1) = gauss(rng) - 1.5;
    ds.labels.push_back(0);
  }
  for (Index i = n_per_class; i < 2 * n_per_class; ++i) {
    ds.features(i, 0) = gauss(rng) + 1.5;
    ds.features(i, 1) = gauss(rng) + 1.5;
    ds.labels.push_back(1);
  }
  return ds;
}

}  // namespace

TEST_CASE("init shapes, zero biases, determinism") {
  MlpConfig cfg;
  cfg.layer_sizes = {84, 8, 8, 1};
  cfg.seed = 3;
  const auto a = MlpModel::init(cfg);
  const auto b = MlpModel::init(cfg);
  REQUIRE(a.weights().size() == 3);
  CHECK(a.weights()[0].rows() == 84);
  CHECK(a.weights()[0].cols() == 8);
  CHECK(a.weights()[1].rows() == 8);
  CHECK(a.weights()[1].cols() == 8);
  CHECK(a.weights()[2].rows() == 8);
  CHECK(a.weights()[2].cols() == 1);
  for (const auto& bias : a.biases()) CHECK(bias.cwiseAbs().maxCoeff() == 0.0);
  for (size_t l = 0; l < 3; ++l) CHECK(a.weights()[l] == b.weights()[l]);
}

TEST_CASE("init weight range follows the fan-in/fan-out limit") {
  MlpConfig cfg;
  cfg.layer_sizes = {10, 4, 4, 1};
  const auto m = MlpModel::init(cfg);
  const double limit0 = std::sqrt(6.0 / (10 + 4));
  CHECK(m.weights()[0].cwiseAbs().maxCoeff() <= limit0);
}

TEST_CASE("config validation") {
  MlpConfig cfg;
  cfg.layer_sizes = {4, 1};
  CHECK_THROWS_AS(MlpModel::init(cfg), InvalidConfig);
  cfg.layer_sizes = {4, 3, 2};
  CHECK_THROWS_AS(MlpModel::init(cfg), InvalidConfig);
}

TEST_CASE("forward with zero parameters gives 0.5") {
  MlpConfig cfg;
  cfg.layer_sizes = {5, 3, 3, 1};
  auto m = MlpModel::init(cfg);
  for (auto& w : m.mutable_weights()) w.setZero();
  Vector x(5);
  x << 1, 2, 3, 4, 5;
  CHECK(m.forward_one(x) == doctest::Approx(0.5));
}

TEST_CASE("hidden activations are ReLU-clipped and output is in (0,1)") {
  MlpConfig cfg;
  cfg.layer_sizes = {3, 4, 4, 1};
  cfg.seed = 9;
  const auto m = MlpModel::init(cfg);
  Matrix x(6, 3);
  x << 1, -2, 3, 0, 0, 0, -5, 5, -5, 2, 2, 2, 0.1, 0.2, 0.3, 9, -9, 9;
  const auto acts = m.forward_activations(x);
  REQUIRE(acts.size() == 4);
  CHECK(acts[1].minCoeff() >= 0.0);
  CHECK(acts[2].minCoeff() >= 0.0);
  CHECK(acts[3].minCoeff() > 0.0);
  CHECK(acts[3].maxCoeff() < 1.0);
}

TEST_CASE("forward input validation") {
  MlpConfig cfg;
  cfg.layer_sizes = {3, 2, 2, 1};
  const auto m = MlpModel::init(cfg);
  CHECK_THROWS_AS(m.forward(Matrix::Zero(1, 4)), DimensionMismatch);
  Matrix bad = Matrix::Zero(1, 3);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(m.forward(bad), NonFiniteInput);
}

TEST_CASE("loss equals ln 2 at chance and includes the L2 term") {
  MlpConfig cfg;
  cfg.layer_sizes = {2, 2, 2, 1};
  cfg.l2_hidden = 0.02;
  auto m = MlpModel::init(cfg);
  for (auto& w : m.mutable_weights()) w.setZero();
  Batch b;
  b.features = Matrix::Zero(1, 2);
  b.labels = {1};
  CHECK(loss(m, b) == doctest::Approx(std::log(2.0)));

  // A single 3.0 in a penalized matrix adds 0.02 * 9 = 0.18.
  m.mutable_weights()[1](0, 0) = 3.0;
  CHECK(loss(m, b) == doctest::Approx(std::log(2.0) + 0.18));

  CHECK_THROWS_AS(loss(m, Batch{}), EmptyBatch);
}

TEST_CASE("gradient matches central finite differences") {
  std::uint64_t seed = 100;
  for (int trial = 0; trial < 3; ++trial) {
    MlpConfig cfg;
    cfg.layer_sizes = {12, 6, 6, 1};
    cfg.l2_hidden = 0.02;
    cfg.seed = seed++;
    const auto m = MlpModel::init(cfg);
    const auto batch = random_batch(16, 12, seed++);
    const auto g = gradient(m, batch);
    const auto fd = finite_difference(m, batch, 1e-5);
    for (size_t l = 0; l < g.weights.size(); ++l) {
      CHECK(tensor_rel_error(g.weights[l], fd.weights[l]) < 1e-4);
      CHECK(tensor_rel_error(g.biases[l], fd.biases[l]) < 1e-4);
    }
  }
}

TEST_CASE("gradient vanishes at the zero-weight balanced stationary point") {
  MlpConfig cfg;
  cfg.layer_sizes = {4, 3, 3, 1};
  auto m = MlpModel::init(cfg);
  for (auto& w : m.mutable_weights()) w.setZero();
  Batch b = random_batch(8, 4, 5);
  b.labels = {0, 1, 0, 1, 0, 1, 0, 1};
  const auto g = gradient(m, b);
  for (const auto& gw : g.weights) CHECK(gw.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& gb : g.biases) CHECK(gb.cwiseAbs().maxCoeff() == 0.0);
  const auto fd = finite_difference(m, b, 1e-5);
  for (const auto& gw : fd.weights)
    CHECK(gw.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("duplicating the batch leaves the mean gradient unchanged") {
  MlpConfig cfg;
  cfg.layer_sizes = {5, 4, 4, 1};
  cfg.seed = 21;
  const auto m = MlpModel::init(cfg);
  auto b = random_batch(10, 5, 22);
  Batch doubled;
  doubled.features.resize(20, 5);
  doubled.features << b.features, b.features;
  doubled.labels = b.labels;
  doubled.labels.insert(doubled.labels.end(), b.labels.begin(),
                        b.labels.end());
  const auto g1 = gradient(m, b);
  const auto g2 = gradient(m, doubled);
  for (size_t l = 0; l < g1.weights.size(); ++l)
    CHECK((g1.weights[l] - g2.weights[l]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("training makes progress on separable data") {
  auto ds = separable_2d(60, 33);
  MlpConfig cfg;
  cfg.layer_sizes = {2, 8, 8, 1};
  cfg.seed = 17;
  cfg.max_epochs = 200;
  const auto m = train(ds, cfg);
  REQUIRE_FALSE(m.history().empty());
  REQUIRE(m.best_epoch() >= 0);
  const double best =
      m.history()[static_cast<size_t>(m.best_epoch())].train_loss;
  CHECK(best < m.history().front().train_loss + 1e-12);
  // Prediction quality on the training set should be far above chance.
  int correct = 0;
  for (Index i = 0; i < ds.rows(); ++i)
    if ((m.forward_one(ds.features.row(i).transpose()) >= 0.5 ? 1 : 0) ==
        ds.labels[static_cast<size_t>(i)])
      ++correct;
  CHECK(static_cast<double>(correct) / static_cast<double>(ds.rows()) > 0.9);
}

TEST_CASE("early stopping halts within patience of the best epoch") {
  auto ds = separable_2d(40, 44);
  MlpConfig cfg;
  cfg.layer_sizes = {2, 4, 4, 1};
  cfg.seed = 5;
  cfg.patience = 10;
  cfg.max_epochs = 500;
  const auto m = train(ds, cfg);
  CHECK(static_cast<int>(m.history().size()) <=
        m.best_epoch() + cfg.patience + 1);
}

TEST_CASE("training is deterministic given the seed") {
  auto ds = separable_2d(30, 55);
  MlpConfig cfg;
  cfg.layer_sizes = {2, 4, 4, 1};
  cfg.seed = 91;
  cfg.max_epochs = 50;
  const auto a = train(ds, cfg);
  const auto b = train(ds, cfg);
  for (size_t l = 0; l < a.weights().size(); ++l)
    CHECK(a.weights()[l] == b.weights()[l]);
}

TEST_CASE("forward is pure") {
  MlpConfig cfg;
  cfg.layer_sizes = {3, 4, 4, 1};
  cfg.seed = 2;
  const auto m = MlpModel::init(cfg);
  Vector x(3);
  x << 0.5, -0.25, 2.0;
  CHECK(m.forward_one(x) == m.forward_one(x));
}

TEST_CASE("train rejects single-class data") {
  data::LabeledDataset ds;
  ds.features = Matrix::Random(10, 2);
  ds.labels.assign(10, 1);
  MlpConfig cfg;
  cfg.layer_sizes = {2, 4, 4, 1};
  CHECK_THROWS_AS(train(ds, cfg), TooFewSamples);
}

TEST_CASE("first_layer_weights exposes the input matrix") {
  MlpConfig cfg;
  cfg.layer_sizes = {84, 8, 8, 1};
  const auto m = MlpModel::init(cfg);
  CHECK(m.first_layer_weights().rows() == 84);
  CHECK(m.first_layer_weights().cols() == 8);
  CHECK(m.first_layer_weights().allFinite());
}

TEST_CASE("JSON serialization round-trips within tolerance") {
  auto ds = separable_2d(25, 66);
  MlpConfig cfg;
  cfg.layer_sizes = {2, 4, 4, 1};
  cfg.seed = 8;
  cfg.max_epochs = 30;
  const auto m = train(ds, cfg);
  const auto back = MlpModel::from_json_string(m.to_json_string());
  for (size_t l = 0; l < m.weights().size(); ++l) {
    CHECK((m.weights()[l] - back.weights()[l]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((m.biases()[l] - back.biases()[l]).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(back.best_epoch() == m.best_epoch());
  CHECK(back.history().size() == m.history().size());
}
