#include "riskcore/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "json.hpp"

namespace riskcore::mlp {

void MlpConfig::validate() const {
  if (layer_sizes.size() < 3)
    throw InvalidConfig("layer_sizes must have at least 3 entries");
  if (layer_sizes.back() != 1)
    throw InvalidConfig("output layer size must be 1");
  for (Index s : layer_sizes)
    if (s < 1) throw InvalidConfig("layer sizes must be positive");
  if (l2_hidden < 0.0 || learning_rate <= 0.0 || beta1 <= 0.0 ||
      beta2 <= 0.0 || epsilon <= 0.0 || batch_size < 1 || patience < 1 ||
      max_epochs < 1)
    throw InvalidConfig("hyperparameters must be positive");
  if (validation_fraction <= 0.0 || validation_fraction >= 1.0)
    throw InvalidConfig("validation_fraction must be in (0,1)");
}

MlpModel MlpModel::init(const MlpConfig& config) {
  config.validate();
  MlpModel m;
  m.config_ = config;
  std::mt19937_64 rng(config.seed);
  const auto& sizes = config.layer_sizes;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const Index fan_in = sizes[l], fan_out = sizes[l + 1];
    const double limit =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix w(fan_in, fan_out);
    for (Index i = 0; i < fan_in; ++i)
      for (Index j = 0; j < fan_out; ++j) w(i, j) = dist(rng);
    m.weights_.push_back(std::move(w));
    m.biases_.push_back(Vector::Zero(fan_out));
  }
  return m;
}

namespace {

constexpr double kProbClamp = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_input(const MlpModel& model, const Matrix& x) {
  if (x.cols() != model.input_size())
    throw DimensionMismatch("input width " + std::to_string(x.cols()) +
                            " != model input size " +
                            std::to_string(model.input_size()));
  if (!x.allFinite()) throw NonFiniteInput("non-finite model input");
}

}  // namespace

std::vector<Matrix> MlpModel::forward_activations(const Matrix& x) const {
  check_input(*this, x);
  std::vector<Matrix> acts;
  acts.push_back(x);
  Matrix a = x;
  for (size_t l = 0; l < weights_.size(); ++l) {
    Matrix z = (a * weights_[l]).rowwise() + biases_[l].transpose();
    if (l + 1 < weights_.size())
      a = z.cwiseMax(0.0);  // ReLU
    else
      a = z.unaryExpr([](double v) { return sigmoid(v); });
    acts.push_back(a);
  }
  return acts;
}

Vector MlpModel::forward(const Matrix& x) const {
  return forward_activations(x).back().col(0);
}

double MlpModel::forward_one(const Vector& x) const {
  return forward(x.transpose())[0];
}

namespace {

// Indices of weight matrices carrying the L2 penalty: the kernels feeding
// the hidden layers (all but the output matrix).
bool penalized(size_t layer, size_t n_matrices) {
  return layer + 1 < n_matrices;
}

double bce(const Vector& p, const std::vector<int>& y) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double pi = std::clamp(p[i], kProbClamp, 1.0 - kProbClamp);
    s += y[static_cast<size_t>(i)] == 1 ? -std::log(pi) : -std::log(1.0 - pi);
  }
  return s / static_cast<double>(p.size());
}

}  // namespace

double loss(const MlpModel& model, const Batch& batch) {
  if (batch.features.rows() == 0) throw EmptyBatch("empty batch");
  if (batch.labels.size() != static_cast<size_t>(batch.features.rows()))
    throw ShapeMismatch("batch labels/features row mismatch");
  double l = bce(model.forward(batch.features), batch.labels);
  const auto& w = model.weights();
  for (size_t i = 0; i < w.size(); ++i)
    if (penalized(i, w.size())) l += model.config().l2_hidden * w[i].squaredNorm();
  return l;
}

Gradients gradient(const MlpModel& model, const Batch& batch) {
  if (batch.features.rows() == 0) throw EmptyBatch("empty batch");
  if (batch.labels.size() != static_cast<size_t>(batch.features.rows()))
    throw ShapeMismatch("batch labels/features row mismatch");
  const auto acts = model.forward_activations(batch.features);
  const auto& w = model.weights();
  const Index n = batch.features.rows();

  Gradients g;
  g.weights.resize(w.size());
  g.biases.resize(w.size());

  // Sigmoid + clamped BCE: d(loss)/d(z_out) = (p - y) / n, except that a
  // clamped probability contributes zero gradient.
  Matrix delta(n, 1);
  for (Index i = 0; i < n; ++i) {
    const double p = acts.back()(i, 0);
    const double y = batch.labels[static_cast<size_t>(i)];
    delta(i, 0) = (p < kProbClamp || p > 1.0 - kProbClamp)
                      ? 0.0
                      : (p - y) / static_cast<double>(n);
  }

  for (size_t l = w.size(); l-- > 0;) {
    g.weights[l] = acts[l].transpose() * delta;
    g.biases[l] = delta.colwise().sum().transpose();
    if (penalized(l, w.size()))
      g.weights[l] += 2.0 * model.config().l2_hidden * w[l];
    if (l > 0) {
      Matrix up = delta * w[l].transpose();
      // ReLU mask; subgradient 0 at exactly 0.
      delta = ((acts[l].array() > 0.0).cast<double>() * up.array()).matrix();
    }
  }
  return g;
}

struct Trainer {
  static MlpModel run(const data::LabeledDataset& train_set,
                      const MlpConfig& config) {
    config.validate();
    const Index n = train_set.rows();
    long pos = 0, neg = 0;
    for (int y : train_set.labels) (y == 1 ? pos : neg)++;
    if (pos < 2 || neg < 2)
      throw TooFewSamples("training needs >= 2 samples per class");
    if (train_set.cols() != config.layer_sizes.front())
      throw DimensionMismatch("training data width != input layer size");

    MlpModel model = MlpModel::init(config);
    std::mt19937_64 rng(config.seed + 1);

    // Fixed validation holdout, drawn once.
    std::vector<Index> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Index n_val = static_cast<Index>(
        std::floor(config.validation_fraction * static_cast<double>(n)));
    n_val = std::max<Index>(1, std::min(n_val, n - 2));
    std::vector<Index> val_idx(perm.begin(), perm.begin() + n_val);
    std::vector<Index> fit_idx(perm.begin() + n_val, perm.end());

    auto make_batch = [&train_set](const std::vector<Index>& idx) {
      Batch b;
      b.features.resize(static_cast<Index>(idx.size()), train_set.cols());
      b.labels.reserve(idx.size());
      for (size_t i = 0; i < idx.size(); ++i) {
        b.features.row(static_cast<Index>(i)) = train_set.features.row(idx[i]);
        b.labels.push_back(train_set.labels[static_cast<size_t>(idx[i])]);
      }
      return b;
    };
    const Batch val_batch = make_batch(val_idx);
    const Batch fit_all = make_batch(fit_idx);

    // Adam state.
    std::vector<Matrix> mw, vw;
    std::vector<Vector> mb, vb;
    for (size_t l = 0; l < model.weights_.size(); ++l) {
      mw.push_back(Matrix::Zero(model.weights_[l].rows(),
                                model.weights_[l].cols()));
      vw.push_back(Matrix::Zero(model.weights_[l].rows(),
                                model.weights_[l].cols()));
      mb.push_back(Vector::Zero(model.biases_[l].size()));
      vb.push_back(Vector::Zero(model.biases_[l].size()));
    }
    long step = 0;

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<Matrix> best_w = model.weights_;
    std::vector<Vector> best_b = model.biases_;
    int stale = 0;

    std::vector<Index> order = fit_idx;
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (size_t start = 0; start < order.size();
           start += static_cast<size_t>(config.batch_size)) {
        const size_t stop = std::min(
            order.size(), start + static_cast<size_t>(config.batch_size));
        std::vector<Index> batch_idx(order.begin() + static_cast<long>(start),
                                     order.begin() + static_cast<long>(stop));
        const Batch batch = make_batch(batch_idx);
        const Gradients g = gradient(model, batch);
        ++step;
        const double bc1 = 1.0 - std::pow(config.beta1, step);
        const double bc2 = 1.0 - std::pow(config.beta2, step);
        for (size_t l = 0; l < model.weights_.size(); ++l) {
          mw[l] = config.beta1 * mw[l] + (1.0 - config.beta1) * g.weights[l];
          vw[l] = (config.beta2 * vw[l].array() +
                   (1.0 - config.beta2) * g.weights[l].array().square())
                      .matrix();
          model.weights_[l].array() -=
              config.learning_rate * (mw[l].array() / bc1) /
              ((vw[l].array() / bc2).sqrt() + config.epsilon);
          mb[l] = config.beta1 * mb[l] + (1.0 - config.beta1) * g.biases[l];
          vb[l] = (config.beta2 * vb[l].array() +
                   (1.0 - config.beta2) * g.biases[l].array().square())
                      .matrix();
          model.biases_[l].array() -=
              config.learning_rate * (mb[l].array() / bc1) /
              ((vb[l].array() / bc2).sqrt() + config.epsilon);
        }
      }

      EpochRecord rec;
      rec.train_loss = loss(model, fit_all);
      rec.validation_loss = bce(model.forward(val_batch.features),
                                val_batch.labels);
      model.history_.push_back(rec);

      if (rec.validation_loss < best_val) {
        best_val = rec.validation_loss;
        best_w = model.weights_;
        best_b = model.biases_;
        model.best_epoch_ = epoch;
        stale = 0;
      } else if (++stale >= config.patience) {
        break;
      }
    }

    model.weights_ = std::move(best_w);
    model.biases_ = std::move(best_b);
    return model;
  }
};

MlpModel train(const data::LabeledDataset& train_set,
               const MlpConfig& config) {
  return Trainer::run(train_set, config);
}

namespace {

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = r > 0 ? static_cast<Index>(rows[0].size()) : 0;
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)]
                    .get<double>();
  return m;
}

}  // namespace

std::string MlpModel::to_json_string() const {
  nlohmann::ordered_json doc;
  doc["layer_sizes"] = config_.layer_sizes;
  doc["config"] = {{"l2_hidden", config_.l2_hidden},
                   {"learning_rate", config_.learning_rate},
                   {"beta1", config_.beta1},
                   {"beta2", config_.beta2},
                   {"epsilon", config_.epsilon},
                   {"batch_size", config_.batch_size},
                   {"validation_fraction", config_.validation_fraction},
                   {"patience", config_.patience},
                   {"max_epochs", config_.max_epochs},
                   {"seed", config_.seed}};
  doc["weights"] = nlohmann::ordered_json::array();
  doc["biases"] = nlohmann::ordered_json::array();
  for (const auto& w : weights_) doc["weights"].push_back(matrix_to_json(w));
  for (const auto& b : biases_) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (Index i = 0; i < b.size(); ++i) arr.push_back(b[i]);
    doc["biases"].push_back(std::move(arr));
  }
  doc["best_epoch"] = best_epoch_;
  doc["history"] = nlohmann::ordered_json::array();
  for (const auto& rec : history_)
    doc["history"].push_back({{"train_loss", rec.train_loss},
                              {"validation_loss", rec.validation_loss}});
  return doc.dump(2);
}

MlpModel MlpModel::from_json_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON parse error: ") + e.what());
  }
  MlpModel m;
  m.config_.layer_sizes = doc.at("layer_sizes").get<std::vector<Index>>();
  const auto& c = doc.at("config");
  m.config_.l2_hidden = c.at("l2_hidden").get<double>();
  m.config_.learning_rate = c.at("learning_rate").get<double>();
  m.config_.beta1 = c.at("beta1").get<double>();
  m.config_.beta2 = c.at("beta2").get<double>();
  m.config_.epsilon = c.at("epsilon").get<double>();
  m.config_.batch_size = c.at("batch_size").get<Index>();
  m.config_.validation_fraction = c.at("validation_fraction").get<double>();
  m.config_.patience = c.at("patience").get<int>();
  m.config_.max_epochs = c.at("max_epochs").get<int>();
  m.config_.seed = c.at("seed").get<std::uint64_t>();
  for (const auto& w : doc.at("weights"))
    m.weights_.push_back(matrix_from_json(w));
  for (const auto& b : doc.at("biases")) {
    Vector v(static_cast<Index>(b.size()));
    for (size_t i = 0; i < b.size(); ++i) v[static_cast<Index>(i)] = b[i];
    m.biases_.push_back(std::move(v));
  }
  m.best_epoch_ = doc.value("best_epoch", -1);
  if (doc.contains("history"))
    for (const auto& rec : doc["history"])
      m.history_.push_back({rec.at("train_loss").get<double>(),
                            rec.at("validation_loss").get<double>()});
  return m;
}

}  // namespace riskcore::mlp
