#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskcore/dataset.hpp"
#include "riskcore/types.hpp"

namespace riskcore::mlp {

struct MlpConfig {
  std::vector<Index> layer_sizes = {84, 8, 8, 1};
  double l2_hidden = 0.02;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  Index batch_size = 32;
  double validation_fraction = 0.2;
  int patience = 10;
  int max_epochs = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct Batch {
  Matrix features;          // n x input_size
  std::vector<int> labels;  // length n
};

class MlpModel {
 public:
  MlpModel() = default;

  // Glorot-uniform weights, zero biases, deterministic by config.seed.
  static MlpModel init(const MlpConfig& config);

  const MlpConfig& config() const { return config_; }
  // weights()[l] maps layer l to layer l+1, shape (size_l x size_{l+1}).
  const std::vector<Matrix>& weights() const { return weights_; }
  const std::vector<Vector>& biases() const { return biases_; }
  std::vector<Matrix>& mutable_weights() { return weights_; }
  std::vector<Vector>& mutable_biases() { return biases_; }
  const std::vector<EpochRecord>& history() const { return history_; }
  int best_epoch() const { return best_epoch_; }

  Index input_size() const { return config_.layer_sizes.front(); }

  // Output probabilities for a batch of rows.
  Vector forward(const Matrix& x) const;
  double forward_one(const Vector& x) const;

  // Activations per layer: input, hidden..., output probability column.
  std::vector<Matrix> forward_activations(const Matrix& x) const;

  // Input -> first-hidden matrix, rows indexed by risk factor.
  const Matrix& first_layer_weights() const { return weights_.front(); }

  std::string to_json_string() const;
  static MlpModel from_json_string(const std::string& text);

  friend struct Trainer;

 private:
  MlpConfig config_;
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
  std::vector<EpochRecord> history_;
  int best_epoch_ = -1;
};

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

// Mean binary cross-entropy (probabilities clamped to [1e-12, 1-1e-12])
// plus l2_hidden * squared weights of the hidden-layer matrices.
double loss(const MlpModel& model, const Batch& batch);

// Exact analytic gradient of loss(); ReLU subgradient 0 at the kink.
Gradients gradient(const MlpModel& model, const Batch& batch);

// Minibatch Adam with a fixed validation holdout and patience-based early
// stopping; restores the best-validation weights.
MlpModel train(const data::LabeledDataset& train_set, const MlpConfig& config);

}  // namespace riskcore::mlp
