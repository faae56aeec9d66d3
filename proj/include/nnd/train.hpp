// Epoch-based full-batch training of the decoder network, plus checkpoint io.
//
// One epoch draws a fresh AWGN realization for every training codeword at the
// training Eb/N0, computes the mean gradient over that batch and applies a
// single Adam step. Runs are bit-reproducible given (init_seed, noise_seed).
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "nnd/mlp.hpp"

namespace nnd {

struct TrainConfig {
  CodeParams code;
  std::vector<int> hidden_dims{128, 64, 32};
  LossKind loss = LossKind::Mse;
  InputMode input_mode = InputMode::ChannelValues;
  double train_ebn0_db = 1.0;
  std::int64_t epochs = 1;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t init_seed = 1;
  std::uint64_t noise_seed = 2;
  std::optional<CodebookSplit> train_subset;  // train on the seen indices only

  std::vector<int> layer_dims() const;
};

void validate_train_config(const TrainConfig& config);

struct TrainResult {
  Mlp mlp;
  std::vector<double> loss_log;  // mean batch loss per epoch, pre-update
};

// Called after the Adam step of a requested epoch; the model passed has been
// trained for exactly `epoch` epochs.
using CheckpointSink =
    std::function<void(std::int64_t epoch, const Mlp& mlp, const std::vector<double>& loss_log)>;

TrainResult train(const TrainConfig& config);
TrainResult train_with_checkpoints(const TrainConfig& config,
                                   std::vector<std::int64_t> checkpoint_epochs,
                                   const CheckpointSink& sink);

struct Checkpoint {
  Mlp mlp;
  TrainConfig config;
  std::vector<double> loss_log;
};

// JSON checkpoint document: layer_dims, weights (row-major nested arrays),
// biases, activations, train_config, loss_log. Weights survive a round-trip
// bit-exactly (shortest round-trip decimal encoding).
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Canonical JSON encoding of a config; equal configs produce equal strings.
std::string canonical_config_json(const TrainConfig& config);

}  // namespace nnd
