// Feedforward network built from scratch: affine layers with ReLU hidden and
// sigmoid output activations, exact backpropagation and Adam updates.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nnd/channel.hpp"
#include "nnd/codebook.hpp"

namespace nnd {

enum class Activation { Relu, Sigmoid };
enum class LossKind { Mse, Bce };

const char* to_string(Activation activation);
Activation activation_from_string(const std::string& name);
const char* to_string(LossKind loss);
LossKind loss_from_string(const std::string& name);

struct Mlp {
  std::vector<int> layer_dims;             // [n_in, h_1, ..., n_out]
  std::vector<Eigen::MatrixXd> weights;    // layer l: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> biases;     // layer l: dims[l+1]
  std::vector<Activation> activations;     // one tag per layer

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  std::size_t layer_count() const { return weights.size(); }
  std::size_t parameter_count() const;

  // Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases, ReLU
  // hidden layers and a sigmoid output, drawn in layer order from init_seed.
  static Mlp init_glorot(const std::vector<int>& dims, std::uint64_t init_seed);
};

// Elementwise activations on plain vectors.
std::vector<double> relu(const std::vector<double>& z);
std::vector<double> sigmoid(const std::vector<double>& z);

// Overflow-free sigmoid, exact for |z| up to the exp underflow range.
double sigmoid_stable(double z);

// Chain of affine maps and activations; input length must match layer_dims[0].
std::vector<double> forward(const Mlp& mlp, const std::vector<double>& input);

// Batched forward pass; columns are samples.
Eigen::MatrixXd forward_batch(const Mlp& mlp, const Eigen::MatrixXd& inputs);

double mse_loss(const BitVec& target_bits, const std::vector<double>& estimate);
double bce_loss(const BitVec& target_bits, const std::vector<double>& estimate);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static Gradients zeros_like(const Mlp& mlp);
};

// Exact analytic gradients of the chosen loss for one (input, target) pair.
Gradients backward(const Mlp& mlp, const std::vector<double>& input,
                   const BitVec& target_bits, LossKind loss);

// Loss value for one pair, via the same forward path backward differentiates.
double sample_loss(const Mlp& mlp, const std::vector<double>& input,
                   const BitVec& target_bits, LossKind loss);

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weights;
  std::vector<Eigen::MatrixXd> v_weights;
  std::vector<Eigen::VectorXd> m_biases;
  std::vector<Eigen::VectorXd> v_biases;
  std::int64_t step = 0;

  static AdamState zeros_like(const Mlp& mlp);
};

// One bias-corrected Adam update:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
//   theta <- theta - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps).
void adam_step(Mlp& mlp, const Gradients& grads, AdamState& state, double learning_rate,
               double beta1, double beta2, double epsilon);

// Hard decision on the network output: estimate > 0.5 maps to bit 1, so an
// exact 0.5 tie maps to bit 0. Llr mode requires sigma2.
BitVec decode(const Mlp& mlp, const std::vector<double>& channel_output, InputMode mode,
              std::optional<double> sigma2 = std::nullopt);

namespace detail {

// Intermediate values of a batched forward pass, kept for backpropagation.
struct ForwardTrace {
  Eigen::MatrixXd input;
  std::vector<Eigen::MatrixXd> pre;   // z per layer
  std::vector<Eigen::MatrixXd> post;  // activation(z) per layer
};

void forward_batch_traced(const Mlp& mlp, const Eigen::MatrixXd& inputs, ForwardTrace& trace);

// Mean gradient over the batch; targets is output_dim x batch of 0/1 values.
// Returns the mean per-sample loss of the batch.
double backward_batch(const Mlp& mlp, const ForwardTrace& trace, const Eigen::MatrixXd& targets,
                      LossKind loss, Gradients& grads);

double batch_loss(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets, LossKind loss);

}  // namespace detail

}  // namespace nnd
