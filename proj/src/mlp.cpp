#include "nnd/mlp.hpp"

#include <cmath>

#include "nnd/errors.hpp"
#include "nnd/rng.hpp"

namespace nnd {

namespace {

constexpr double kBceClamp = 1e-12;

inline double clamp_prob(double p) {
  if (p < kBceClamp) return kBceClamp;
  if (p > 1.0 - kBceClamp) return 1.0 - kBceClamp;
  return p;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd bits_to_eigen(const BitVec& bits) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) v[static_cast<Eigen::Index>(i)] = bits[i];
  return v;
}

void apply_activation(Activation act, const Eigen::MatrixXd& z, Eigen::MatrixXd& out) {
  if (act == Activation::Relu) {
    out = z.cwiseMax(0.0);
  } else {
    out = z.unaryExpr([](double x) { return sigmoid_stable(x); });
  }
}

}  // namespace

const char* to_string(Activation activation) {
  return activation == Activation::Relu ? "relu" : "sigmoid";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::Relu;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw ParameterError("unknown activation: " + name);
}

const char* to_string(LossKind loss) { return loss == LossKind::Mse ? "mse" : "bce"; }

LossKind loss_from_string(const std::string& name) {
  if (name == "mse") return LossKind::Mse;
  if (name == "bce") return LossKind::Bce;
  throw ParameterError("unknown loss: " + name);
}

std::size_t Mlp::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l < weights.size(); ++l)
    count += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return count;
}

Mlp Mlp::init_glorot(const std::vector<int>& dims, std::uint64_t init_seed) {
  if (dims.size() < 2) throw ParameterError("network needs at least one layer");
  for (int d : dims)
    if (d < 1) throw ParameterError("layer dimensions must be positive");

  Mlp mlp;
  mlp.layer_dims = dims;
  RngStream rng = RngStream::derive(init_seed, 0x696e6974ULL);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w(r, c) = rng.next_uniform(-bound, bound);
    mlp.weights.push_back(std::move(w));
    mlp.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    mlp.activations.push_back(l + 2 == dims.size() ? Activation::Sigmoid : Activation::Relu);
  }
  return mlp;
}

std::vector<double> relu(const std::vector<double>& z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] > 0.0 ? z[i] : 0.0;
  return out;
}

double sigmoid_stable(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> sigmoid(const std::vector<double>& z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = sigmoid_stable(z[i]);
  return out;
}

std::vector<double> forward(const Mlp& mlp, const std::vector<double>& input) {
  if (static_cast<int>(input.size()) != mlp.input_dim())
    throw ParameterError("forward: input length does not match the network");
  Eigen::MatrixXd x = to_eigen(input);
  Eigen::MatrixXd out = forward_batch(mlp, x);
  return std::vector<double>(out.data(), out.data() + out.rows());
}

Eigen::MatrixXd forward_batch(const Mlp& mlp, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != mlp.input_dim())
    throw ParameterError("forward_batch: input rows do not match the network");
  Eigen::MatrixXd a = inputs;
  Eigen::MatrixXd z;
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    z.noalias() = mlp.weights[l] * a;
    z.colwise() += mlp.biases[l];
    apply_activation(mlp.activations[l], z, a);
  }
  return a;
}

double mse_loss(const BitVec& target_bits, const std::vector<double>& estimate) {
  if (target_bits.size() != estimate.size() || estimate.empty())
    throw ParameterError("mse_loss: length mismatch or empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = static_cast<double>(target_bits[i]) - estimate[i];
    sum += d * d;
  }
  return sum / static_cast<double>(estimate.size());
}

double bce_loss(const BitVec& target_bits, const std::vector<double>& estimate) {
  if (target_bits.size() != estimate.size() || estimate.empty())
    throw ParameterError("bce_loss: length mismatch or empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double p = clamp_prob(estimate[i]);
    sum -= target_bits[i] ? std::log(p) : std::log1p(-p);
  }
  return sum / static_cast<double>(estimate.size());
}

Gradients Gradients::zeros_like(const Mlp& mlp) {
  Gradients g;
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(mlp.weights[l].rows(), mlp.weights[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(mlp.biases[l].size()));
  }
  return g;
}

namespace detail {

void forward_batch_traced(const Mlp& mlp, const Eigen::MatrixXd& inputs, ForwardTrace& trace) {
  if (inputs.rows() != mlp.input_dim())
    throw ParameterError("forward_batch_traced: input rows do not match the network");
  const std::size_t layers = mlp.layer_count();
  trace.input = inputs;
  trace.pre.resize(layers);
  trace.post.resize(layers);
  const Eigen::MatrixXd* a = &trace.input;
  for (std::size_t l = 0; l < layers; ++l) {
    trace.pre[l].noalias() = mlp.weights[l] * (*a);
    trace.pre[l].colwise() += mlp.biases[l];
    apply_activation(mlp.activations[l], trace.pre[l], trace.post[l]);
    a = &trace.post[l];
  }
}

double batch_loss(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets, LossKind loss) {
  const auto k = static_cast<double>(outputs.rows());
  const auto batch = static_cast<double>(outputs.cols());
  if (loss == LossKind::Mse) return (targets - outputs).squaredNorm() / (k * batch);
  double sum = 0.0;
  for (Eigen::Index c = 0; c < outputs.cols(); ++c)
    for (Eigen::Index r = 0; r < outputs.rows(); ++r) {
      const double p = clamp_prob(outputs(r, c));
      sum -= targets(r, c) != 0.0 ? std::log(p) : std::log1p(-p);
    }
  return sum / (k * batch);
}

double backward_batch(const Mlp& mlp, const ForwardTrace& trace, const Eigen::MatrixXd& targets,
                      LossKind loss, Gradients& grads) {
  const std::size_t layers = mlp.layer_count();
  const Eigen::MatrixXd& outputs = trace.post[layers - 1];
  const auto k = static_cast<double>(outputs.rows());
  const auto batch = static_cast<double>(outputs.cols());
  const double loss_value = batch_loss(outputs, targets, loss);

  // dL/dy averaged over bits; the clamp in the BCE path has zero derivative
  // outside its interior, matching what finite differences of the loss see.
  Eigen::MatrixXd delta(outputs.rows(), outputs.cols());
  if (loss == LossKind::Mse) {
    delta = (2.0 / k) * (outputs - targets);
  } else {
    for (Eigen::Index c = 0; c < outputs.cols(); ++c)
      for (Eigen::Index r = 0; r < outputs.rows(); ++r) {
        const double y = outputs(r, c);
        if (y <= kBceClamp || y >= 1.0 - kBceClamp) {
          delta(r, c) = 0.0;
        } else {
          delta(r, c) = (y - targets(r, c)) / (y * (1.0 - y)) / k;
        }
      }
  }

  for (std::size_t l = layers; l-- > 0;) {
    // Fold in the activation derivative to turn dL/da into dL/dz.
    if (mlp.activations[l] == Activation::Sigmoid) {
      const Eigen::MatrixXd& y = trace.post[l];
      delta.array() *= (y.array() * (1.0 - y.array()));
    } else {
      delta.array() *= (trace.pre[l].array() > 0.0).cast<double>();
    }
    const Eigen::MatrixXd& below = l == 0 ? trace.input : trace.post[l - 1];
    grads.weights[l].noalias() = delta * below.transpose() / batch;
    grads.biases[l].noalias() = delta.rowwise().sum() / batch;
    if (l > 0) delta = (mlp.weights[l].transpose() * delta).eval();
  }
  return loss_value;
}

}  // namespace detail

Gradients backward(const Mlp& mlp, const std::vector<double>& input, const BitVec& target_bits,
                   LossKind loss) {
  if (static_cast<int>(target_bits.size()) != mlp.output_dim())
    throw ParameterError("backward: target length does not match the network");
  detail::ForwardTrace trace;
  detail::forward_batch_traced(mlp, to_eigen(input), trace);
  Gradients grads = Gradients::zeros_like(mlp);
  detail::backward_batch(mlp, trace, bits_to_eigen(target_bits), loss, grads);
  return grads;
}

double sample_loss(const Mlp& mlp, const std::vector<double>& input, const BitVec& target_bits,
                   LossKind loss) {
  const std::vector<double> estimate = forward(mlp, input);
  return loss == LossKind::Mse ? mse_loss(target_bits, estimate)
                               : bce_loss(target_bits, estimate);
}

AdamState AdamState::zeros_like(const Mlp& mlp) {
  AdamState s;
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    s.m_weights.push_back(Eigen::MatrixXd::Zero(mlp.weights[l].rows(), mlp.weights[l].cols()));
    s.v_weights.push_back(Eigen::MatrixXd::Zero(mlp.weights[l].rows(), mlp.weights[l].cols()));
    s.m_biases.push_back(Eigen::VectorXd::Zero(mlp.biases[l].size()));
    s.v_biases.push_back(Eigen::VectorXd::Zero(mlp.biases[l].size()));
  }
  s.step = 0;
  return s;
}

void adam_step(Mlp& mlp, const Gradients& grads, AdamState& state, double learning_rate,
               double beta1, double beta2, double epsilon) {
  state.step += 1;
  const auto t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(beta1, t);
  const double bc2 = 1.0 - std::pow(beta2, t);
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    auto update = [&](auto& theta, auto& m, auto& v, const auto& g) {
      m = beta1 * m + (1.0 - beta1) * g;
      v.array() = beta2 * v.array() + (1.0 - beta2) * g.array().square();
      theta.array() -= learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + epsilon);
    };
    update(mlp.weights[l], state.m_weights[l], state.v_weights[l], grads.weights[l]);
    update(mlp.biases[l], state.m_biases[l], state.v_biases[l], grads.biases[l]);
  }
}

BitVec decode(const Mlp& mlp, const std::vector<double>& channel_output, InputMode mode,
              std::optional<double> sigma2) {
  std::vector<double> estimate;
  if (mode == InputMode::Llr) {
    if (!sigma2.has_value())
      throw ParameterError("decode: Llr input mode requires the noise variance");
    estimate = forward(mlp, to_llr(channel_output, *sigma2));
  } else {
    estimate = forward(mlp, channel_output);
  }
  BitVec bits(estimate.size());
  for (std::size_t i = 0; i < estimate.size(); ++i)
    bits[i] = static_cast<std::uint8_t>(estimate[i] > 0.5);
  return bits;
}

}  // namespace nnd
