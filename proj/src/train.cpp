#include "nnd/train.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "nnd/errors.hpp"
#include "nnd/io_util.hpp"
#include "nnd/rng.hpp"

namespace nnd {

namespace {

using nlohmann::json;

json code_params_to_json(const CodeParams& p) {
  return json{{"family", to_string(p.family)},
              {"block_length", p.block_length},
              {"info_bits", p.info_bits},
              {"seed", p.seed}};
}

CodeParams code_params_from_json(const json& j) {
  CodeParams p;
  p.family = code_family_from_string(j.at("family").get<std::string>());
  p.block_length = j.at("block_length").get<int>();
  p.info_bits = j.at("info_bits").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

json config_to_json(const TrainConfig& c) {
  json j{{"code", code_params_to_json(c.code)},
         {"hidden_dims", c.hidden_dims},
         {"loss", to_string(c.loss)},
         {"input_mode", to_string(c.input_mode)},
         {"train_ebn0_db", c.train_ebn0_db},
         {"epochs", c.epochs},
         {"learning_rate", c.learning_rate},
         {"adam_beta1", c.adam_beta1},
         {"adam_beta2", c.adam_beta2},
         {"adam_epsilon", c.adam_epsilon},
         {"init_seed", c.init_seed},
         {"noise_seed", c.noise_seed}};
  if (c.train_subset.has_value()) {
    j["train_subset"] = json{{"coverage_percent", c.train_subset->coverage_percent},
                             {"seed", c.train_subset->seed},
                             {"seen", c.train_subset->seen},
                             {"unseen", c.train_subset->unseen}};
  } else {
    j["train_subset"] = nullptr;
  }
  return j;
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.code = code_params_from_json(j.at("code"));
  c.hidden_dims = j.at("hidden_dims").get<std::vector<int>>();
  c.loss = loss_from_string(j.at("loss").get<std::string>());
  c.input_mode = input_mode_from_string(j.at("input_mode").get<std::string>());
  c.train_ebn0_db = j.at("train_ebn0_db").get<double>();
  c.epochs = j.at("epochs").get<std::int64_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_epsilon = j.at("adam_epsilon").get<double>();
  c.init_seed = j.at("init_seed").get<std::uint64_t>();
  c.noise_seed = j.at("noise_seed").get<std::uint64_t>();
  if (!j.at("train_subset").is_null()) {
    CodebookSplit split;
    const json& s = j.at("train_subset");
    split.coverage_percent = s.at("coverage_percent").get<double>();
    split.seed = s.at("seed").get<std::uint64_t>();
    split.seen = s.at("seen").get<std::vector<int>>();
    split.unseen = s.at("unseen").get<std::vector<int>>();
    c.train_subset = std::move(split);
  }
  return c;
}

}  // namespace

std::vector<int> TrainConfig::layer_dims() const {
  std::vector<int> dims;
  dims.push_back(code.block_length);
  dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
  dims.push_back(code.info_bits);
  return dims;
}

void validate_train_config(const TrainConfig& config) {
  validate_code_params(config.code);
  if (config.code.info_bits < 1)
    throw ParameterError("training requires at least one info bit");
  if (config.epochs < 1) throw ParameterError("epochs must be >= 1");
  if (!(config.learning_rate > 0.0)) throw ParameterError("learning rate must be positive");
  if (config.adam_beta1 < 0.0 || config.adam_beta1 >= 1.0 || config.adam_beta2 < 0.0 ||
      config.adam_beta2 >= 1.0)
    throw ParameterError("adam betas must lie in [0, 1)");
  for (int h : config.hidden_dims)
    if (h < 1) throw ParameterError("hidden dimensions must be positive");
  if (config.train_subset.has_value()) {
    const auto count = static_cast<std::int64_t>(std::uint64_t{1} << config.code.info_bits);
    if (config.train_subset->seen.empty())
      throw ParameterError("training subset must contain at least one codeword");
    for (int idx : config.train_subset->seen)
      if (idx < 0 || idx >= count) throw ParameterError("training subset index out of range");
  }
}

TrainResult train(const TrainConfig& config) {
  return train_with_checkpoints(config, {}, CheckpointSink{});
}

TrainResult train_with_checkpoints(const TrainConfig& config,
                                   std::vector<std::int64_t> checkpoint_epochs,
                                   const CheckpointSink& sink) {
  validate_train_config(config);
  const Codebook codebook = enumerate_codebook(config.code);

  // Canonical ascending order makes the mean gradient independent of how the
  // training subset was listed.
  std::vector<int> indices;
  if (config.train_subset.has_value()) {
    indices = config.train_subset->seen;
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  } else {
    indices.resize(codebook.size());
    std::iota(indices.begin(), indices.end(), 0);
  }

  const int n = codebook.block_length();
  const int k = codebook.info_bits();
  const auto batch = static_cast<Eigen::Index>(indices.size());
  const double sigma2 = ebn0_to_sigma2(config.train_ebn0_db, codebook.params.rate());
  const double sigma = std::sqrt(sigma2);
  const double llr_scale = config.input_mode == InputMode::Llr ? 2.0 / sigma2 : 1.0;

  Eigen::MatrixXd symbols(n, batch);  // clean BPSK words, one column per sample
  Eigen::MatrixXd targets(k, batch);
  for (Eigen::Index col = 0; col < batch; ++col) {
    const auto m = static_cast<std::uint64_t>(indices[static_cast<std::size_t>(col)]);
    const BitVec& word = codebook.codewords[m];
    for (int i = 0; i < n; ++i) symbols(i, col) = word[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    for (int i = 0; i < k; ++i) targets(i, col) = static_cast<double>((m >> (k - 1 - i)) & 1u);
  }

  Mlp mlp = Mlp::init_glorot(config.layer_dims(), config.init_seed);
  AdamState adam = AdamState::zeros_like(mlp);
  Gradients grads = Gradients::zeros_like(mlp);
  detail::ForwardTrace trace;
  Eigen::MatrixXd inputs(n, batch);

  std::sort(checkpoint_epochs.begin(), checkpoint_epochs.end());
  checkpoint_epochs.erase(std::unique(checkpoint_epochs.begin(), checkpoint_epochs.end()),
                          checkpoint_epochs.end());
  std::size_t next_checkpoint = 0;

  std::vector<double> loss_log;
  loss_log.reserve(static_cast<std::size_t>(config.epochs));

  for (std::int64_t epoch = 1; epoch <= config.epochs; ++epoch) {
    // Fresh noise per epoch; each sample's stream is keyed by its codeword
    // index so the batch is a set, not a sequence.
    for (Eigen::Index col = 0; col < batch; ++col) {
      RngStream noise = RngStream::derive(config.noise_seed, static_cast<std::uint64_t>(epoch),
                                          static_cast<std::uint64_t>(
                                              indices[static_cast<std::size_t>(col)]));
      double* x = inputs.col(col).data();
      const double* s = symbols.col(col).data();
      for (int i = 0; i < n; ++i) x[i] = (s[i] + sigma * noise.next_gaussian()) * llr_scale;
    }

    detail::forward_batch_traced(mlp, inputs, trace);
    const double loss = detail::backward_batch(mlp, trace, targets, config.loss, grads);
    if (!std::isfinite(loss))
      throw TrainingDivergedError(epoch, "training diverged: non-finite loss at epoch " +
                                             std::to_string(epoch));
    adam_step(mlp, grads, adam, config.learning_rate, config.adam_beta1, config.adam_beta2,
              config.adam_epsilon);
    loss_log.push_back(loss);

    while (next_checkpoint < checkpoint_epochs.size() &&
           checkpoint_epochs[next_checkpoint] == epoch) {
      if (sink) sink(epoch, mlp, loss_log);
      ++next_checkpoint;
    }
  }
  return TrainResult{std::move(mlp), std::move(loss_log)};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const Mlp& mlp = checkpoint.mlp;
  json j;
  j["layer_dims"] = mlp.layer_dims;
  json weights = json::array();
  json biases = json::array();
  json activations = json::array();
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < mlp.weights[l].rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < mlp.weights[l].cols(); ++c) row.push_back(mlp.weights[l](r, c));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
    json bias = json::array();
    for (Eigen::Index r = 0; r < mlp.biases[l].size(); ++r) bias.push_back(mlp.biases[l][r]);
    biases.push_back(std::move(bias));
    activations.push_back(to_string(mlp.activations[l]));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  j["activations"] = std::move(activations);
  j["train_config"] = json::parse(canonical_config_json(checkpoint.config));
  j["loss_log"] = checkpoint.loss_log;
  write_file_atomic(path, j.dump());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const json j = json::parse(read_file(path));
  Checkpoint ckpt;
  ckpt.config = config_from_json(j.at("train_config"));
  ckpt.loss_log = j.at("loss_log").get<std::vector<double>>();

  Mlp& mlp = ckpt.mlp;
  mlp.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  const json& weights = j.at("weights");
  const json& biases = j.at("biases");
  const json& activations = j.at("activations");
  for (std::size_t l = 0; l + 1 < mlp.layer_dims.size(); ++l) {
    const int fan_out = mlp.layer_dims[l + 1];
    const int fan_in = mlp.layer_dims[l];
    Eigen::MatrixXd w(fan_out, fan_in);
    const json& rows = weights.at(l);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c)
        w(r, c) = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
    mlp.weights.push_back(std::move(w));
    Eigen::VectorXd b(fan_out);
    for (int r = 0; r < fan_out; ++r)
      b[r] = biases.at(l).at(static_cast<std::size_t>(r)).get<double>();
    mlp.biases.push_back(std::move(b));
    mlp.activations.push_back(
        activation_from_string(activations.at(l).get<std::string>()));
  }
  return ckpt;
}

std::string canonical_config_json(const TrainConfig& config) {
  return config_to_json(config).dump();
}

}  // namespace nnd
