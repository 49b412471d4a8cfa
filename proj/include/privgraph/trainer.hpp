// Copyright 2026 The privgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Training loops for the autoencoder (GVAE) and its adversarial variant
// (GGAN), with or without differential privacy on the decoder.
//
// Losses are normalized per node: the encoder follows the gradient of
// (L_rec + lambda1 * L_prior) / N and the decoder the mean of per-node
// gradients over the sampled batch. Only the decoder path may pass through
// dp_gradient; encoder and discriminator always see exact gradients.

#ifndef PRIVGRAPH_TRAINER_HPP_
#define PRIVGRAPH_TRAINER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "privgraph/dp.hpp"
#include "privgraph/ggan.hpp"
#include "privgraph/graph.hpp"
#include "privgraph/gvae.hpp"
#include "privgraph/nn.hpp"

namespace privgraph {

class TrainingError : public Error {
 public:
  using Error::Error;
};

enum class ModelKind { kGvae, kGgan };

inline std::string to_string(ModelKind k) { return k == ModelKind::kGvae ? "gvae" : "ggan"; }

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "gvae") return ModelKind::kGvae;
  if (s == "ggan") return ModelKind::kGgan;
  throw ConfigError("unknown model '" + s + "' (expected gvae or ggan)");
}

// How the summed noisy gradient is averaged.
enum class DpDivisor { kBatch, kNodes };

struct TrainConfig {
  int epochs = 500;
  int steps_per_epoch = 1;
  int batch_nodes = 0;  // 0: min(N, 32)
  double lr_encoder = 0.01;
  double lr_generator = 0.01;
  double lr_discriminator = 0.01;
  double momentum = 0.9;  // encoder and discriminator only
  double lambda1 = 1.0;
  double lambda2 = 0.1;
  int latent_dim = 16;
  int hidden_dim = 32;
  bool add_self_loops = false;
  std::optional<double> pos_weight;  // unset: non-edges / edges
  std::optional<DpConfig> dp;
  DpDivisor dp_divisor = DpDivisor::kBatch;
  std::uint64_t seed = 0;

  int resolved_batch(int n) const { return batch_nodes > 0 ? batch_nodes : std::min(n, 32); }
  int total_steps() const { return epochs * steps_per_epoch; }

  void validate(int n) const {
    if (epochs < 0 || steps_per_epoch < 1) throw ConfigError("train: bad epoch/step counts");
    if (resolved_batch(n) > n) throw ConfigError("train: batch_nodes exceeds node count");
    if (lambda1 < 0.0 || lambda2 < 0.0) throw ConfigError("train: lambdas must be >= 0");
    if (lr_encoder < 0.0 || lr_generator < 0.0 || lr_discriminator < 0.0)
      throw ConfigError("train: learning rates must be >= 0");
    if (latent_dim < 1 || hidden_dim < 1) throw ConfigError("train: dims must be positive");
  }
};

inline nlohmann::json to_json(const DpConfig& d) {
  nlohmann::json j{{"epsilon", d.epsilon},     {"delta", d.delta},
                   {"clip_c0", d.clip_c0},     {"q", d.q},
                   {"t_max", d.t_max},         {"c0", d.c0},
                   {"clip_decay", d.clip_decay}, {"clip_min", d.clip_min},
                   {"override_validity", d.override_validity}};
  j["sigma"] = d.sigma ? nlohmann::json(*d.sigma) : nlohmann::json(nullptr);
  return j;
}

inline DpConfig dp_config_from_json(const nlohmann::json& j) {
  DpConfig d;
  d.epsilon = j.at("epsilon").get<double>();
  d.delta = j.at("delta").get<double>();
  d.clip_c0 = j.at("clip_c0").get<double>();
  d.q = j.at("q").get<double>();
  d.t_max = j.at("t_max").get<int>();
  d.c0 = j.at("c0").get<double>();
  d.clip_decay = j.at("clip_decay").get<double>();
  d.clip_min = j.at("clip_min").get<double>();
  d.override_validity = j.value("override_validity", false);
  if (j.contains("sigma") && !j.at("sigma").is_null()) d.sigma = j.at("sigma").get<double>();
  return d;
}

inline nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j{{"epochs", c.epochs},
                   {"steps_per_epoch", c.steps_per_epoch},
                   {"batch_nodes", c.batch_nodes},
                   {"lr_encoder", c.lr_encoder},
                   {"lr_generator", c.lr_generator},
                   {"lr_discriminator", c.lr_discriminator},
                   {"momentum", c.momentum},
                   {"lambda1", c.lambda1},
                   {"lambda2", c.lambda2},
                   {"latent_dim", c.latent_dim},
                   {"hidden_dim", c.hidden_dim},
                   {"add_self_loops", c.add_self_loops},
                   {"dp_divisor", c.dp_divisor == DpDivisor::kBatch ? "batch" : "nodes"},
                   {"seed", c.seed}};
  j["pos_weight"] = c.pos_weight ? nlohmann::json(*c.pos_weight) : nlohmann::json(nullptr);
  j["dp"] = c.dp ? to_json(*c.dp) : nlohmann::json(nullptr);
  return j;
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<int>();
  c.steps_per_epoch = j.at("steps_per_epoch").get<int>();
  c.batch_nodes = j.at("batch_nodes").get<int>();
  c.lr_encoder = j.at("lr_encoder").get<double>();
  c.lr_generator = j.at("lr_generator").get<double>();
  c.lr_discriminator = j.at("lr_discriminator").get<double>();
  c.momentum = j.at("momentum").get<double>();
  c.lambda1 = j.at("lambda1").get<double>();
  c.lambda2 = j.at("lambda2").get<double>();
  c.latent_dim = j.at("latent_dim").get<int>();
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.add_self_loops = j.value("add_self_loops", false);
  c.dp_divisor = j.value("dp_divisor", "batch") == "nodes" ? DpDivisor::kNodes : DpDivisor::kBatch;
  c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("pos_weight") && !j.at("pos_weight").is_null())
    c.pos_weight = j.at("pos_weight").get<double>();
  if (j.contains("dp") && !j.at("dp").is_null()) c.dp = dp_config_from_json(j.at("dp"));
  return c;
}

struct LossRecord {
  int epoch = 0;
  double rec = 0.0;    // BCE (gvae) or feature-matching loss (ggan), per node
  double prior = 0.0;  // KL, per node
  double gan = 0.0;    // L_gan (ggan only)
  double score_real = 0.0;
  double score_fake = 0.0;
};

inline nlohmann::json to_json(const LossRecord& r) {
  return {{"epoch", r.epoch},           {"rec", r.rec},
          {"prior", r.prior},           {"gan", r.gan},
          {"score_real", r.score_real}, {"score_fake", r.score_fake}};
}

inline constexpr int kCheckpointFormat = 1;

struct Checkpoint {
  ModelKind model = ModelKind::kGvae;
  bool released = false;
  int num_nodes = 0;
  int num_edges = 0;  // edges of the training graph, used by top-M generation
  std::optional<ParamSet> encoder;
  ParamSet decoder;
  std::optional<ParamSet> discriminator;
  TrainConfig config;
  PrivacyReport privacy;
  std::vector<LossRecord> loss_trace;

  int latent_dim() const { return decoder_latent_dim(decoder); }

  // Decoder-only copy suitable for publication.
  Checkpoint released_copy() const {
    Checkpoint c = *this;
    c.released = true;
    c.encoder.reset();
    c.discriminator.reset();
    return c;
  }
};

inline nlohmann::json to_json(const Checkpoint& c) {
  nlohmann::json params{{"decoder", to_json(c.decoder)}};
  if (!c.released) {
    if (c.encoder) params["encoder"] = to_json(*c.encoder);
    if (c.discriminator) params["discriminator"] = to_json(*c.discriminator);
  }
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& r : c.loss_trace) trace.push_back(to_json(r));
  return {{"format_version", kCheckpointFormat},
          {"released", c.released},
          {"model", to_string(c.model)},
          {"graph", {{"num_nodes", c.num_nodes}, {"num_edges", c.num_edges}}},
          {"params", params},
          {"train_config", to_json(c.config)},
          {"privacy_report", to_json(c.privacy)},
          {"loss_trace", trace}};
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kCheckpointFormat)
    throw ParseError("unsupported checkpoint format_version", 0);
  Checkpoint c;
  c.released = j.at("released").get<bool>();
  c.model = parse_model_kind(j.at("model").get<std::string>());
  c.num_nodes = j.at("graph").at("num_nodes").get<int>();
  c.num_edges = j.at("graph").at("num_edges").get<int>();
  const auto& params = j.at("params");
  c.decoder = paramset_from_json(params.at("decoder"));
  if (params.contains("encoder")) c.encoder = paramset_from_json(params.at("encoder"));
  if (params.contains("discriminator"))
    c.discriminator = paramset_from_json(params.at("discriminator"));
  if (c.released && (c.encoder || c.discriminator))
    throw ParseError("released checkpoint carries non-releasable parameters", 0);
  c.config = train_config_from_json(j.at("train_config"));
  c.privacy = privacy_report_from_json(j.at("privacy_report"));
  for (const auto& r : j.at("loss_trace")) {
    LossRecord rec;
    rec.epoch = r.at("epoch").get<int>();
    rec.rec = r.at("rec").get<double>();
    rec.prior = r.at("prior").get<double>();
    rec.gan = r.at("gan").get<double>();
    rec.score_real = r.at("score_real").get<double>();
    rec.score_fake = r.at("score_fake").get<double>();
    c.loss_trace.push_back(rec);
  }
  return c;
}

// Uniform sample of b distinct node indices, returned in ascending order.
inline std::vector<int> sample_node_batch(int n, int b, Rng& rng) {
  if (b < 1 || b > n) throw Error("sample_node_batch: need 1 <= b <= n");
  std::vector<int> idx = all_nodes(n);
  for (int i = 0; i < b; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(b);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// theta <- theta - lr * g
inline ParamSet sgd_step(ParamSet params, const GradSet& grads, double lr) {
  params.require_structure(grads, "sgd_step");
  params.add_scaled(grads, -lr);
  return params;
}

class MomentumSgd {
 public:
  MomentumSgd(double lr, double momentum) : lr_(lr), momentum_(momentum) {}

  void step(ParamSet& params, const GradSet& grads) {
    if (velocity_.empty()) velocity_ = params.zeros_like();
    velocity_.scale(momentum_).add_scaled(grads);
    params.add_scaled(velocity_, -lr_);
  }

 private:
  double lr_;
  double momentum_;
  GradSet velocity_;
};

namespace detail {

// Independent RNG streams per purpose so that e.g. drawing DP noise never
// shifts the latent noise sequence.
enum Stream : std::uint64_t { kInit = 0, kBatch = 1, kLatent = 2, kDpNoise = 3 };

struct DecoderPath {
  std::optional<DpConfig> dp;
  double sigma = 0.0;
  PrivacyReport report;
  DpDivisor divisor = DpDivisor::kBatch;
  Rng noise_rng;

  // Mean of per-node gradients, privatized when DP is on. This is the only
  // place dp_gradient is called from.
  GradSet aggregate(std::span<const GradSet> per_node, int epoch, int n) {
    const int b = static_cast<int>(per_node.size());
    const int div = divisor == DpDivisor::kBatch ? b : n;
    if (!dp) {
      return dp_gradient(per_node, std::numeric_limits<double>::infinity(), 0.0, div, noise_rng);
    }
    const double c = clip_schedule(dp->clip_c0, dp->clip_decay, epoch, dp->clip_min);
    ++report.steps_taken;
    return dp_gradient(per_node, c, sigma, div, noise_rng);
  }
};

inline DecoderPath make_decoder_path(const TrainConfig& cfg, int n) {
  DecoderPath path{std::nullopt, 0.0, {}, cfg.dp_divisor, make_rng(cfg.seed, kDpNoise)};
  if (!cfg.dp) return path;
  DpConfig dp = *cfg.dp;
  dp.q = static_cast<double>(cfg.resolved_batch(n)) / n;
  dp.t_max = std::max(1, cfg.total_steps());
  dp.validate();
  const Calibration cal = dp.sigma ? check_validity(dp, *dp.sigma) : calibrate_sigma(dp);
  if (!cal.valid && !dp.override_validity)
    throw ConfigError("privacy precondition violated: " + cal.message +
                      " (pass --override-validity to train anyway)");
  path.dp = dp;
  path.sigma = cal.sigma;
  path.report.enabled = true;
  path.report.epsilon_spent = dp.epsilon;
  path.report.delta = dp.delta;
  path.report.sigma_used = cal.sigma;
  path.report.q = dp.q;
  path.report.c0 = dp.c0;
  path.report.t_max = dp.t_max;
  path.report.validity = cal.valid;
  path.report.validity_overridden = !cal.valid;
  path.report.message = cal.message;
  return path;
}

inline void check_finite(double loss, int epoch) {
  if (!std::isfinite(loss))
    throw TrainingError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
}

// dL/dmu and dL/dlogvar from dL/dz through z = mu + exp(logvar/2) * noise.
inline std::pair<Matrix, Matrix> latent_backward(const LatentState& s, const Matrix& d_z) {
  Matrix d_logvar =
      (d_z.array() * s.noise.array() * 0.5 * (0.5 * s.logvar.array()).exp()).matrix();
  return {d_z, std::move(d_logvar)};
}

}  // namespace detail

inline Checkpoint train_gvae(const Graph& g, const TrainConfig& cfg) {
  const int n = g.num_nodes();
  cfg.validate(n);
  Rng init_rng = make_rng(cfg.seed, detail::kInit);
  Rng batch_rng = make_rng(cfg.seed, detail::kBatch);
  Rng latent_rng = make_rng(cfg.seed, detail::kLatent);
  detail::DecoderPath path = detail::make_decoder_path(cfg, n);

  GvaeParams params = GvaeParams::init(n, cfg.hidden_dim, cfg.latent_dim, init_rng);
  const Matrix a = g.adjacency_matrix();
  const Matrix a_norm = normalize_adjacency(g, cfg.add_self_loops);
  const double pos_weight = cfg.pos_weight.value_or(default_pos_weight(g));
  const int b = cfg.resolved_batch(n);
  MomentumSgd enc_opt(cfg.lr_encoder, cfg.momentum);

  Checkpoint ckpt;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    LossRecord rec{epoch};
    for (int step = 0; step < cfg.steps_per_epoch; ++step) {
      const std::vector<int> batch = sample_node_batch(n, b, batch_rng);
      const EncoderOutput enc = encode(a_norm, params.encoder);
      const LatentState state =
          make_latent(enc.mu, enc.logvar, standard_normal(n, cfg.latent_dim, latent_rng));
      const DecoderOutput dec = decode(state.z, params.decoder);
      const LossWithGrad bce = bce_rec_loss(a, dec.p, pos_weight, Diagonal::kExclude);
      const KlLoss kl = kl_prior_loss(state.mu, state.logvar);
      detail::check_finite(bce.loss + kl.loss, epoch);
      rec.rec += bce.loss / n / cfg.steps_per_epoch;
      rec.prior += kl.loss / n / cfg.steps_per_epoch;

      // Encoder: exact gradient of (L_rec + lambda1 L_prior) / N.
      const DecoderGrads dg = decoder_backward(dec, bce.grad);
      auto [d_mu, d_logvar] = detail::latent_backward(state, dg.d_z);
      d_mu += cfg.lambda1 * kl.d_mu;
      d_logvar += cfg.lambda1 * kl.d_logvar;
      GradSet enc_grad = encode_backward(enc, d_mu, d_logvar);
      enc_grad.scale(1.0 / n);

      // Decoder: (noisy) mean of per-node gradients over the batch.
      const std::vector<GradSet> per_node = per_node_decoder_grads(dec, bce.grad, batch);
      const GradSet dec_grad = path.aggregate(per_node, epoch, n);

      enc_opt.step(params.encoder, enc_grad);
      params.decoder = sgd_step(std::move(params.decoder), dec_grad, cfg.lr_generator);
    }
    ckpt.loss_trace.push_back(rec);
  }
  if (!params.encoder.all_finite() || !params.decoder.all_finite())
    throw TrainingError("training diverged: non-finite parameters");

  ckpt.model = ModelKind::kGvae;
  ckpt.num_nodes = n;
  ckpt.num_edges = g.num_edges();
  ckpt.encoder = std::move(params.encoder);
  ckpt.decoder = std::move(params.decoder);
  ckpt.config = cfg;
  ckpt.privacy = path.report;
  return ckpt;
}

inline Checkpoint train_ggan(const Graph& g, const TrainConfig& cfg) {
  const int n = g.num_nodes();
  cfg.validate(n);
  Rng init_rng = make_rng(cfg.seed, detail::kInit);
  Rng batch_rng = make_rng(cfg.seed, detail::kBatch);
  Rng latent_rng = make_rng(cfg.seed, detail::kLatent);
  detail::DecoderPath path = detail::make_decoder_path(cfg, n);

  GvaeParams params = GvaeParams::init(n, cfg.hidden_dim, cfg.latent_dim, init_rng);
  DiscParams disc = DiscParams::init(n, cfg.hidden_dim, cfg.latent_dim, init_rng);
  const Matrix a = g.adjacency_matrix();
  const Matrix a_norm = normalize_adjacency(g, cfg.add_self_loops);
  const int b = cfg.resolved_batch(n);
  MomentumSgd enc_opt(cfg.lr_encoder, cfg.momentum);
  MomentumSgd disc_opt(cfg.lr_discriminator, cfg.momentum);

  Checkpoint ckpt;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    LossRecord rec{epoch};
    for (int step = 0; step < cfg.steps_per_epoch; ++step) {
      const std::vector<int> batch = sample_node_batch(n, b, batch_rng);
      const EncoderOutput enc = encode(a_norm, params.encoder);
      const LatentState state =
          make_latent(enc.mu, enc.logvar, standard_normal(n, cfg.latent_dim, latent_rng));
      const DecoderOutput dec = decode(state.z, params.decoder);

      // (1) Discriminator ascends lambda2 * L_gan.
      {
        const DiscResult real = discriminate(a, disc);
        const DiscResult fake = discriminate(dec.p, disc);
        const GanLoss gl = gan_loss(real.score, fake.score);
        GradSet d_grad = discriminate_backward(real, gl.d_real, Matrix()).params;
        d_grad.add_scaled(discriminate_backward(fake, gl.d_fake, Matrix()).params);
        d_grad.scale(-cfg.lambda2);
        disc_opt.step(disc.params, d_grad);
      }

      const DiscResult real = discriminate(a, disc);
      const DiscResult fake = discriminate(dec.p, disc);
      const FeatureRecLoss frl = feature_rec_loss(real, fake);
      const GanLoss gl = gan_loss(real.score, fake.score);
      const KlLoss kl = kl_prior_loss(state.mu, state.logvar);
      detail::check_finite(frl.loss + kl.loss + gl.loss, epoch);
      const double inv_steps = 1.0 / cfg.steps_per_epoch;
      rec.rec += frl.loss / n * inv_steps;
      rec.prior += kl.loss / n * inv_steps;
      rec.gan += gl.loss * inv_steps;
      rec.score_real += real.score * inv_steps;
      rec.score_fake += fake.score * inv_steps;

      // (2) Encoder descends (L_rec + lambda1 L_prior) / N.
      const DecoderGrads dg = decoder_backward(dec, frl.d_p);
      auto [d_mu, d_logvar] = detail::latent_backward(state, dg.d_z);
      d_mu += cfg.lambda1 * kl.d_mu;
      d_logvar += cfg.lambda1 * kl.d_logvar;
      GradSet enc_grad = encode_backward(enc, d_mu, d_logvar);
      enc_grad.scale(1.0 / n);

      // (3) Generator descends L_rec - lambda2 L_gan; only ln(1 - D(A'))
      // depends on the generator.
      Matrix d_p = frl.d_p;
      if (cfg.lambda2 != 0.0)
        d_p -= cfg.lambda2 * discriminate_backward(fake, gl.d_fake, Matrix()).d_input;
      const std::vector<GradSet> per_node = per_node_decoder_grads(dec, d_p, batch);
      const GradSet gen_grad = path.aggregate(per_node, epoch, n);

      enc_opt.step(params.encoder, enc_grad);
      params.decoder = sgd_step(std::move(params.decoder), gen_grad, cfg.lr_generator);
    }
    ckpt.loss_trace.push_back(rec);
  }
  if (!params.encoder.all_finite() || !params.decoder.all_finite() || !disc.params.all_finite())
    throw TrainingError("training diverged: non-finite parameters");

  ckpt.model = ModelKind::kGgan;
  ckpt.num_nodes = n;
  ckpt.num_edges = g.num_edges();
  ckpt.encoder = std::move(params.encoder);
  ckpt.decoder = std::move(params.decoder);
  ckpt.discriminator = std::move(disc.params);
  ckpt.config = cfg;
  ckpt.privacy = path.report;
  return ckpt;
}

inline Checkpoint train(ModelKind kind, const Graph& g, const TrainConfig& cfg) {
  return kind == ModelKind::kGvae ? train_gvae(g, cfg) : train_ggan(g, cfg);
}

}  // namespace privgraph

#endif  // PRIVGRAPH_TRAINER_HPP_
