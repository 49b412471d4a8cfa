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

// Variational graph autoencoder: GCN encoder with shared first layer and
// separate mean / log-variance heads, reparameterized latent sampling, and a
// decoder P = sigmoid(F F^T) with F a two-layer FNN of the latent codes.

#ifndef PRIVGRAPH_GVAE_HPP_
#define PRIVGRAPH_GVAE_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "privgraph/graph.hpp"
#include "privgraph/nn.hpp"

namespace privgraph {

namespace keys {
inline constexpr const char* kW0 = "W0";
inline constexpr const char* kW1Mu = "W1_mu";
inline constexpr const char* kW1Sigma = "W1_sigma";
inline constexpr const char* kV0 = "V0";
inline constexpr const char* kV1 = "V1";
}  // namespace keys

// Encoder (W0, W1_mu, W1_sigma) and decoder (V0, V1) are kept in separate
// sets: only the decoder is ever privatized or released.
struct GvaeParams {
  ParamSet encoder;
  ParamSet decoder;

  static GvaeParams init(int num_nodes, int hidden_dim, int latent_dim, Rng& rng) {
    GvaeParams p;
    p.encoder.add(keys::kW0, glorot_uniform(num_nodes, hidden_dim, rng));
    p.encoder.add(keys::kW1Mu, glorot_uniform(hidden_dim, latent_dim, rng));
    p.encoder.add(keys::kW1Sigma, glorot_uniform(hidden_dim, latent_dim, rng));
    p.decoder = init_decoder(hidden_dim, latent_dim, rng);
    return p;
  }

  static ParamSet init_decoder(int hidden_dim, int latent_dim, Rng& rng) {
    ParamSet d;
    d.add(keys::kV0, glorot_uniform(latent_dim, hidden_dim, rng));
    d.add(keys::kV1, glorot_uniform(hidden_dim, latent_dim, rng));
    return d;
  }

  friend bool operator==(const GvaeParams&, const GvaeParams&) = default;
};

inline int decoder_latent_dim(const ParamSet& decoder) {
  return static_cast<int>(decoder.at(keys::kV0).rows());
}

struct EncoderOutput {
  Matrix mu;
  Matrix logvar;
  Gcn2Cache mu_cache;
  Gcn2Cache logvar_cache;
};

// mu = A relu(A X W0) W1_mu, logvar = A relu(A X W0) W1_sigma, X = I.
inline EncoderOutput encode(const Matrix& a_norm, const ParamSet& encoder) {
  const Matrix x = one_hot_features(static_cast<int>(a_norm.rows()));
  EncoderOutput out;
  auto [mu, mu_cache] =
      gcn2_forward(a_norm, x, encoder.at(keys::kW0), encoder.at(keys::kW1Mu));
  auto [lv, lv_cache] =
      gcn2_forward(a_norm, x, encoder.at(keys::kW0), encoder.at(keys::kW1Sigma));
  out.mu = std::move(mu);
  out.logvar = std::move(lv);
  out.mu_cache = std::move(mu_cache);
  out.logvar_cache = std::move(lv_cache);
  return out;
}

inline EncoderOutput encode(const Graph& g, const ParamSet& encoder, bool add_self_loops = false) {
  return encode(normalize_adjacency(g, add_self_loops), encoder);
}

inline GradSet encode_backward(const EncoderOutput& enc, const Matrix& d_mu,
                               const Matrix& d_logvar) {
  const Gcn2Grads gm = gcn2_backward(enc.mu_cache, d_mu);
  const Gcn2Grads gl = gcn2_backward(enc.logvar_cache, d_logvar);
  GradSet g;
  g.add(keys::kW0, gm.d_w0 + gl.d_w0);
  g.add(keys::kW1Mu, gm.d_w1);
  g.add(keys::kW1Sigma, gl.d_w1);
  return g;
}

struct LatentState {
  Matrix mu;
  Matrix logvar;
  Matrix z;
  Matrix noise;
};

inline Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

inline Matrix reparameterize(const Matrix& mu, const Matrix& logvar, const Matrix& noise) {
  require_same_shape(mu, logvar, "reparameterize");
  require_same_shape(mu, noise, "reparameterize");
  return mu + ((0.5 * logvar.array()).exp() * noise.array()).matrix();
}

inline LatentState make_latent(Matrix mu, Matrix logvar, Matrix noise) {
  LatentState s;
  s.z = reparameterize(mu, logvar, noise);
  s.mu = std::move(mu);
  s.logvar = std::move(logvar);
  s.noise = std::move(noise);
  return s;
}

struct DecoderOutput {
  Matrix p;  // sigmoid(S)
  Matrix s;  // F F^T
  Matrix f;
  Fnn2Cache cache;
};

inline DecoderOutput decode(const Matrix& z, const ParamSet& decoder) {
  DecoderOutput out;
  auto [f, cache] = fnn2_forward(z, decoder.at(keys::kV0), decoder.at(keys::kV1));
  out.f = std::move(f);
  out.cache = std::move(cache);
  out.s = out.f * out.f.transpose();
  // F F^T is symmetric up to rounding; mirror so P == P^T exactly.
  for (Eigen::Index i = 0; i < out.s.rows(); ++i)
    for (Eigen::Index j = i + 1; j < out.s.cols(); ++j) out.s(j, i) = out.s(i, j);
  out.p = sigmoid(out.s);
  return out;
}

inline constexpr double kProbClamp = 1e-12;

enum class Diagonal { kInclude, kExclude };

struct LossWithGrad {
  double loss = 0.0;
  Matrix grad;
};

// -sum_ij [w A_ij ln P_ij + (1 - A_ij) ln(1 - P_ij)] and its gradient with
// respect to P. P is clamped to [1e-12, 1 - 1e-12] before use; the loss is
// flat where the clamp is active, so the gradient is zero there.
inline LossWithGrad bce_rec_loss(const Matrix& a, const Matrix& p, double pos_weight,
                                 Diagonal diag = Diagonal::kInclude) {
  require_same_shape(a, p, "bce_rec_loss");
  LossWithGrad out;
  out.grad = Matrix::Zero(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (diag == Diagonal::kExclude && i == j) continue;
      const double q = std::clamp(p(i, j), kProbClamp, 1.0 - kProbClamp);
      const double t = a(i, j);
      out.loss -= pos_weight * t * std::log(q) + (1.0 - t) * std::log1p(-q);
      if (q == p(i, j)) out.grad(i, j) = -pos_weight * t / q + (1.0 - t) / (1.0 - q);
    }
  return out;
}

// Per-node share of the masked BCE: node i owns row i, which equals half of
// every unordered pair it belongs to.
inline std::vector<double> per_node_bce_losses(const Matrix& a, const Matrix& p,
                                               double pos_weight) {
  std::vector<double> out(static_cast<std::size_t>(p.rows()), 0.0);
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (i == j) continue;
      const double q = std::clamp(p(i, j), kProbClamp, 1.0 - kProbClamp);
      const double t = a(i, j);
      out[i] -= pos_weight * t * std::log(q) + (1.0 - t) * std::log1p(-q);
    }
  return out;
}

// (#non-edges) / (#edges) over off-diagonal pairs; 1 for edgeless graphs.
inline double default_pos_weight(const Graph& g) {
  const double pairs = 0.5 * g.num_nodes() * (g.num_nodes() - 1.0);
  if (g.num_edges() == 0) return 1.0;
  return (pairs - g.num_edges()) / g.num_edges();
}

struct KlLoss {
  double loss = 0.0;
  Matrix d_mu;
  Matrix d_logvar;
};

// 0.5 * sum(exp(logvar) + mu^2 - 1 - logvar).
inline KlLoss kl_prior_loss(const Matrix& mu, const Matrix& logvar) {
  require_same_shape(mu, logvar, "kl_prior_loss");
  KlLoss out;
  const auto var = logvar.array().exp();
  out.loss = 0.5 * (var + mu.array().square() - 1.0 - logvar.array()).sum();
  out.d_mu = mu;
  out.d_logvar = (0.5 * (var - 1.0)).matrix();
  return out;
}

struct DecoderGrads {
  GradSet params;
  Matrix d_z;
};

// Backpropagates dL/dP through sigmoid, the inner product and the FNN.
inline DecoderGrads decoder_backward(const DecoderOutput& dec, const Matrix& d_p) {
  require_same_shape(dec.p, d_p, "decoder_backward");
  const Matrix d_s = d_p.cwiseProduct(dec.p.cwiseProduct((1.0 - dec.p.array()).matrix()));
  const Matrix d_f = (d_s + d_s.transpose()) * dec.f;
  const Fnn2Grads g = fnn2_backward(dec.cache, d_f);
  DecoderGrads out;
  out.params.add(keys::kV0, g.d_v0);
  out.params.add(keys::kV1, g.d_v1);
  out.d_z = g.d_z;
  return out;
}

// Splits the decoder gradient of a loss with upstream dL/dP into per-node
// parts. Every entry (i, j) of dL/dP is attributed half to node i and half to
// node j, so the parts over all nodes sum to the full decoder gradient and
// changing one edge only moves the parts of its two endpoints.
inline std::vector<GradSet> per_node_decoder_grads(const DecoderOutput& dec, const Matrix& d_p,
                                                   std::span<const int> nodes) {
  require_same_shape(dec.p, d_p, "per_node_decoder_grads");
  const Eigen::Index n = dec.p.rows();
  const Matrix d_s = d_p.cwiseProduct(dec.p.cwiseProduct((1.0 - dec.p.array()).matrix()));
  std::vector<GradSet> out;
  out.reserve(nodes.size());
  Matrix d_f(n, dec.f.cols());
  for (int k : nodes) {
    d_f.setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == k) continue;
      const double t = 0.5 * (d_s(k, j) + d_s(j, k));
      d_f.row(k) += t * dec.f.row(j);
      d_f.row(j) += t * dec.f.row(k);
    }
    d_f.row(k) += 2.0 * d_s(k, k) * dec.f.row(k);
    const Fnn2Grads g = fnn2_backward(dec.cache, d_f);
    GradSet gs;
    gs.add(keys::kV0, g.d_v0);
    gs.add(keys::kV1, g.d_v1);
    out.push_back(std::move(gs));
  }
  return out;
}

inline std::vector<int> all_nodes(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Per-node decoder gradients of the diagonal-masked BCE reconstruction loss
// for the latent codes in `state`.
inline std::vector<GradSet> per_node_rec_grads(const Graph& g, const LatentState& state,
                                               const ParamSet& decoder,
                                               double pos_weight) {
  const DecoderOutput dec = decode(state.z, decoder);
  const LossWithGrad bce =
      bce_rec_loss(g.adjacency_matrix(), dec.p, pos_weight, Diagonal::kExclude);
  const std::vector<int> nodes = all_nodes(g.num_nodes());
  return per_node_decoder_grads(dec, bce.grad, nodes);
}

inline std::vector<GradSet> per_node_rec_grads(const Graph& g, const LatentState& state,
                                               const ParamSet& decoder) {
  return per_node_rec_grads(g, state, decoder, default_pos_weight(g));
}

}  // namespace privgraph

#endif  // PRIVGRAPH_GVAE_HPP_
