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

// Structure-oriented graph discriminator D(W) = sigmoid(f'(sum_rows g'(I, W)))
// and the two losses built on it: the adversarial loss
//   L_gan = ln D(A) + ln(1 - D(A'))
// and the feature-matching reconstruction loss ||pool(A) - pool(A')||^2.

#ifndef PRIVGRAPH_GGAN_HPP_
#define PRIVGRAPH_GGAN_HPP_

#include <algorithm>
#include <cmath>

#include "privgraph/graph.hpp"
#include "privgraph/nn.hpp"

namespace privgraph {

namespace keys {
inline constexpr const char* kU0 = "U0";
inline constexpr const char* kU1 = "U1";
inline constexpr const char* kV0p = "V0p";
inline constexpr const char* kV1p = "V1p";
}  // namespace keys

struct DiscParams {
  ParamSet params;

  static DiscParams init(int num_nodes, int hidden_dim, int embed_dim, Rng& rng) {
    DiscParams d;
    d.params.add(keys::kU0, glorot_uniform(num_nodes, hidden_dim, rng));
    d.params.add(keys::kU1, glorot_uniform(hidden_dim, embed_dim, rng));
    d.params.add(keys::kV0p, glorot_uniform(embed_dim, hidden_dim, rng));
    d.params.add(keys::kV1p, glorot_uniform(hidden_dim, 1, rng));
    return d;
  }

  friend bool operator==(const DiscParams&, const DiscParams&) = default;
};

struct DiscCache {
  Matrix input;     // diagonal-masked input
  Vector inv_sqrt;  // D^{-1/2}, zero for empty rows
  Matrix a_norm;
  Gcn2Cache gcn;
  Fnn2Cache fnn;
};

struct DiscResult {
  double score = 0.5;
  Matrix pooled;  // 1 x embed graph-level representation
  DiscCache cache;
};

// Accepts a real adjacency or a soft edge-probability matrix. The diagonal
// is ignored; soft degrees are row sums.
inline DiscResult discriminate(const Matrix& w, const DiscParams& disc) {
  if (w.rows() != w.cols()) throw DimensionError("discriminate: non-square input");
  const Eigen::Index n = w.rows();
  DiscResult r;
  DiscCache& c = r.cache;
  c.input = w;
  c.input.diagonal().setZero();
  c.inv_sqrt.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = c.input.row(i).sum();
    c.inv_sqrt(i) = d > kMinDegree ? 1.0 / std::sqrt(d) : 0.0;
  }
  c.a_norm.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      c.a_norm(i, j) = c.input(i, j) * (c.inv_sqrt(i) * c.inv_sqrt(j));
  const Matrix x = one_hot_features(static_cast<int>(n));
  auto [h, gcache] = gcn2_forward(c.a_norm, x, disc.params.at(keys::kU0), disc.params.at(keys::kU1));
  c.gcn = std::move(gcache);
  r.pooled = h.colwise().sum();
  auto [logit, fcache] = fnn2_forward(r.pooled, disc.params.at(keys::kV0p), disc.params.at(keys::kV1p));
  c.fnn = std::move(fcache);
  r.score = sigmoid(logit(0, 0));
  return r;
}

struct DiscGrads {
  GradSet params;
  Matrix d_input;  // gradient w.r.t. the (unmasked) input matrix
};

// Backward pass for an objective that depends on the score and/or the pooled
// representation.
inline DiscGrads discriminate_backward(const DiscResult& r, double d_score,
                                       const Matrix& d_pooled) {
  const DiscCache& c = r.cache;
  const Eigen::Index n = c.input.rows();
  Matrix d_logit(1, 1);
  d_logit(0, 0) = d_score * r.score * (1.0 - r.score);
  const Fnn2Grads fg = fnn2_backward(c.fnn, d_logit);
  Matrix d_pool = fg.d_z;
  if (d_pooled.size() != 0) {
    require_same_shape(d_pool, d_pooled, "discriminate_backward");
    d_pool += d_pooled;
  }
  const Matrix d_h = Matrix::Ones(n, 1) * d_pool;
  const Gcn2Grads gg = gcn2_backward(c.gcn, d_h);

  DiscGrads out;
  out.params.add(keys::kU0, gg.d_w0);
  out.params.add(keys::kU1, gg.d_w1);
  out.params.add(keys::kV0p, fg.d_v0);
  out.params.add(keys::kV1p, fg.d_v1);

  // a_ij = w_ij s_i s_j with s_i = (sum_j w_ij)^{-1/2}.
  const Matrix& da = gg.d_a_norm;
  out.d_input.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      acc += da(a, j) * c.a_norm(a, j) + da(j, a) * c.a_norm(j, a);
    const double row_term = -0.5 * c.inv_sqrt(a) * c.inv_sqrt(a) * acc;
    for (Eigen::Index b = 0; b < n; ++b)
      out.d_input(a, b) = da(a, b) * (c.inv_sqrt(a) * c.inv_sqrt(b)) + row_term;
  }
  out.d_input.diagonal().setZero();
  return out;
}

inline constexpr double kScoreClamp = 1e-12;

struct GanLoss {
  double loss = 0.0;
  double d_real = 0.0;
  double d_fake = 0.0;
};

// L_gan = ln D(A) + ln(1 - D(A')); the discriminator ascends it.
inline GanLoss gan_loss(double score_real, double score_fake) {
  const double r = std::clamp(score_real, kScoreClamp, 1.0 - kScoreClamp);
  const double f = std::clamp(score_fake, kScoreClamp, 1.0 - kScoreClamp);
  GanLoss out;
  out.loss = std::log(r) + std::log1p(-f);
  // zero slope where the clamp bites
  out.d_real = r == score_real ? 1.0 / r : 0.0;
  out.d_fake = f == score_fake ? -1.0 / (1.0 - f) : 0.0;
  return out;
}

struct FeatureRecLoss {
  double loss = 0.0;
  Matrix d_p;
};

// ||pool(A) - pool(P)||^2 with the discriminator held fixed; the gradient
// flows only into P.
inline FeatureRecLoss feature_rec_loss(const DiscResult& real, const DiscResult& fake) {
  FeatureRecLoss out;
  const Matrix diff = fake.pooled - real.pooled;
  out.loss = diff.squaredNorm();
  out.d_p = discriminate_backward(fake, 0.0, 2.0 * diff).d_input;
  return out;
}

inline FeatureRecLoss feature_rec_loss(const Matrix& a, const Matrix& p, const DiscParams& disc) {
  require_same_shape(a, p, "feature_rec_loss");
  return feature_rec_loss(discriminate(a, disc), discriminate(p, disc));
}

}  // namespace privgraph

#endif  // PRIVGRAPH_GGAN_HPP_
