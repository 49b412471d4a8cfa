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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "privgraph.hpp"

namespace privgraph {
namespace {

Graph two_blocks(std::uint64_t seed) {
  Rng rng = make_rng(1000, seed);
  return planted_partition(20, 2, 0.5, 0.05, rng);
}

TrainConfig small_config(std::uint64_t seed, int epochs) {
  TrainConfig c;
  c.seed = seed;
  c.epochs = epochs;
  c.hidden_dim = 16;
  c.latent_dim = 8;
  return c;
}

DpConfig dp_eps(double eps) {
  DpConfig d;
  d.epsilon = eps;
  d.clip_c0 = 0.3;
  d.override_validity = true;
  return d;
}

std::string dump(const Checkpoint& c) { return to_json(c).dump(); }

TEST(SampleNodeBatch, FullBatchAndErrors) {
  Rng rng = make_rng(1);
  EXPECT_EQ(sample_node_batch(7, 7, rng), all_nodes(7));
  EXPECT_THROW(sample_node_batch(5, 6, rng), Error);
  EXPECT_THROW(sample_node_batch(5, 0, rng), Error);
  const auto b = sample_node_batch(12, 5, rng);
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
  EXPECT_EQ(std::adjacent_find(b.begin(), b.end()), b.end());
}

TEST(SampleNodeBatch, SingleIndexIsUniform) {
  const int n = 10, draws = 100000;
  std::vector<int> counts(n, 0);
  Rng rng = make_rng(2);
  for (int i = 0; i < draws; ++i) ++counts[sample_node_batch(n, 1, rng)[0]];
  double chi2 = 0.0;
  const double expect = static_cast<double>(draws) / n;
  for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 21.666);  // chi-square 0.99 quantile, 9 dof
}

TEST(SampleNodeBatch, Seeded) {
  Rng a = make_rng(3), b = make_rng(3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_node_batch(15, 4, a), sample_node_batch(15, 4, b));
}

TEST(SgdStep, Examples) {
  ParamSet p;
  p.add("t", Matrix::Constant(1, 1, 1.0));
  GradSet g;
  g.add("t", Matrix::Constant(1, 1, 2.0));
  EXPECT_NEAR(sgd_step(p, g, 0.1).at("t")(0, 0), 0.8, 1e-15);
  EXPECT_EQ(sgd_step(p, g, 0.0), p);
  Rng rng = make_rng(4);
  ParamSet q;
  q.add("a", oracle::random_matrix(2, 3, rng));
  GradSet g1, g2, g12;
  g1.add("a", oracle::random_matrix(2, 3, rng));
  g2.add("a", oracle::random_matrix(2, 3, rng));
  g12.add("a", g1.at("a") + g2.at("a"));
  const ParamSet two = sgd_step(sgd_step(q, g1, 0.1), g2, 0.1);
  EXPECT_LT((two.at("a") - sgd_step(q, g12, 0.1).at("a")).cwiseAbs().maxCoeff(), 1e-14);
  GradSet wrong;
  wrong.add("b", Matrix::Zero(2, 3));
  EXPECT_THROW(sgd_step(q, wrong, 0.1), DimensionError);
}

TEST(TrainGvae, ObjectiveDropsOverFiftyEpochs) {
  const Graph g = two_blocks(1);
  TrainConfig c = small_config(1, 50);
  c.lr_encoder = c.lr_generator = 0.02;
  c.steps_per_epoch = 8;
  c.lambda1 = 0.1;
  const Checkpoint ck = train_gvae(g, c);
  ASSERT_EQ(ck.loss_trace.size(), 50u);
  const auto& first = ck.loss_trace.front();
  const auto& last = ck.loss_trace.back();
  EXPECT_LT(last.rec + last.prior, first.rec + first.prior);
}

TEST(TrainGvae, ReconstructionImprovesOverFiveHundredEpochs) {
  const Graph g = two_blocks(2);
  const Checkpoint ck = train_gvae(g, small_config(2, 500));
  EXPECT_LT(ck.loss_trace.back().rec, ck.loss_trace.front().rec);
}

TEST(Train, ZeroLearningRatesLeaveParametersUntouched) {
  const Graph g = two_blocks(3);
  TrainConfig c = small_config(3, 5);
  c.lr_encoder = c.lr_generator = c.lr_discriminator = 0.0;
  Rng init = make_rng(3, 0);
  const GvaeParams p0 = GvaeParams::init(20, 16, 8, init);
  const DiscParams d0 = DiscParams::init(20, 16, 8, init);
  const Checkpoint a = train_gvae(g, c);
  EXPECT_EQ(*a.encoder, p0.encoder);
  EXPECT_EQ(a.decoder, p0.decoder);
  const Checkpoint b = train_ggan(g, c);
  EXPECT_EQ(b.decoder, p0.decoder);
  EXPECT_EQ(*b.discriminator, d0.params);
}

TEST(Train, BitwiseReproducible) {
  const Graph g = two_blocks(4);
  for (ModelKind kind : {ModelKind::kGvae, ModelKind::kGgan})
    for (bool private_run : {false, true}) {
      TrainConfig c = small_config(44, 30);
      c.batch_nodes = 4;
      if (private_run) c.dp = dp_eps(1.0);
      EXPECT_EQ(dump(train(kind, g, c)), dump(train(kind, g, c)));
    }
}

TEST(Train, DifferentSeedsDiffer) {
  const Graph g = two_blocks(5);
  EXPECT_NE(dump(train_gvae(g, small_config(1, 5))), dump(train_gvae(g, small_config(2, 5))));
}

// sigma = 0 and a clip bound no gradient reaches: the DP path must reproduce
// the non-private run bit for bit.
TEST(Train, DegenerateDpIsBitwiseNonPrivate) {
  const Graph g = two_blocks(6);
  for (ModelKind kind : {ModelKind::kGvae, ModelKind::kGgan}) {
    TrainConfig plain = small_config(66, 20);
    plain.batch_nodes = 5;
    TrainConfig dp = plain;
    DpConfig d;
    d.sigma = 0.0;
    d.clip_c0 = 1e300;
    dp.dp = d;
    const Checkpoint a = train(kind, g, plain), b = train(kind, g, dp);
    EXPECT_EQ(a.decoder, b.decoder);
    EXPECT_EQ(*a.encoder, *b.encoder);
    EXPECT_EQ(to_json(a.loss_trace.back()).dump(), to_json(b.loss_trace.back()).dump());
    EXPECT_TRUE(b.privacy.enabled);
  }
}

TEST(Train, DpStepCountAndReport) {
  const Graph g = two_blocks(7);
  TrainConfig c = small_config(7, 12);
  c.steps_per_epoch = 3;
  c.batch_nodes = 2;
  c.dp = dp_eps(1.0);
  const Checkpoint ck = train_ggan(g, c);
  EXPECT_EQ(ck.privacy.steps_taken, 36);
  EXPECT_EQ(ck.privacy.t_max, 36);
  EXPECT_DOUBLE_EQ(ck.privacy.q, 0.1);
  DpConfig expect = dp_eps(1.0);
  expect.q = 0.1;
  expect.t_max = 36;
  EXPECT_DOUBLE_EQ(ck.privacy.sigma_used, calibrate_sigma(expect).sigma);
  EXPECT_FALSE(train_ggan(g, small_config(7, 2)).privacy.enabled);
}

TEST(Train, InvalidPrivacyNeedsOverride) {
  const Graph g = two_blocks(8);
  TrainConfig c = small_config(8, 10);
  c.dp = dp_eps(10.0);
  c.dp->override_validity = false;
  EXPECT_THROW(train_gvae(g, c), ConfigError);
  c.dp->override_validity = true;
  const Checkpoint ck = train_gvae(g, c);
  EXPECT_FALSE(ck.privacy.validity);
  EXPECT_TRUE(ck.privacy.validity_overridden);
}

// Without noise every decoder step is a mean of clipped vectors, so it moves
// the decoder by at most lr * C.
TEST(Train, ClippedStepBound) {
  const Graph g = two_blocks(9);
  for (ModelKind kind : {ModelKind::kGvae, ModelKind::kGgan}) {
    TrainConfig c = small_config(9, 1);
    c.batch_nodes = 6;
    DpConfig d;
    d.sigma = 0.0;
    d.clip_c0 = 0.01;
    c.dp = d;
    Rng init = make_rng(9, 0);
    const GvaeParams p0 = GvaeParams::init(20, 16, 8, init);
    ParamSet delta = train(kind, g, c).decoder;
    delta.add_scaled(p0.decoder, -1.0);
    EXPECT_LE(delta.norm(), c.lr_generator * 0.01 * (1.0 + 1e-12));
    EXPECT_GT(delta.norm(), 0.0);
  }
}

TEST(Train, ConfigValidation) {
  const Graph g = two_blocks(10);
  TrainConfig c = small_config(1, 1);
  c.batch_nodes = 21;
  EXPECT_THROW(train_gvae(g, c), ConfigError);
  c = small_config(1, 1);
  c.lambda1 = -1;
  EXPECT_THROW(train_gvae(g, c), ConfigError);
  c = small_config(1, 1);
  c.latent_dim = 0;
  EXPECT_THROW(train_ggan(g, c), ConfigError);
}

// lambda2 = 0: the discriminator never moves and the generator sees only the
// feature-matching loss. Re-run that autoencoder with plain primitives.
TEST(TrainGgan, ZeroLambda2IsFeatureMatchingAutoencoder) {
  const Graph g = two_blocks(12);
  TrainConfig c = small_config(12, 15);
  c.lambda2 = 0.0;
  c.batch_nodes = 5;
  c.steps_per_epoch = 2;
  const Checkpoint ck = train_ggan(g, c);

  const int n = 20;
  Rng init = make_rng(c.seed, 0), batch_rng = make_rng(c.seed, 1), latent_rng = make_rng(c.seed, 2);
  GvaeParams p = GvaeParams::init(n, c.hidden_dim, c.latent_dim, init);
  const DiscParams disc = DiscParams::init(n, c.hidden_dim, c.latent_dim, init);
  const Matrix a = g.adjacency_matrix(), a_norm = normalize_adjacency(g);
  GradSet velocity = p.encoder.zeros_like();
  std::vector<double> rec;
  for (int epoch = 0; epoch < c.epochs; ++epoch) {
    double r = 0.0;
    for (int s = 0; s < c.steps_per_epoch; ++s) {
      const std::vector<int> batch = sample_node_batch(n, c.batch_nodes, batch_rng);
      const EncoderOutput enc = encode(a_norm, p.encoder);
      const Matrix noise = standard_normal(n, c.latent_dim, latent_rng);
      const LatentState st = make_latent(enc.mu, enc.logvar, noise);
      const DecoderOutput dec = decode(st.z, p.decoder);
      const FeatureRecLoss frl = feature_rec_loss(a, dec.p, disc);
      const KlLoss kl = kl_prior_loss(st.mu, st.logvar);
      r += frl.loss / n / c.steps_per_epoch;
      const DecoderGrads dg = decoder_backward(dec, frl.d_p);
      const Matrix d_mu = dg.d_z + c.lambda1 * kl.d_mu;
      const Matrix d_lv =
          (dg.d_z.array() * noise.array() * 0.5 * (0.5 * st.logvar.array()).exp()).matrix() +
          c.lambda1 * kl.d_logvar;
      GradSet eg = encode_backward(enc, d_mu, d_lv);
      eg.scale(1.0 / n);
      GradSet mean = p.decoder.zeros_like();
      for (const GradSet& part : per_node_decoder_grads(dec, frl.d_p, batch)) mean.add_scaled(part);
      mean.scale(1.0 / static_cast<double>(batch.size()));
      velocity.scale(c.momentum).add_scaled(eg);
      p.encoder.add_scaled(velocity, -c.lr_encoder);
      p.decoder.add_scaled(mean, -c.lr_generator);
    }
    rec.push_back(r);
  }
  EXPECT_EQ(*ck.discriminator, disc.params);
  for (std::size_t k = 0; k < p.decoder.size(); ++k)
    EXPECT_LT((ck.decoder[k].value - p.decoder[k].value).cwiseAbs().maxCoeff(), 1e-12);
  for (std::size_t k = 0; k < p.encoder.size(); ++k)
    EXPECT_LT((ck.encoder->operator[](k).value - p.encoder[k].value).cwiseAbs().maxCoeff(), 1e-12);
  for (int e = 0; e < c.epochs; ++e) EXPECT_NEAR(ck.loss_trace[e].rec, rec[e], 1e-12);
}

TEST(Checkpoint, ReleasedCopyCarriesGeneratorOnly) {
  const Graph g = two_blocks(14);
  const Checkpoint full = train_ggan(g, small_config(14, 3));
  const Checkpoint rel = full.released_copy();
  const nlohmann::json j = to_json(rel);
  EXPECT_TRUE(j.at("released").get<bool>());
  EXPECT_EQ(j.at("params").size(), 1u);
  EXPECT_TRUE(j.at("params").contains("decoder"));
  const Checkpoint back = checkpoint_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.decoder, full.decoder);
  EXPECT_FALSE(back.encoder.has_value());
  EXPECT_FALSE(back.discriminator.has_value());

  nlohmann::json forged = to_json(full);
  forged["released"] = true;
  forged["params"]["encoder"] = to_json(*full.encoder);
  EXPECT_THROW(checkpoint_from_json(forged), ParseError);
}

TEST(Checkpoint, FullRoundTrip) {
  const Graph g = two_blocks(15);
  TrainConfig c = small_config(15, 3);
  c.dp = dp_eps(1.0);
  c.pos_weight = 3.5;
  const Checkpoint ck = train_gvae(g, c);
  const std::string s = dump(ck);
  EXPECT_EQ(dump(checkpoint_from_json(nlohmann::json::parse(s))), s);
}

}  // namespace
}  // namespace privgraph
