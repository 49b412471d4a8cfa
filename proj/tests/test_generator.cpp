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

#include <cmath>

#include "oracles.hpp"
#include "privgraph.hpp"

namespace privgraph {
namespace {

ParamSet zero_decoder(int hidden, int latent) {
  ParamSet d;
  d.add(keys::kV0, Matrix::Zero(latent, hidden));
  d.add(keys::kV1, Matrix::Zero(hidden, latent));
  return d;
}

ParamSet random_decoder(int hidden, int latent, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return GvaeParams::init_decoder(hidden, latent, rng);
}

void expect_simple(const Graph& g) {
  const Matrix a = g.adjacency_matrix();
  EXPECT_TRUE(a.isApprox(a.transpose(), 0.0));
  EXPECT_EQ(a.diagonal().sum(), 0.0);
  EXPECT_EQ(a.sum(), 2.0 * g.num_edges());
}

TEST(Binarize, ZeroDecoderThresholdIsEmpty) {
  Rng rng = make_rng(1);
  // f = 0 gives P = 0.5 everywhere, which is not strictly above one half.
  const GeneratedGraph gen = sample_graph(zero_decoder(4, 3), 9, Binarization::threshold(), rng);
  EXPECT_EQ(gen.graph.num_nodes(), 9);
  EXPECT_EQ(gen.graph.num_edges(), 0);
  EXPECT_TRUE(gen.p.isApprox(Matrix::Constant(9, 9, 0.5), 0.0));
}

TEST(Binarize, ThresholdIsStrict) {
  Matrix p = Matrix::Constant(3, 3, 0.2);
  p(0, 1) = p(1, 0) = 0.5 + 1e-12;
  p(1, 2) = p(2, 1) = 0.5;
  Rng rng = make_rng(2);
  const Graph g = binarize(p, Binarization::threshold(), rng);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(Binarize, TopMExactCount) {
  Rng rng = make_rng(3);
  const Matrix p = oracle::random_soft_adjacency(12, rng);
  for (int m : {0, 1, 7, 30, 66}) {
    const Graph g = binarize(p, Binarization::top_m(m), rng);
    EXPECT_EQ(g.num_edges(), m);
    expect_simple(g);
  }
  EXPECT_THROW(binarize(p, Binarization::top_m(67), rng), Error);
  EXPECT_THROW(binarize(p, Binarization::top_m(-1), rng), Error);
}

TEST(Binarize, TopMPicksLargestAndBreaksTiesByPairOrder) {
  Matrix p = Matrix::Constant(4, 4, 0.3);
  p(2, 3) = p(3, 2) = 0.9;
  Rng rng = make_rng(4);
  const Graph g = binarize(p, Binarization::top_m(3), rng);
  // (2,3) first, then the first two tied pairs in row-major order.
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {2, 3}}));
  Matrix rank = Matrix::Zero(4, 4);
  rank(0, 3) = rank(3, 0) = 5.0;
  EXPECT_EQ(binarize(p, Binarization::top_m(1), rng, &rank).edges(), (std::vector<Edge>{{0, 3}}));
}

// Each pair is an independent Bernoulli(P_ij) draw.
TEST(Binarize, BernoulliFrequencies) {
  const int n = 5, draws = 10000;
  Rng prng = make_rng(5);
  const Matrix p = oracle::random_soft_adjacency(n, prng);
  Matrix hits = Matrix::Zero(n, n);
  Rng rng = make_rng(6);
  for (int t = 0; t < draws; ++t) hits += binarize(p, Binarization::bernoulli(), rng).adjacency_matrix();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const double se = std::sqrt(p(u, v) * (1 - p(u, v)) / draws);
      EXPECT_NEAR(hits(u, v) / draws, p(u, v), 3.5 * se) << u << "," << v;
    }
}

TEST(SampleGraph, GraphInvariantsAllModes) {
  const ParamSet dec = random_decoder(8, 4, 7);
  Rng rng = make_rng(7);
  for (const Binarization& mode :
       {Binarization::bernoulli(), Binarization::threshold(), Binarization::top_m(10)}) {
    const GeneratedGraph gen = sample_graph(dec, 15, mode, rng);
    EXPECT_EQ(gen.graph.num_nodes(), 15);
    expect_simple(gen.graph);
    EXPECT_TRUE(gen.p.isApprox(gen.p.transpose(), 1e-14));
    EXPECT_TRUE(gen.p.isApprox(sigmoid(gen.logits), 1e-14));
  }
  EXPECT_THROW(sample_graph(dec, 0, Binarization::threshold(), rng), Error);
}

TEST(SampleGraph, SizeIndependentOfTrainingGraph) {
  const ParamSet dec = random_decoder(8, 4, 8);
  Rng rng = make_rng(8);
  for (int n : {1, 3, 40}) EXPECT_EQ(sample_graph(dec, n, Binarization::bernoulli(), rng).graph.num_nodes(), n);
}

Checkpoint fake_checkpoint() {
  Checkpoint c;
  c.released = true;
  c.num_nodes = 10;
  c.num_edges = 12;
  c.decoder = random_decoder(8, 4, 9);
  return c;
}

TEST(SampleMany, CountsAndSeeding) {
  const Checkpoint ck = fake_checkpoint();
  Rng r0 = make_rng(1);
  EXPECT_TRUE(sample_many(ck, 10, 0, Binarization::top_m(), r0).empty());
  Rng a = make_rng(11), b = make_rng(11), c = make_rng(12);
  const auto ga = sample_many(ck, 10, 4, Binarization::bernoulli(), a);
  const auto gb = sample_many(ck, 10, 4, Binarization::bernoulli(), b);
  const auto gc = sample_many(ck, 10, 4, Binarization::bernoulli(), c);
  ASSERT_EQ(ga.size(), 4u);
  bool any_diff = false;
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(ga[i].edges(), gb[i].edges());
    any_diff |= ga[i].edges() != gc[i].edges();
  }
  EXPECT_TRUE(any_diff);
}

TEST(SampleMany, TopMDefaultsToTrainingEdgeCount) {
  const Checkpoint ck = fake_checkpoint();
  EXPECT_EQ(*resolve_mode(ck, Binarization::top_m()).m, 12);
  EXPECT_EQ(*resolve_mode(ck, Binarization::top_m(3)).m, 3);
  EXPECT_FALSE(resolve_mode(ck, Binarization::bernoulli()).m.has_value());
  Rng rng = make_rng(13);
  for (const Graph& g : sample_many(ck, 10, 3, Binarization::top_m(), rng)) EXPECT_EQ(g.num_edges(), 12);
}

TEST(Binarization, Parse) {
  EXPECT_EQ(parse_binarization("bernoulli").kind, Binarization::Kind::kBernoulli);
  EXPECT_EQ(parse_binarization("threshold").kind, Binarization::Kind::kThreshold);
  EXPECT_EQ(parse_binarization("topm").kind, Binarization::Kind::kTopM);
  EXPECT_THROW(parse_binarization("top-m"), ConfigError);
}

TEST(UpperPairs, RowMajor) {
  EXPECT_EQ(upper_pairs(3), (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(upper_pairs(10).size(), 45u);
  EXPECT_TRUE(upper_pairs(1).empty());
}

}  // namespace
}  // namespace privgraph
