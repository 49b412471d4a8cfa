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
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "privgraph.hpp"

namespace privgraph {
namespace {

Graph complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph cycle(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph star(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

Graph two_edges() {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  return g;
}

TEST(Lcc, Examples) {
  EXPECT_EQ(lcc_size(complete(3)), 3);
  EXPECT_EQ(lcc_size(two_edges()), 2);
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  EXPECT_EQ(lcc_size(g), 3);
  EXPECT_EQ(lcc_size(Graph(1)), 1);
}

TEST(TriangleCount, Examples) {
  EXPECT_EQ(triangle_count(complete(3)), 1);
  EXPECT_EQ(triangle_count(complete(4)), 4);
  EXPECT_EQ(triangle_count(cycle(5)), 0);
}

TEST(CharPathLength, Examples) {
  Graph p3(3);
  p3.add_edge(0, 1);
  p3.add_edge(1, 2);
  EXPECT_DOUBLE_EQ(char_path_length(p3), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(char_path_length(complete(4)), 1.0);
  EXPECT_DOUBLE_EQ(char_path_length(two_edges()), 1.0);
  EXPECT_DOUBLE_EQ(char_path_length(Graph(3)), 0.0);
}

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(gini_index(cycle(6)), 0.0);
  EXPECT_DOUBLE_EQ(gini_index(complete(5)), 0.0);
  EXPECT_NEAR(gini_index(star(3)), oracle::gini(star(3)), 1e-15);
  EXPECT_NEAR(gini_index(star(3)), 12.0 / (2.0 * 4.0 * 6.0), 1e-15);
  EXPECT_DOUBLE_EQ(gini_index(Graph(4)), 0.0);
}

TEST(Rede, Examples) {
  EXPECT_NEAR(rede(cycle(7)), 1.0, 1e-15);
  Graph e(2);
  e.add_edge(0, 1);
  EXPECT_NEAR(rede(e), 1.0, 1e-15);
  const double expect =
      -(0.5 * std::log(0.5) + 3.0 * (1.0 / 6.0) * std::log(1.0 / 6.0)) / std::log(4.0);
  EXPECT_NEAR(rede(star(3)), expect, 1e-15);
  EXPECT_DOUBLE_EQ(rede(Graph(5)), 0.0);
}

TEST(DegreeHist, Examples) {
  const DegreeHistogram k3 = degree_hist_50(complete(3));
  EXPECT_EQ(k3[1], 3.0);
  EXPECT_EQ(std::accumulate(k3.begin(), k3.end(), 0.0), 3.0);
  const DegreeHistogram s = degree_hist_50(star(60));
  EXPECT_EQ(s[0], 60.0);
  EXPECT_EQ(s[kDegreeBins - 1], 1.0);
  EXPECT_EQ(degree_bin(0), 0);
  EXPECT_EQ(degree_bin(1), 0);
  EXPECT_EQ(degree_bin(49), 48);
  EXPECT_EQ(degree_bin(50), 49);
  EXPECT_EQ(degree_bin(500), 49);
}

TEST(CosineSim, Examples) {
  const std::vector<double> v{1.0, -2.0, 3.0}, w{2.0, -4.0, 6.0};
  const std::vector<double> e1{1.0, 0.0, 0.0}, e2{0.0, 1.0, 0.0}, z{0.0, 0.0, 0.0};
  EXPECT_NEAR(cosine_sim(v, v), 1.0, 1e-15);
  EXPECT_NEAR(cosine_sim(v, w), 1.0, 1e-15);
  EXPECT_EQ(cosine_sim(e1, e2), 0.0);
  EXPECT_EQ(cosine_sim(z, v), 0.0);
  EXPECT_THROW(cosine_sim(v, std::vector<double>{1.0}), DimensionError);
}

TEST(MotifClasses, CountsPerSize) {
  const auto& classes = motif_classes();
  ASSERT_EQ(classes.size(), 29u);
  int per_size[6] = {};
  for (const auto& c : classes) ++per_size[c.size];
  EXPECT_EQ(per_size[3], 2);
  EXPECT_EQ(per_size[4], 6);
  EXPECT_EQ(per_size[5], 21);
}

TEST(MotifClasses, MatchIndependentEnumeration) {
  const auto& mine = motif_classes();
  const auto& ref = oracle::motifs().classes;
  ASSERT_EQ(mine.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(mine[i].size, ref[i].first) << i;
    EXPECT_EQ(mine[i].code, oracle::pack(ref[i].second)) << i;
    EXPECT_EQ(mine[i].edges, oracle::bit_count(ref[i].second)) << i;
  }
}

TEST(MotifCensus, TriangleAndK4) {
  const MotifVector k3 = motif_census(complete(3));
  const MotifVector k4 = motif_census(complete(4));
  const int tri = 1;   // size 3: path, triangle
  const int k4_idx = 7;  // last of the six size-4 classes
  for (int i = 0; i < kNumMotifClasses; ++i) {
    EXPECT_EQ(k3[i], i == tri ? 1 : 0) << i;
    EXPECT_EQ(k4[i], i == tri ? 4 : (i == k4_idx ? 1 : 0)) << i;
  }
}

TEST(MotifCensus, MatchesSubsetOracleOnErdosRenyi) {
  Rng rng = make_rng(8, 0);
  const Graph g = erdos_renyi(8, 0.4, rng);
  const MotifVector got = motif_census(g);
  const auto want = oracle::motifs().census(g);
  for (int i = 0; i < kNumMotifClasses; ++i) EXPECT_EQ(got[i], want[i]) << "class " << i;
}

TEST(MotifCensus, Cycle5IsOneClass) {
  const MotifVector c = motif_census(cycle(5));
  // five induced 3-paths, five induced 4-paths, one 5-cycle
  EXPECT_EQ(c[0], 5);
  EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::int64_t{0}), 11);
}

TEST(ClassifySubgraph, DisconnectedIsMinusOne) {
  const std::vector<int> nodes{0, 1, 2, 3};
  EXPECT_EQ(classify_subgraph(two_edges(), nodes), -1);
}

TEST(Stats, AllMatchOraclesOnRandomGraphs) {
  Rng rng = make_rng(77);
  std::uniform_int_distribution<int> size(1, 10);
  std::uniform_real_distribution<double> dens(0.0, 0.8);
  for (int t = 0; t < 50; ++t) {
    const Graph g = oracle::random_graph(size(rng), dens(rng), rng);
    EXPECT_EQ(triangle_count(g), oracle::triangles(g));
    EXPECT_NEAR(char_path_length(g), oracle::char_path_length(g), 1e-9);
    EXPECT_NEAR(gini_index(g), oracle::gini(g), 1e-9);
    if (g.num_nodes() >= 2) {
      EXPECT_NEAR(rede(g), oracle::rede(g), 1e-9);
    }
    const MotifVector m = motif_census(g);
    const auto want = oracle::motifs().census(g);
    for (int i = 0; i < kNumMotifClasses; ++i) EXPECT_EQ(m[i], want[i]);
  }
}

TEST(Stats, PermutationInvariant) {
  Rng rng = make_rng(12);
  const Graph g = oracle::random_graph(9, 0.4, rng);
  std::vector<int> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const GraphStatsReport a = compute_stats(g), b = compute_stats(g.permuted(perm));
  EXPECT_EQ(a.lcc, b.lcc);
  EXPECT_EQ(a.tc, b.tc);
  EXPECT_DOUBLE_EQ(a.cpl, b.cpl);
  EXPECT_NEAR(a.gini, b.gini, 1e-12);
  EXPECT_NEAR(a.rede, b.rede, 1e-12);
  EXPECT_EQ(a.degree_hist, b.degree_hist);
  EXPECT_EQ(a.motif_vec, b.motif_vec);
}

TEST(Stats, CsvRowHasHeaderArity) {
  const GraphStatsReport r = compute_stats(cycle(5));
  auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(commas(stats_csv_header()), commas(to_csv_row(r)));
  EXPECT_EQ(to_json(r).at("tc").get<int>(), 0);
}

}  // namespace
}  // namespace privgraph
