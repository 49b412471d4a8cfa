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

#include <vector>

#include "oracles.hpp"
#include "privgraph.hpp"

namespace privgraph {
namespace {

Graph path3() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

Graph complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

TEST(Graph, EdgesAreSymmetricAndDeduplicated) {
  Graph g(4);
  EXPECT_TRUE(g.add_edge(0, 1));
  EXPECT_FALSE(g.add_edge(1, 0));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_EQ(g.num_edges(), 1);
  EXPECT_TRUE(g.remove_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_EQ(g.num_edges(), 0);
}

TEST(Graph, RejectsSelfLoopsAndOutOfRange) {
  Graph g(3);
  EXPECT_THROW(g.add_edge(1, 1), Error);
  EXPECT_THROW(g.add_edge(0, 3), Error);
  EXPECT_THROW(g.add_edge(-1, 0), Error);
}

TEST(Graph, FromAdjacencyValidates) {
  Matrix a = path3().adjacency_matrix();
  EXPECT_EQ(Graph::from_adjacency(a), path3());
  Matrix bad = a;
  bad(0, 1) = 0.5;
  bad(1, 0) = 0.5;
  EXPECT_THROW(Graph::from_adjacency(bad), Error);
  bad = a;
  bad(0, 2) = 1.0;
  EXPECT_THROW(Graph::from_adjacency(bad), Error);
  bad = a;
  bad(2, 2) = 1.0;
  EXPECT_THROW(Graph::from_adjacency(bad), Error);
}

TEST(Graph, AdjacencyIsSymmetricZeroDiagonal) {
  Rng rng = make_rng(3);
  for (int t = 0; t < 20; ++t) {
    const Graph g = oracle::random_graph(9, 0.4, rng);
    const Matrix a = g.adjacency_matrix();
    EXPECT_EQ(a, a.transpose());
    EXPECT_EQ(a.diagonal().sum(), 0.0);
    EXPECT_EQ(a.sum(), 2.0 * g.num_edges());
  }
}

TEST(NormalizeAdjacency, SingleEdgeIsItsOwnNormalization) {
  Graph g(2);
  g.add_edge(0, 1);
  const Matrix an = normalize_adjacency(g);
  EXPECT_EQ(an, g.adjacency_matrix());
}

TEST(NormalizeAdjacency, IsolatedNodesGiveZeroRows) {
  Graph g(4);
  g.add_edge(0, 1);
  const Matrix an = normalize_adjacency(g);
  EXPECT_TRUE(an.allFinite());
  EXPECT_EQ(an.row(2).cwiseAbs().sum(), 0.0);
  EXPECT_EQ(an.row(3).cwiseAbs().sum(), 0.0);
}

TEST(NormalizeAdjacency, MatchesEntrywiseFormula) {
  Rng rng = make_rng(5);
  for (bool loops : {false, true}) {
    const Graph g = oracle::random_graph(8, 0.35, rng);
    Matrix a = g.adjacency_matrix();
    if (loops) a += Matrix::Identity(8, 8);
    const Matrix an = normalize_adjacency(g, loops);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const double di = a.row(i).sum(), dj = a.row(j).sum();
        const double expect = (di > 0 && dj > 0) ? a(i, j) / std::sqrt(di * dj) : 0.0;
        EXPECT_NEAR(an(i, j), expect, 1e-15);
      }
    EXPECT_EQ(an, an.transpose());
  }
}

TEST(NormalizeAdjacency, SelfLoopsOnIsolatedNode) {
  const Matrix an = normalize_adjacency(Graph(3), true);
  EXPECT_TRUE(an.isApprox(Matrix::Identity(3, 3)));
}

TEST(Degrees, Examples) {
  EXPECT_EQ(degrees(complete(3)), (std::vector<int>{2, 2, 2}));
  Graph star(4);
  for (int leaf = 1; leaf < 4; ++leaf) star.add_edge(0, leaf);
  EXPECT_EQ(degrees(star), (std::vector<int>{3, 1, 1, 1}));
  EXPECT_EQ(degrees(Graph(4)), (std::vector<int>{0, 0, 0, 0}));
}

TEST(OneHotFeatures, Identity) {
  EXPECT_EQ(one_hot_features(1), Matrix::Identity(1, 1));
  EXPECT_EQ(one_hot_features(3), Matrix::Identity(3, 3));
  EXPECT_THROW(one_hot_features(0), Error);
}

TEST(Graph, PermutedKeepsEdgeCount) {
  Rng rng = make_rng(11);
  const Graph g = oracle::random_graph(7, 0.5, rng);
  std::vector<int> perm{3, 0, 6, 1, 5, 2, 4};
  const Graph h = g.permuted(perm);
  EXPECT_EQ(h.num_edges(), g.num_edges());
  for (const Edge& e : g.edges()) EXPECT_TRUE(h.has_edge(perm[e.u], perm[e.v]));
}

TEST(Seeds, MixSeedSeparatesStreams) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  Rng a = make_rng(7, 2), b = make_rng(7, 2);
  EXPECT_EQ(a(), b());
}

}  // namespace
}  // namespace privgraph
