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

#ifndef PRIVGRAPH_GRAPH_HPP_
#define PRIVGRAPH_GRAPH_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privgraph/common.hpp"

namespace privgraph {

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph stored as a dense symmetric 0/1 adjacency.
// Symmetry, zero diagonal and binary entries hold after every mutation.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) throw Error("Graph: negative node count");
  }

  static Graph from_edges(int n, std::span<const Edge> edges) {
    Graph g(n);
    for (const Edge& e : edges) g.add_edge(e.u, e.v);
    return g;
  }

  // Builds from a dense 0/1 matrix; throws if it is not a valid adjacency.
  static Graph from_adjacency(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("Graph: adjacency must be square");
    Graph g(static_cast<int>(a.rows()));
    for (int i = 0; i < g.n_; ++i) {
      if (a(i, i) != 0.0) throw Error("Graph: nonzero diagonal");
      for (int j = i + 1; j < g.n_; ++j) {
        const double x = a(i, j);
        if (x != a(j, i)) throw Error("Graph: adjacency not symmetric");
        if (x != 0.0 && x != 1.0) throw Error("Graph: adjacency not binary");
        if (x == 1.0) g.add_edge(i, j);
      }
    }
    return g;
  }

  int num_nodes() const { return n_; }

  int num_edges() const { return m_; }

  bool has_edge(int u, int v) const {
    return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }

  // Returns false if the edge was already present.
  bool add_edge(int u, int v) {
    check_pair(u, v);
    if (has_edge(u, v)) return false;
    set(u, v, 1);
    ++m_;
    return true;
  }

  bool remove_edge(int u, int v) {
    check_pair(u, v);
    if (!has_edge(u, v)) return false;
    set(u, v, 0);
    --m_;
    return true;
  }

  // Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (has_edge(u, v)) out.push_back({u, v});
    return out;
  }

  std::vector<int> neighbors(int u) const {
    std::vector<int> out;
    for (int v = 0; v < n_; ++v)
      if (has_edge(u, v)) out.push_back(v);
    return out;
  }

  Matrix adjacency_matrix() const {
    Matrix a = Matrix::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) a(i, j) = has_edge(i, j) ? 1.0 : 0.0;
    return a;
  }

  // Relabels node i of this graph as perm[i].
  Graph permuted(std::span<const int> perm) const {
    Graph g(n_);
    for (const Edge& e : edges()) g.add_edge(perm[e.u], perm[e.v]);
    return g;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  void check_pair(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw Error("Graph: node index out of range");
    if (u == v) throw Error("Graph: self-loops are not allowed");
  }

  void set(int u, int v, std::uint8_t x) {
    adj_[static_cast<std::size_t>(u) * n_ + v] = x;
    adj_[static_cast<std::size_t>(v) * n_ + u] = x;
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint8_t> adj_;
};

inline std::vector<int> degrees(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<int> d(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i] += g.has_edge(i, j) ? 1 : 0;
  return d;
}

// Soft degrees at or below this count as zero. Saturated probability rows can
// sum to a denormal, whose D^{-1/2} would overflow the backward pass.
inline constexpr double kMinDegree = 1e-12;

// D^{-1/2} W D^{-1/2} with D_ii = sum_j W_ij. Works on soft (probability)
// matrices too. Rows whose degree is zero come out all-zero.
inline Matrix normalize_matrix(const Matrix& w) {
  if (w.rows() != w.cols()) throw DimensionError("normalize_matrix: non-square input");
  const Eigen::Index n = w.rows();
  Vector inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = w.row(i).sum();
    inv_sqrt(i) = d > kMinDegree ? 1.0 / std::sqrt(d) : 0.0;
  }
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = w(i, j) * (inv_sqrt(i) * inv_sqrt(j));
  return out;
}

inline Matrix normalize_adjacency(const Graph& g, bool add_self_loops = false) {
  Matrix a = g.adjacency_matrix();
  if (add_self_loops) a.diagonal().array() += 1.0;
  return normalize_matrix(a);
}

inline Matrix one_hot_features(int n) {
  if (n < 1) throw Error("one_hot_features: n must be positive");
  return Matrix::Identity(n, n);
}

}  // namespace privgraph

#endif  // PRIVGRAPH_GRAPH_HPP_
