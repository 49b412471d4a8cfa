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

// Census of connected induced subgraphs on 3, 4 and 5 nodes.
//
// A k-node subgraph is encoded as a bitstring over its node pairs in the
// order (0,1), (0,2), ..., (0,k-1), (1,2), ..., (k-2,k-1), the first pair
// being the most significant bit. The canonical code of an isomorphism class
// is the largest such value over all k! relabelings. Classes are ordered by
// (size, edge count, canonical code); docs/motif_classes.md lists the table.

#ifndef PRIVGRAPH_MOTIFS_HPP_
#define PRIVGRAPH_MOTIFS_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "privgraph/graph.hpp"

namespace privgraph {

inline constexpr int kMinMotifSize = 3;
inline constexpr int kMaxMotifSize = 5;
inline constexpr int kNumMotifClasses = 29;

using MotifVector = std::array<std::int64_t, kNumMotifClasses>;

struct MotifClass {
  int size = 0;
  int edges = 0;
  std::uint32_t code = 0;
};

namespace detail {

constexpr int num_pairs(int k) { return k * (k - 1) / 2; }

// Bit position of pair (i, j), i < j, inside a k-node code.
constexpr int pair_bit(int k, int i, int j) {
  int index = 0;
  for (int a = 0; a < i; ++a) index += k - 1 - a;
  index += j - i - 1;
  return num_pairs(k) - 1 - index;
}

inline bool code_has(int k, std::uint32_t code, int i, int j) {
  if (i > j) std::swap(i, j);
  return (code >> pair_bit(k, i, j)) & 1u;
}

inline std::uint32_t relabel(int k, std::uint32_t code, const std::array<int, 5>& perm) {
  std::uint32_t out = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (code_has(k, code, i, j)) {
        int a = perm[i], b = perm[j];
        if (a > b) std::swap(a, b);
        out |= 1u << pair_bit(k, a, b);
      }
  return out;
}

inline bool code_connected(int k, std::uint32_t code) {
  std::uint32_t seen = 1u, frontier = 1u;
  while (frontier) {
    std::uint32_t next = 0;
    for (int i = 0; i < k; ++i) {
      if (!((frontier >> i) & 1u)) continue;
      for (int j = 0; j < k; ++j)
        if (j != i && code_has(k, code, i, j) && !((seen >> j) & 1u)) next |= 1u << j;
    }
    seen |= next;
    frontier = next;
  }
  return seen == (1u << k) - 1u;
}

inline std::uint32_t canonical_code(int k, std::uint32_t code) {
  std::array<int, 5> perm{0, 1, 2, 3, 4};
  std::uint32_t best = 0;
  do {
    best = std::max(best, relabel(k, code, perm));
  } while (std::next_permutation(perm.begin(), perm.begin() + k));
  return best;
}

struct MotifTables {
  std::vector<MotifClass> classes;
  // lookup[k][code] = class index, or -1 for disconnected codes.
  std::array<std::vector<int>, kMaxMotifSize + 1> lookup;

  MotifTables() {
    for (int k = kMinMotifSize; k <= kMaxMotifSize; ++k) {
      const std::uint32_t count = 1u << num_pairs(k);
      std::vector<std::uint32_t> canon(count);
      std::vector<std::uint32_t> reps;
      for (std::uint32_t c = 0; c < count; ++c) {
        canon[c] = canonical_code(k, c);
        if (canon[c] == c && code_connected(k, c)) reps.push_back(c);
      }
      std::vector<MotifClass> level;
      for (std::uint32_t c : reps)
        level.push_back({k, std::popcount(c), c});
      std::sort(level.begin(), level.end(), [](const MotifClass& a, const MotifClass& b) {
        return a.edges != b.edges ? a.edges < b.edges : a.code < b.code;
      });
      const int base = static_cast<int>(classes.size());
      classes.insert(classes.end(), level.begin(), level.end());
      lookup[k].assign(count, -1);
      for (std::uint32_t c = 0; c < count; ++c) {
        if (!code_connected(k, c)) continue;
        for (int idx = 0; idx < static_cast<int>(level.size()); ++idx)
          if (level[idx].code == canon[c]) lookup[k][c] = base + idx;
      }
    }
  }
};

inline const MotifTables& motif_tables() {
  static const MotifTables tables;
  return tables;
}

}  // namespace detail

inline const std::vector<MotifClass>& motif_classes() {
  return detail::motif_tables().classes;
}

// Class index of the subgraph induced by `nodes` (any order), or -1 when it
// is disconnected.
inline int classify_subgraph(const Graph& g, std::span<const int> nodes) {
  const int k = static_cast<int>(nodes.size());
  if (k < kMinMotifSize || k > kMaxMotifSize) return -1;
  std::uint32_t code = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (g.has_edge(nodes[i], nodes[j])) code |= 1u << detail::pair_bit(k, i, j);
  return detail::motif_tables().lookup[k][code];
}

namespace detail {

// ESU enumeration: every connected induced subgraph with at most
// kMaxMotifSize nodes is visited exactly once.
class EsuCounter {
 public:
  explicit EsuCounter(const Graph& g) : g_(g), adj_(g.num_nodes()) {
    for (int u = 0; u < g.num_nodes(); ++u) adj_[u] = g.neighbors(u);
  }

  MotifVector run() {
    counts_.fill(0);
    for (int v = 0; v < g_.num_nodes(); ++v) {
      sub_.assign(1, v);
      std::vector<int> ext;
      for (int u : adj_[v])
        if (u > v) ext.push_back(u);
      extend(ext, v);
    }
    return counts_;
  }

 private:
  bool in_sub_or_adjacent(int u) const {
    for (int s : sub_)
      if (s == u || g_.has_edge(s, u)) return true;
    return false;
  }

  void extend(std::vector<int> ext, int root) {
    const int k = static_cast<int>(sub_.size());
    if (k >= kMinMotifSize) {
      const int cls = classify_subgraph(g_, sub_);
      ++counts_[cls];
    }
    if (k == kMaxMotifSize) return;
    while (!ext.empty()) {
      const int w = ext.back();
      ext.pop_back();
      std::vector<int> next = ext;
      for (int u : adj_[w])
        if (u > root && !in_sub_or_adjacent(u) &&
            std::find(next.begin(), next.end(), u) == next.end())
          next.push_back(u);
      sub_.push_back(w);
      extend(std::move(next), root);
      sub_.pop_back();
    }
  }

  const Graph& g_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> sub_;
  MotifVector counts_{};
};

}  // namespace detail

inline MotifVector motif_census(const Graph& g) { return detail::EsuCounter(g).run(); }

}  // namespace privgraph

#endif  // PRIVGRAPH_MOTIFS_HPP_
