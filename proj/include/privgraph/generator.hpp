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

#ifndef PRIVGRAPH_GENERATOR_HPP_
#define PRIVGRAPH_GENERATOR_HPP_

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "privgraph/graph.hpp"
#include "privgraph/gvae.hpp"
#include "privgraph/trainer.hpp"

namespace privgraph {

struct Binarization {
  enum class Kind { kBernoulli, kThreshold, kTopM };
  Kind kind = Kind::kTopM;
  std::optional<int> m;  // top-M edge count; unset: training edge count

  static Binarization bernoulli() { return {Kind::kBernoulli, std::nullopt}; }
  static Binarization threshold() { return {Kind::kThreshold, std::nullopt}; }
  static Binarization top_m(std::optional<int> m = std::nullopt) { return {Kind::kTopM, m}; }
};

inline Binarization parse_binarization(const std::string& s) {
  if (s == "bernoulli") return Binarization::bernoulli();
  if (s == "threshold") return Binarization::threshold();
  if (s == "topm") return Binarization::top_m();
  throw ConfigError("unknown binarization mode '" + s + "'");
}

// Upper-triangle pairs of an n-node graph in row-major order.
inline std::vector<Edge> upper_pairs(int n) {
  std::vector<Edge> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
  return pairs;
}

// Turns an edge-probability matrix into a simple graph. Only the upper
// triangle is read. Top-M ranks by `rank` when given (any matrix ordered like
// p, e.g. the logits, which do not saturate); remaining ties go by pair order.
inline Graph binarize(const Matrix& p, const Binarization& mode, Rng& rng,
                      const Matrix* rank = nullptr) {
  const int n = static_cast<int>(p.rows());
  Graph g(n);
  switch (mode.kind) {
    case Binarization::Kind::kBernoulli: {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      for (const Edge& e : upper_pairs(n))
        if (u01(rng) < p(e.u, e.v)) g.add_edge(e.u, e.v);
      break;
    }
    case Binarization::Kind::kThreshold:
      for (const Edge& e : upper_pairs(n))
        if (p(e.u, e.v) > 0.5) g.add_edge(e.u, e.v);
      break;
    case Binarization::Kind::kTopM: {
      const std::vector<Edge> pairs = upper_pairs(n);
      const int m = mode.m.value_or(0);
      if (m < 0 || m > static_cast<int>(pairs.size()))
        throw Error("binarize: top-M count " + std::to_string(m) + " exceeds " +
                    std::to_string(pairs.size()) + " available pairs");
      std::vector<int> order(pairs.size());
      std::iota(order.begin(), order.end(), 0);
      const Matrix& r = rank ? *rank : p;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return r(pairs[a].u, pairs[a].v) > r(pairs[b].u, pairs[b].v);
      });
      for (int i = 0; i < m; ++i) g.add_edge(pairs[order[i]].u, pairs[order[i]].v);
      break;
    }
  }
  return g;
}

struct GeneratedGraph {
  Matrix p;       // decoded edge probabilities
  Matrix logits;  // F F^T, same order as p without saturation
  Graph graph;
};

// Z ~ N(0, I), P = decode(Z), then binarize. Reads only the decoder.
inline GeneratedGraph sample_graph(const ParamSet& decoder, int n, const Binarization& mode,
                                   Rng& rng) {
  if (n < 1) throw Error("sample_graph: n must be positive");
  const Matrix z = standard_normal(n, decoder_latent_dim(decoder), rng);
  DecoderOutput dec = decode(z, decoder);
  GeneratedGraph out{std::move(dec.p), std::move(dec.s), {}};
  out.graph = binarize(out.p, mode, rng, &out.logits);
  return out;
}

inline Binarization resolve_mode(const Checkpoint& ckpt, Binarization mode) {
  if (mode.kind == Binarization::Kind::kTopM && !mode.m) mode.m = ckpt.num_edges;
  return mode;
}

inline GeneratedGraph sample_graph(const Checkpoint& ckpt, int n, const Binarization& mode,
                                   Rng& rng) {
  return sample_graph(ckpt.decoder, n, resolve_mode(ckpt, mode), rng);
}

inline std::vector<Graph> sample_many(const Checkpoint& ckpt, int n, int count,
                                      const Binarization& mode, Rng& rng) {
  std::vector<Graph> out;
  out.reserve(std::max(0, count));
  for (int i = 0; i < count; ++i) out.push_back(sample_graph(ckpt, n, mode, rng).graph);
  return out;
}

}  // namespace privgraph

#endif  // PRIVGRAPH_GENERATOR_HPP_
