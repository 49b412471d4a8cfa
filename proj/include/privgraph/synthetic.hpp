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

// Seeded random graph families for tests, smoke runs and the bundled corpus.

#ifndef PRIVGRAPH_SYNTHETIC_HPP_
#define PRIVGRAPH_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "privgraph/graph.hpp"

namespace privgraph {

inline Graph erdos_renyi(int n, double p, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (u01(rng) < p) g.add_edge(u, v);
  return g;
}

// Nodes are split into `blocks` contiguous groups of (nearly) equal size.
inline Graph planted_partition(int n, int blocks, double p_in, double p_out, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Graph g(n);
  auto block_of = [&](int v) { return static_cast<int>(static_cast<long long>(v) * blocks / n); };
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (u01(rng) < (block_of(u) == block_of(v) ? p_in : p_out)) g.add_edge(u, v);
  return g;
}

struct CorpusSpec {
  int graphs = 20;
  int nodes = 20;
  int blocks = 2;
  double p_in = 0.5;
  double p_out = 0.05;
};

// One planted-partition graph per index, each from its own derived seed.
inline std::vector<Graph> planted_partition_corpus(const CorpusSpec& spec, std::uint64_t seed) {
  std::vector<Graph> out;
  for (int i = 0; i < spec.graphs; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    out.push_back(planted_partition(spec.nodes, spec.blocks, spec.p_in, spec.p_out, rng));
  }
  return out;
}

}  // namespace privgraph

#endif  // PRIVGRAPH_SYNTHETIC_HPP_
