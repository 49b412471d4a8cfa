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

// Utility and privacy evaluation: statistic gaps, degree/motif similarity,
// and the held-out link recovery probe.

#ifndef PRIVGRAPH_EVAL_HPP_
#define PRIVGRAPH_EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "privgraph/generator.hpp"
#include "privgraph/graph.hpp"
#include "privgraph/stats.hpp"
#include "privgraph/trainer.hpp"

namespace privgraph {

struct StatsGap {
  double lcc = 0.0;
  double tc = 0.0;
  double cpl = 0.0;
  double gini = 0.0;
  double rede = 0.0;
};

inline nlohmann::json to_json(const StatsGap& g) {
  return {{"LCC", g.lcc}, {"TC", g.tc}, {"CPL", g.cpl}, {"GINI", g.gini}, {"REDE", g.rede}};
}

// Mean absolute difference per statistic; signs never cancel.
inline StatsGap stats_gap(const GraphStatsReport& original,
                          std::span<const GraphStatsReport> generated) {
  if (generated.empty()) throw Error("stats_gap: no generated graphs");
  StatsGap gap;
  for (const auto& r : generated) {
    gap.lcc += std::abs(static_cast<double>(r.lcc - original.lcc));
    gap.tc += std::abs(static_cast<double>(r.tc - original.tc));
    gap.cpl += std::abs(r.cpl - original.cpl);
    gap.gini += std::abs(r.gini - original.gini);
    gap.rede += std::abs(r.rede - original.rede);
  }
  const double k = static_cast<double>(generated.size());
  gap.lcc /= k;
  gap.tc /= k;
  gap.cpl /= k;
  gap.gini /= k;
  gap.rede /= k;
  return gap;
}

inline StatsGap stats_gap(const Graph& original, std::span<const Graph> generated) {
  std::vector<GraphStatsReport> reports;
  for (const Graph& g : generated) reports.push_back(compute_stats(g));
  return stats_gap(compute_stats(original), reports);
}

struct Similarity {
  double degree_cos = 0.0;
  double motif_cos = 0.0;
};

inline Similarity similarity_scores(const GraphStatsReport& original,
                                    std::span<const GraphStatsReport> generated) {
  if (generated.empty()) throw Error("similarity_scores: no generated graphs");
  Similarity s;
  const std::vector<double> om = to_doubles(original.motif_vec);
  for (const auto& r : generated) {
    s.degree_cos += cosine_sim(original.degree_hist, r.degree_hist);
    s.motif_cos += cosine_sim(om, to_doubles(r.motif_vec));
  }
  s.degree_cos /= static_cast<double>(generated.size());
  s.motif_cos /= static_cast<double>(generated.size());
  return s;
}

inline Similarity similarity_scores(const Graph& original, std::span<const Graph> generated) {
  std::vector<GraphStatsReport> reports;
  for (const Graph& g : generated) reports.push_back(compute_stats(g));
  return similarity_scores(compute_stats(original), reports);
}

struct EdgeSplit {
  Graph train;
  std::vector<Edge> heldout;
};

// Keeps floor(fraction * M) edges (at least one, at most M - 1) chosen
// uniformly at random; the rest are held out. Node set is unchanged.
inline EdgeSplit split_edges(const Graph& g, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("split_edges: fraction must be in (0, 1)");
  const int m = g.num_edges();
  if (m < 2) throw Error("split_edges: need at least 2 edges");
  std::vector<Edge> edges = g.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  int keep = static_cast<int>(std::floor(train_fraction * m + 1e-9));
  keep = std::clamp(keep, 1, m - 1);
  EdgeSplit split{Graph(g.num_nodes()), {}};
  for (int i = 0; i < m; ++i) {
    if (i < keep) {
      split.train.add_edge(edges[i].u, edges[i].v);
    } else {
      split.heldout.push_back(edges[i]);
    }
  }
  std::sort(split.heldout.begin(), split.heldout.end());
  return split;
}

// Returns gen_of_orig: the i-th highest-degree original node is paired with
// the i-th highest-degree generated node, ties broken by ascending index.
inline std::vector<int> align_by_degree(const Graph& original, const Graph& generated) {
  if (original.num_nodes() != generated.num_nodes())
    throw DimensionError("align_by_degree: node counts differ");
  auto ranked = [](const Graph& g) {
    const std::vector<int> d = degrees(g);
    std::vector<int> idx = all_nodes(g.num_nodes());
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] > d[b]; });
    return idx;
  };
  const std::vector<int> o = ranked(original);
  const std::vector<int> gen = ranked(generated);
  std::vector<int> gen_of_orig(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) gen_of_orig[o[i]] = gen[i];
  return gen_of_orig;
}

// What a model under test hands back to the probe: the generated graph and,
// optionally, soft pair scores in the generated graph's node labels.
struct ProbeSample {
  Graph graph;
  std::optional<Matrix> scores;
};

using ProbeGenerator = std::function<ProbeSample(const Graph& train, std::uint64_t seed)>;

struct ProbeResult {
  double accuracy_mean = 0.0;
  std::vector<double> accuracy_per_fold;
  std::vector<double> random_baseline_per_fold;  // h / #candidates

  double random_baseline_mean() const {
    if (random_baseline_per_fold.empty()) return 0.0;
    return std::accumulate(random_baseline_per_fold.begin(), random_baseline_per_fold.end(), 0.0) /
           static_cast<double>(random_baseline_per_fold.size());
  }
};

inline nlohmann::json to_json(const ProbeResult& r) {
  return {{"accuracy_mean", r.accuracy_mean},
          {"accuracy_per_fold", r.accuracy_per_fold},
          {"random_baseline_per_fold", r.random_baseline_per_fold},
          {"random_baseline_mean", r.random_baseline_mean()}};
}

struct FoldOutcome {
  double accuracy = 0.0;
  double baseline = 0.0;
};

// Scores every pair absent from the training graph through the alignment and
// predicts the top-h pairs, h = number of held-out edges. Ties are broken at
// random.
inline FoldOutcome score_fold(const Graph& original, const EdgeSplit& split,
                              const ProbeSample& sample, Rng& rng) {
  const std::vector<int> map = align_by_degree(original, sample.graph);
  const Matrix scores = sample.scores ? *sample.scores : sample.graph.adjacency_matrix();
  std::vector<Edge> candidates;
  for (const Edge& e : upper_pairs(original.num_nodes()))
    if (!split.train.has_edge(e.u, e.v)) candidates.push_back(e);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::vector<double> s(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    s[i] = scores(map[candidates[i].u], map[candidates[i].v]);
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

  const std::size_t h = split.heldout.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < h && i < order.size(); ++i) {
    const Edge& e = candidates[order[i]];
    if (std::binary_search(split.heldout.begin(), split.heldout.end(), e)) ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(h),
          static_cast<double>(h) / static_cast<double>(candidates.size())};
}

// The model only ever sees split.train.
inline ProbeResult link_privacy_probe(const Graph& original, const ProbeGenerator& generator,
                                      int k_folds, std::uint64_t seed,
                                      double train_fraction = 0.8) {
  if (original.num_edges() < 5) throw Error("link_privacy_probe: need at least 5 edges");
  if (k_folds < 1) throw Error("link_privacy_probe: need at least one fold");
  ProbeResult result;
  for (int fold = 0; fold < k_folds; ++fold) {
    const std::uint64_t fold_seed = mix_seed(seed, static_cast<std::uint64_t>(fold));
    Rng split_rng = make_rng(fold_seed, 0);
    const EdgeSplit split = split_edges(original, train_fraction, split_rng);
    const ProbeSample sample = generator(split.train, mix_seed(fold_seed, 1));
    Rng tie_rng = make_rng(fold_seed, 2);
    const FoldOutcome out = score_fold(original, split, sample, tie_rng);
    result.accuracy_per_fold.push_back(out.accuracy);
    result.random_baseline_per_fold.push_back(out.baseline);
  }
  result.accuracy_mean =
      std::accumulate(result.accuracy_per_fold.begin(), result.accuracy_per_fold.end(), 0.0) /
      k_folds;
  return result;
}

enum class ProbeScoring { kProbability, kIndicator };

// Trains a fresh model on the training graph with the fold's seed, then
// generates one graph on the same node count. Probability scoring ranks by
// the logits, which order pairs exactly like the probabilities.
inline ProbeGenerator model_probe_generator(ModelKind kind, TrainConfig cfg,
                                            Binarization mode = Binarization::top_m(),
                                            ProbeScoring scoring = ProbeScoring::kProbability) {
  return [kind, cfg, mode, scoring](const Graph& train_graph, std::uint64_t seed) {
    TrainConfig c = cfg;
    c.seed = seed;
    const Checkpoint ckpt = train(kind, train_graph, c).released_copy();
    Rng rng = make_rng(seed, 17);
    GeneratedGraph gen = sample_graph(ckpt, train_graph.num_nodes(), mode, rng);
    ProbeSample s{std::move(gen.graph), std::nullopt};
    if (scoring == ProbeScoring::kProbability) s.scores = std::move(gen.logits);
    return s;
  };
}

}  // namespace privgraph

#endif  // PRIVGRAPH_EVAL_HPP_
