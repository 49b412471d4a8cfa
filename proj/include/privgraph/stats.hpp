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

// Global-structure statistics used to compare original and generated graphs.

#ifndef PRIVGRAPH_STATS_HPP_
#define PRIVGRAPH_STATS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "privgraph/graph.hpp"
#include "privgraph/motifs.hpp"

namespace privgraph {

inline constexpr int kDegreeBins = 50;

using DegreeHistogram = std::array<double, kDegreeBins>;

inline int lcc_size(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<char> seen(n, 0);
  int best = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    int size = 0;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      ++size;
      for (int v = 0; v < n; ++v)
        if (!seen[v] && g.has_edge(u, v)) {
          seen[v] = 1;
          q.push(v);
        }
    }
    best = std::max(best, size);
  }
  return best;
}

// trace(A^3) / 6.
inline std::int64_t triangle_count(const Graph& g) {
  const int n = g.num_nodes();
  std::int64_t trace = 0;
  std::vector<std::int64_t> a2_row(n);
  for (int i = 0; i < n; ++i) {
    std::fill(a2_row.begin(), a2_row.end(), 0);
    for (int k = 0; k < n; ++k) {
      if (!g.has_edge(i, k)) continue;
      for (int j = 0; j < n; ++j) a2_row[j] += g.has_edge(k, j) ? 1 : 0;
    }
    for (int j = 0; j < n; ++j)
      if (g.has_edge(j, i)) trace += a2_row[j];
  }
  return trace / 6;
}

// Mean hop distance over unordered pairs that are connected; pairs in
// different components are skipped. 0 when no pair is connected.
inline double char_path_length(const Graph& g) {
  const int n = g.num_nodes();
  std::int64_t total = 0;
  std::int64_t pairs = 0;
  std::vector<int> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v)
        if (dist[v] < 0 && g.has_edge(u, v)) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    for (int t = s + 1; t < n; ++t)
      if (dist[t] > 0) {
        total += dist[t];
        ++pairs;
      }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(pairs);
}

// G = sum_i sum_j |d_i - d_j| / (2 n sum_k d_k), computed from the sorted
// sequence in O(n log n). An all-zero sequence gives 0.
inline double gini_index(const Graph& g) {
  std::vector<int> d = degrees(g);
  const auto n = static_cast<double>(d.size());
  std::sort(d.begin(), d.end());
  double sum = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    sum += d[i];
    // d[i] is larger than i predecessors and smaller than n-1-i successors.
    weighted += d[i] * (2.0 * static_cast<double>(i) - (n - 1.0));
  }
  if (sum == 0.0) return 0.0;
  // weighted == sum_{i<j} (d_j - d_i); the ordered double sum is twice that.
  return (2.0 * weighted) / (2.0 * n * sum);
}

// Entropy of the degree shares d_i / 2M, normalized by ln n.
inline double rede(const Graph& g) {
  const int n = g.num_nodes();
  const std::vector<int> d = degrees(g);
  const double two_m = 2.0 * g.num_edges();
  if (g.num_edges() == 0 || n < 2) return 0.0;
  double h = 0.0;
  for (int di : d) {
    if (di == 0) continue;
    const double p = di / two_m;
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(n));
}

// Bin index for a node degree: degrees 1..49 map to bins 0..48, degree >= 50
// to the overflow bin 49. Degree 0 is merged into the degree-1 bin.
inline int degree_bin(int degree) {
  if (degree <= 1) return 0;
  if (degree >= kDegreeBins) return kDegreeBins - 1;
  return degree - 1;
}

inline DegreeHistogram degree_hist_50(const Graph& g) {
  DegreeHistogram h{};
  for (int d : degrees(g)) h[degree_bin(d)] += 1.0;
  return h;
}

inline double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("cosine_sim: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline std::vector<double> to_doubles(const MotifVector& m) {
  return {m.begin(), m.end()};
}

struct GraphStatsReport {
  int n = 0;
  int m = 0;
  int lcc = 0;
  std::int64_t tc = 0;
  double cpl = 0.0;
  double gini = 0.0;
  double rede = 0.0;
  DegreeHistogram degree_hist{};
  MotifVector motif_vec{};

  friend bool operator==(const GraphStatsReport&, const GraphStatsReport&) = default;
};

inline GraphStatsReport compute_stats(const Graph& g) {
  GraphStatsReport r;
  r.n = g.num_nodes();
  r.m = g.num_edges();
  r.lcc = lcc_size(g);
  r.tc = triangle_count(g);
  r.cpl = char_path_length(g);
  r.gini = gini_index(g);
  r.rede = privgraph::rede(g);
  r.degree_hist = degree_hist_50(g);
  r.motif_vec = motif_census(g);
  return r;
}

inline nlohmann::json to_json(const GraphStatsReport& r) {
  return nlohmann::json{{"n", r.n},         {"m", r.m},
                        {"lcc", r.lcc},     {"tc", r.tc},
                        {"cpl", r.cpl},     {"gini", r.gini},
                        {"rede", r.rede},   {"degree_hist", r.degree_hist},
                        {"motif_vec", r.motif_vec}};
}

inline std::string stats_csv_header() {
  std::string out = "n,m,LCC,TC,CPL,GINI,REDE";
  for (int i = 0; i < kDegreeBins; ++i) out += ",deg" + std::to_string(i + 1);
  for (int i = 0; i < kNumMotifClasses; ++i) out += ",motif" + std::to_string(i);
  return out;
}

inline std::string to_csv_row(const GraphStatsReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.n << ',' << r.m << ',' << r.lcc << ',' << r.tc << ',' << r.cpl << ','
     << r.gini << ',' << r.rede;
  for (double h : r.degree_hist) os << ',' << h;
  for (auto c : r.motif_vec) os << ',' << c;
  return os.str();
}

}  // namespace privgraph

#endif  // PRIVGRAPH_STATS_HPP_
