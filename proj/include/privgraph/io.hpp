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

// Graph and dataset ingestion.
//
// Edge-list format: first non-blank line `n <node_count>`, then one `<u> <v>`
// pair per line with 0-based indices. Blank lines and `#` comments are
// skipped; duplicate and reversed edges collapse; self-loops are rejected.
//
// Multi-graph datasets are either a directory of edge-list files (sorted by
// filename) or an indicator pair: `<NAME>_A.txt` (1-based global edges,
// `u, v` or `u v`) plus `<NAME>_graph_indicator.txt` (line i = graph id of
// node i).

#ifndef PRIVGRAPH_IO_HPP_
#define PRIVGRAPH_IO_HPP_

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "privgraph/graph.hpp"

namespace privgraph {

namespace fs = std::filesystem;

namespace detail {

inline std::string strip_comment(std::string line) {
  if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
  for (char& c : line)
    if (c == ',' || c == '\t' || c == '\r') c = ' ';
  return line;
}

inline bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Parses exactly `count` integers from the line, nothing else.
inline std::optional<std::vector<long long>> parse_ints(const std::string& s, int count) {
  std::istringstream is(s);
  std::vector<long long> out(count);
  for (auto& x : out)
    if (!(is >> x)) return std::nullopt;
  std::string rest;
  if (is >> rest) return std::nullopt;
  return out;
}

}  // namespace detail

inline Graph parse_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<Graph> g;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::strip_comment(line);
    if (detail::is_blank(body)) continue;
    if (!g) {
      std::istringstream is(body);
      std::string tag;
      long long n = -1;
      std::string rest;
      if (!(is >> tag >> n) || tag != "n" || (is >> rest))
        throw ParseError("expected header 'n <node_count>'", line_no);
      if (n < 1 || n > 1'000'000) throw ParseError("node count out of range", line_no);
      g.emplace(static_cast<int>(n));
      continue;
    }
    const auto uv = detail::parse_ints(body, 2);
    if (!uv) throw ParseError("malformed edge line '" + line + "'", line_no);
    const long long u = (*uv)[0], v = (*uv)[1];
    if (u < 0 || v < 0 || u >= g->num_nodes() || v >= g->num_nodes())
      throw ParseError("node index out of range", line_no);
    if (u == v) throw ParseError("self-loop " + std::to_string(u) + " " + std::to_string(v), line_no);
    g->add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  if (!g) throw ParseError("missing header 'n <node_count>'", line_no);
  return *g;
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream is(text);
  return parse_edge_list(is);
}

inline Graph load_edge_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_edge_list(in);
  } catch (const ParseError& e) {
    throw e.prefixed(path.string());
  }
}

// Canonical form: header, then edges with u < v in lexicographic order.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream os;
  write_edge_list(g, os);
  return os.str();
}

inline void save_edge_list(const Graph& g, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_edge_list(g, out);
}

struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  std::string source_format;  // "edge_list_dir", "indicator", "edge_list"
};

inline Dataset parse_indicator_dataset(std::istream& edges_in, std::istream& indicator_in,
                                       std::string name) {
  std::vector<long long> graph_of;  // 0-based node -> graph id
  std::string line;
  int line_no = 0;
  while (std::getline(indicator_in, line)) {
    ++line_no;
    const std::string body = detail::strip_comment(line);
    if (detail::is_blank(body)) continue;
    const auto v = detail::parse_ints(body, 1);
    if (!v || (*v)[0] < 1) throw ParseError("bad graph id in indicator file", line_no);
    graph_of.push_back((*v)[0]);
  }
  if (graph_of.empty()) throw ParseError("empty graph indicator file", 0);

  std::map<long long, std::vector<int>> members;  // graph id -> global nodes
  for (int i = 0; i < static_cast<int>(graph_of.size()); ++i) members[graph_of[i]].push_back(i);
  std::map<long long, int> graph_index;
  std::vector<int> local(graph_of.size());
  Dataset ds{std::move(name), {}, "indicator"};
  for (const auto& [id, nodes] : members) {
    graph_index[id] = static_cast<int>(ds.graphs.size());
    for (int k = 0; k < static_cast<int>(nodes.size()); ++k) local[nodes[k]] = k;
    ds.graphs.emplace_back(static_cast<int>(nodes.size()));
  }

  line_no = 0;
  while (std::getline(edges_in, line)) {
    ++line_no;
    const std::string body = detail::strip_comment(line);
    if (detail::is_blank(body)) continue;
    const auto uv = detail::parse_ints(body, 2);
    if (!uv) throw ParseError("malformed edge line '" + line + "'", line_no);
    const long long u = (*uv)[0] - 1, v = (*uv)[1] - 1;
    const auto count = static_cast<long long>(graph_of.size());
    if (u < 0 || v < 0 || u >= count || v >= count)
      throw ParseError("edge references node beyond the indicator file's " +
                           std::to_string(count) + " nodes",
                       line_no);
    if (u == v) throw ParseError("self-loop on node " + std::to_string(u + 1), line_no);
    if (graph_of[u] != graph_of[v])
      throw ParseError("edge crosses graphs " + std::to_string(graph_of[u]) + " and " +
                           std::to_string(graph_of[v]),
                       line_no);
    ds.graphs[graph_index[graph_of[u]]].add_edge(local[u], local[v]);
  }
  return ds;
}

inline Dataset load_multigraph_dataset(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("dataset path does not exist: " + path.string());
  if (fs::is_regular_file(path)) {
    return {path.stem().string(), {load_edge_list(path)}, "edge_list"};
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const auto& f : files) {
    const std::string fname = f.filename().string();
    const std::string suffix = "_graph_indicator.txt";
    if (fname.size() > suffix.size() &&
        fname.compare(fname.size() - suffix.size(), suffix.size(), suffix) == 0) {
      const std::string prefix = fname.substr(0, fname.size() - suffix.size());
      const fs::path edges = path / (prefix + "_A.txt");
      std::ifstream ein(edges), iin(f);
      if (!ein) throw Error("indicator dataset is missing " + edges.string());
      return parse_indicator_dataset(ein, iin, prefix);
    }
  }
  Dataset ds{path.filename().string(), {}, "edge_list_dir"};
  for (const auto& f : files) {
    if (f.filename().string().starts_with('.')) continue;
    ds.graphs.push_back(load_edge_list(f));
  }
  if (ds.graphs.empty()) throw ConfigError("no graphs found in " + path.string());
  return ds;
}

// Flat `key = value` text with `#` comments.
using KeyValueConfig = std::map<std::string, std::string>;

inline KeyValueConfig parse_key_value(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    cfg[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

inline KeyValueConfig load_key_value(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_key_value(in);
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

inline nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace privgraph

#endif  // PRIVGRAPH_IO_HPP_
