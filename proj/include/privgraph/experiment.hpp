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

// Batch driver: for every (model, epsilon) setting and every graph of a
// dataset, train from scratch, generate, and compare against the original.
// Writes results.csv, per_graph.csv, summary.json and manifest.json.

#ifndef PRIVGRAPH_EXPERIMENT_HPP_
#define PRIVGRAPH_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "privgraph/eval.hpp"
#include "privgraph/generator.hpp"
#include "privgraph/io.hpp"
#include "privgraph/stats.hpp"
#include "privgraph/trainer.hpp"

namespace privgraph {

// FNV-1a over the canonical "key=value\n" rendering (keys sorted). Where the
// output goes and how many threads run it do not change the results, so
// output_dir and jobs are left out.
inline std::uint64_t config_hash(const KeyValueConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : cfg)
    if (k != "output_dir" && k != "jobs") feed(k + "=" + v + "\n");
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline double to_double(const KeyValueConfig& c, const std::string& key, double fallback) {
  auto it = c.find(key);
  if (it == c.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not a number: " + it->second);
  }
}

inline long long to_int(const KeyValueConfig& c, const std::string& key, long long fallback) {
  auto it = c.find(key);
  if (it == c.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
  }
}

inline bool to_bool(const KeyValueConfig& c, const std::string& key, bool fallback) {
  auto it = c.find(key);
  if (it == c.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ConfigError("config key '" + key + "' is not a boolean: " + it->second);
}

}  // namespace detail

// Keys shared by every command that trains a model.
inline const std::vector<std::string>& train_keys() {
  static const std::vector<std::string> keys{
      "seed",       "epochs",        "steps_per_epoch", "batch_nodes", "lr",
      "lr_encoder", "lr_generator",  "lr_discriminator", "momentum",   "lambda1",
      "lambda2",    "latent_dim",    "hidden_dim",      "self_loops",  "pos_weight",
      "dp_divisor", "delta",         "clip",            "clip_decay",  "clip_min",
      "c0",         "sigma",         "override_validity"};
  return keys;
}

inline void require_known_keys(const KeyValueConfig& raw, const std::vector<std::string>& extra) {
  for (const auto& [k, v] : raw) {
    const bool known = std::find(train_keys().begin(), train_keys().end(), k) != train_keys().end() ||
                       std::find(extra.begin(), extra.end(), k) != extra.end();
    if (!known) throw ConfigError("unknown config key '" + k + "'");
  }
}

// Overlays the training keys present in `raw` onto `t` and `dp`.
inline void apply_train_keys(const KeyValueConfig& raw, TrainConfig& t, DpConfig& dp) {
  using namespace detail;
  t.seed = static_cast<std::uint64_t>(to_int(raw, "seed", static_cast<long long>(t.seed)));
  t.epochs = static_cast<int>(to_int(raw, "epochs", t.epochs));
  t.steps_per_epoch = static_cast<int>(to_int(raw, "steps_per_epoch", t.steps_per_epoch));
  t.batch_nodes = static_cast<int>(to_int(raw, "batch_nodes", t.batch_nodes));
  if (raw.contains("lr")) {
    const double lr = to_double(raw, "lr", 0.0);
    t.lr_encoder = t.lr_generator = t.lr_discriminator = lr;
  }
  t.lr_encoder = to_double(raw, "lr_encoder", t.lr_encoder);
  t.lr_generator = to_double(raw, "lr_generator", t.lr_generator);
  t.lr_discriminator = to_double(raw, "lr_discriminator", t.lr_discriminator);
  t.momentum = to_double(raw, "momentum", t.momentum);
  t.lambda1 = to_double(raw, "lambda1", t.lambda1);
  t.lambda2 = to_double(raw, "lambda2", t.lambda2);
  t.latent_dim = static_cast<int>(to_int(raw, "latent_dim", t.latent_dim));
  t.hidden_dim = static_cast<int>(to_int(raw, "hidden_dim", t.hidden_dim));
  t.add_self_loops = to_bool(raw, "self_loops", t.add_self_loops);
  if (raw.contains("pos_weight")) t.pos_weight = to_double(raw, "pos_weight", 1.0);
  if (auto d = raw.find("dp_divisor"); d != raw.end()) {
    if (d->second != "batch" && d->second != "nodes")
      throw ConfigError("config: dp_divisor must be batch or nodes");
    t.dp_divisor = d->second == "nodes" ? DpDivisor::kNodes : DpDivisor::kBatch;
  }
  dp.delta = to_double(raw, "delta", dp.delta);
  dp.clip_c0 = to_double(raw, "clip", dp.clip_c0);
  dp.clip_decay = to_double(raw, "clip_decay", dp.clip_decay);
  dp.clip_min = to_double(raw, "clip_min", dp.clip_min);
  dp.c0 = to_double(raw, "c0", dp.c0);
  if (raw.contains("sigma")) dp.sigma = to_double(raw, "sigma", 0.0);
  dp.override_validity = to_bool(raw, "override_validity", dp.override_validity);
}

struct ExperimentConfig {
  KeyValueConfig raw;
  fs::path dataset;
  fs::path output_dir;
  std::vector<ModelKind> models{ModelKind::kGgan};
  std::vector<std::optional<double>> epsilons{std::nullopt};  // nullopt: no DP
  TrainConfig train;
  DpConfig dp;  // template; epsilon is filled per setting
  Binarization mode = Binarization::top_m();
  int samples_per_graph = 1;
  int jobs = 0;  // 0: available parallelism
  std::uint64_t seed = 0;
};

// Reads the flat key-value config. `dataset` is required; `output_dir` falls
// back to $PRIVGRAPH_OUT_DIR.
inline ExperimentConfig experiment_config_from(const KeyValueConfig& raw) {
  using namespace detail;
  require_known_keys(raw, {"dataset", "output_dir", "models", "epsilons", "mode", "samples", "jobs"});
  ExperimentConfig c;
  c.raw = raw;
  auto it = raw.find("dataset");
  if (it == raw.end() || it->second.empty()) throw ConfigError("config: 'dataset' is required");
  c.dataset = it->second;
  if (!fs::exists(c.dataset)) throw ConfigError("config: dataset not found: " + c.dataset.string());
  if (auto o = raw.find("output_dir"); o != raw.end()) {
    c.output_dir = o->second;
  } else if (const char* env = std::getenv("PRIVGRAPH_OUT_DIR")) {
    c.output_dir = env;
  } else {
    throw ConfigError("config: 'output_dir' is required (or set PRIVGRAPH_OUT_DIR)");
  }
  if (auto m = raw.find("models"); m != raw.end()) {
    c.models.clear();
    for (const auto& s : split_list(m->second)) c.models.push_back(parse_model_kind(s));
  }
  if (auto e = raw.find("epsilons"); e != raw.end()) {
    c.epsilons.clear();
    for (const auto& s : split_list(e->second)) {
      if (s == "none") {
        c.epsilons.push_back(std::nullopt);
      } else {
        c.epsilons.push_back(to_double({{"epsilons", s}}, "epsilons", 0.0));
      }
    }
  }
  if (c.models.empty() || c.epsilons.empty()) throw ConfigError("config: empty models/epsilons");
  apply_train_keys(raw, c.train, c.dp);
  c.seed = c.train.seed;
  if (auto m = raw.find("mode"); m != raw.end()) c.mode = parse_binarization(m->second);
  c.samples_per_graph = static_cast<int>(to_int(raw, "samples", 1));
  c.jobs = static_cast<int>(to_int(raw, "jobs", 0));
  if (c.samples_per_graph < 1) throw ConfigError("config: samples must be >= 1");
  return c;
}

struct GraphOutcome {
  bool ok = false;
  std::string error;
  StatsGap gap;
  Similarity similarity;
  double sigma = 0.0;
};

struct SettingResult {
  ModelKind model = ModelKind::kGgan;
  std::optional<double> epsilon;
  std::vector<GraphOutcome> per_graph;
  int failures() const {
    return static_cast<int>(std::count_if(per_graph.begin(), per_graph.end(),
                                          [](const GraphOutcome& o) { return !o.ok; }));
  }
  StatsGap mean_gap() const;
  Similarity mean_similarity() const;
};

inline StatsGap SettingResult::mean_gap() const {
  StatsGap m;
  int k = 0;
  for (const auto& o : per_graph) {
    if (!o.ok) continue;
    m.lcc += o.gap.lcc;
    m.tc += o.gap.tc;
    m.cpl += o.gap.cpl;
    m.gini += o.gap.gini;
    m.rede += o.gap.rede;
    ++k;
  }
  if (k > 0) {
    m.lcc /= k;
    m.tc /= k;
    m.cpl /= k;
    m.gini /= k;
    m.rede /= k;
  }
  return m;
}

inline Similarity SettingResult::mean_similarity() const {
  Similarity s;
  int k = 0;
  for (const auto& o : per_graph) {
    if (!o.ok) continue;
    s.degree_cos += o.similarity.degree_cos;
    s.motif_cos += o.similarity.motif_cos;
    ++k;
  }
  if (k > 0) {
    s.degree_cos /= k;
    s.motif_cos /= k;
  }
  return s;
}

// Runs `count` independent tasks on a bounded pool. Each task writes only its
// own result slot, so output order never depends on scheduling.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& task) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, std::max(count, 1));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) task(i);
  };
  if (jobs == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Train on `g`, generate `samples` graphs, and compare with `g`.
inline GraphOutcome evaluate_on_graph(const Graph& g, ModelKind model, const TrainConfig& cfg,
                                      const Binarization& mode, int samples) {
  GraphOutcome out;
  try {
    const Checkpoint ckpt = train(model, g, cfg).released_copy();
    Rng rng = make_rng(cfg.seed, 99);
    const std::vector<Graph> gen = sample_many(ckpt, g.num_nodes(), samples, mode, rng);
    const GraphStatsReport orig = compute_stats(g);
    std::vector<GraphStatsReport> reports;
    for (const Graph& x : gen) reports.push_back(compute_stats(x));
    out.gap = stats_gap(orig, reports);
    out.similarity = similarity_scores(orig, reports);
    out.sigma = ckpt.privacy.sigma_used;
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

inline std::string epsilon_label(const std::optional<double>& eps) {
  return eps ? format_double(*eps) : std::string("none");
}

struct ExperimentOutcome {
  std::vector<SettingResult> settings;
  std::vector<std::uint64_t> sub_seeds;
  int failures = 0;
  std::string results_csv;
  std::string per_graph_csv;
  std::string summary_json;
};

inline std::string iso_time_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  const std::string started = iso_time_now();
  const Dataset ds = load_multigraph_dataset(cfg.dataset);
  const int num_graphs = static_cast<int>(ds.graphs.size());

  ExperimentOutcome outcome;
  for (int i = 0; i < num_graphs; ++i) outcome.sub_seeds.push_back(mix_seed(cfg.seed, i));
  for (ModelKind m : cfg.models)
    for (const auto& eps : cfg.epsilons) outcome.settings.push_back({m, eps, {}});
  for (auto& s : outcome.settings) s.per_graph.resize(num_graphs);

  const int total = static_cast<int>(outcome.settings.size()) * num_graphs;
  parallel_for(total, cfg.jobs, [&](int task) {
    SettingResult& setting = outcome.settings[task / num_graphs];
    const int gi = task % num_graphs;
    TrainConfig t = cfg.train;
    t.seed = outcome.sub_seeds[gi];
    if (setting.epsilon) {
      t.dp = cfg.dp;
      t.dp->epsilon = *setting.epsilon;
    }
    setting.per_graph[gi] =
        evaluate_on_graph(ds.graphs[gi], setting.model, t, cfg.mode, cfg.samples_per_graph);
  });

  // Table-style CSV: one original row plus one row per (model, epsilon).
  std::ostringstream csv;
  csv << "model,epsilon,graphs,failed,LCC,TC,CPL,GINI,REDE,degree_cos,motif_cos\n";
  {
    double lcc = 0, tc = 0, cpl = 0, gini = 0, rd = 0;
    for (const Graph& g : ds.graphs) {
      const GraphStatsReport r = compute_stats(g);
      lcc += r.lcc;
      tc += static_cast<double>(r.tc);
      cpl += r.cpl;
      gini += r.gini;
      rd += r.rede;
    }
    const double k = num_graphs;
    csv << "original,-," << num_graphs << ",0," << format_double(lcc / k) << ','
        << format_double(tc / k) << ',' << format_double(cpl / k) << ','
        << format_double(gini / k) << ',' << format_double(rd / k) << ",,\n";
  }
  std::ostringstream per;
  per << "model,epsilon,graph,seed,status,sigma,LCC,TC,CPL,GINI,REDE,degree_cos,motif_cos,error\n";
  nlohmann::json results = nlohmann::json::array();
  for (const auto& s : outcome.settings) {
    const StatsGap g = s.mean_gap();
    const Similarity sim = s.mean_similarity();
    const int failed = s.failures();
    outcome.failures += failed;
    csv << to_string(s.model) << ',' << epsilon_label(s.epsilon) << ',' << num_graphs << ','
        << failed << ',' << format_double(g.lcc) << ',' << format_double(g.tc) << ','
        << format_double(g.cpl) << ',' << format_double(g.gini) << ',' << format_double(g.rede)
        << ',' << format_double(sim.degree_cos) << ',' << format_double(sim.motif_cos) << '\n';
    nlohmann::json row = to_json(g);
    row["model"] = to_string(s.model);
    row["epsilon"] = epsilon_label(s.epsilon);
    row["failed"] = failed;
    row["degree_cos"] = sim.degree_cos;
    row["motif_cos"] = sim.motif_cos;
    results.push_back(row);
    for (int i = 0; i < num_graphs; ++i) {
      const GraphOutcome& o = s.per_graph[i];
      per << to_string(s.model) << ',' << epsilon_label(s.epsilon) << ',' << i << ','
          << outcome.sub_seeds[i] << ',' << (o.ok ? "ok" : "failed") << ','
          << format_double(o.sigma) << ',' << format_double(o.gap.lcc) << ','
          << format_double(o.gap.tc) << ',' << format_double(o.gap.cpl) << ','
          << format_double(o.gap.gini) << ',' << format_double(o.gap.rede) << ','
          << format_double(o.similarity.degree_cos) << ','
          << format_double(o.similarity.motif_cos) << ',';
      std::string err = o.error;
      std::replace(err.begin(), err.end(), ',', ';');
      std::replace(err.begin(), err.end(), '\n', ' ');
      per << err << '\n';
    }
  }
  outcome.results_csv = csv.str();
  outcome.per_graph_csv = per.str();
  const std::string hash = hex64(config_hash(cfg.raw));
  outcome.summary_json =
      nlohmann::json{{"config_hash", hash},
                     {"dataset", ds.name},
                     {"num_graphs", num_graphs},
                     {"failures", outcome.failures},
                     {"results", results}}
          .dump(2) +
      "\n";

  fs::create_directories(cfg.output_dir);
  write_text(cfg.output_dir / "results.csv", outcome.results_csv);
  write_text(cfg.output_dir / "per_graph.csv", outcome.per_graph_csv);
  write_text(cfg.output_dir / "summary.json", outcome.summary_json);
  nlohmann::json manifest{{"global_seed", cfg.seed},
                          {"config_hash", hash},
                          {"config", cfg.raw},
                          {"tool_version", kVersion},
                          {"sub_seeds", outcome.sub_seeds},
                          {"started_at", started},
                          {"finished_at", iso_time_now()}};
  write_text(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");
  return outcome;
}

inline ExperimentOutcome run_experiment(const fs::path& config_file) {
  return run_experiment(experiment_config_from(load_key_value(config_file)));
}

// True when the stored hash matches the stored config.
inline bool verify_manifest(const nlohmann::json& manifest) {
  const auto cfg = manifest.at("config").get<KeyValueConfig>();
  return hex64(config_hash(cfg)) == manifest.at("config_hash").get<std::string>();
}

}  // namespace privgraph

#endif  // PRIVGRAPH_EXPERIMENT_HPP_
