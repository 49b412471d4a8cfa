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


// Command-line front end: train, generate, stats, probe, calibrate, run.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "privgraph.hpp"

namespace fs = std::filesystem;
using namespace privgraph;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

fs::path default_out_dir() {
  if (const char* env = std::getenv("PRIVGRAPH_OUT_DIR"); env && *env) return env;
  return ".";
}

// Flag values land in a key-value map so that they overlay config files.
using Overrides = std::map<std::string, std::string>;

void kv_option(CLI::App* app, const std::string& flag, const std::string& key, Overrides& out,
               const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&out, key](const std::string& v) { out[key] = v; }, help);
}

void kv_flag(CLI::App* app, const std::string& flag, const std::string& key, Overrides& out,
             const std::string& help) {
  app->add_flag_callback(flag, [&out, key] { out[key] = "true"; }, help);
}

void add_train_options(CLI::App* app, Overrides& kv) {
  kv_option(app, "--epochs", "epochs", kv, "Training epochs");
  kv_option(app, "--steps-per-epoch", "steps_per_epoch", kv, "Optimizer steps per epoch");
  kv_option(app, "--batch-nodes", "batch_nodes", kv, "Nodes sampled per step (0: min(N, 32))");
  kv_option(app, "--lr", "lr", kv, "Learning rate for all three parts");
  kv_option(app, "--lr-encoder", "lr_encoder", kv, "Encoder learning rate");
  kv_option(app, "--lr-generator", "lr_generator", kv, "Decoder/generator learning rate");
  kv_option(app, "--lr-discriminator", "lr_discriminator", kv, "Discriminator learning rate");
  kv_option(app, "--momentum", "momentum", kv, "Encoder/discriminator momentum");
  kv_option(app, "--lambda1", "lambda1", kv, "Prior loss weight");
  kv_option(app, "--lambda2", "lambda2", kv, "GAN loss weight");
  kv_option(app, "--latent-dim", "latent_dim", kv, "Latent dimension");
  kv_option(app, "--hidden-dim", "hidden_dim", kv, "Hidden dimension");
  kv_flag(app, "--self-loops", "self_loops", kv, "Add self-loops before normalizing");
  kv_option(app, "--pos-weight", "pos_weight", kv, "BCE positive weight (default: non-edges/edges)");
  kv_option(app, "--dp-divisor", "dp_divisor", kv, "DP gradient divisor: batch or nodes");
  kv_option(app, "--delta", "delta", kv, "Privacy delta");
  kv_option(app, "--clip", "clip", kv, "Initial clipping norm C");
  kv_option(app, "--clip-decay", "clip_decay", kv, "Per-epoch clipping decay");
  kv_option(app, "--clip-min", "clip_min", kv, "Clipping norm floor");
  kv_option(app, "--c0", "c0", kv, "Calibration constant c0 in (0, 1)");
  kv_option(app, "--sigma", "sigma", kv, "Noise multiplier (default: calibrated)");
  kv_flag(app, "--override-validity", "override_validity", kv,
          "Train even if the epsilon precondition fails");
}

struct TrainSetup {
  TrainConfig cfg;
  DpConfig dp;
  bool use_dp = false;
  std::optional<double> epsilon;
  std::optional<std::string> config_file;
};

void add_dp_switch(CLI::App* app, TrainSetup& s) {
  app->add_flag("--dp", s.use_dp, "Train the decoder with DP-SGD");
  app->add_option("--epsilon", s.epsilon, "Privacy budget epsilon (with --dp)");
  app->add_option("--config", s.config_file, "Key-value config file; flags take precedence");
}

TrainConfig resolve_train(TrainSetup& s, const Overrides& kv) {
  KeyValueConfig merged;
  if (s.config_file) merged = load_key_value(*s.config_file);
  require_known_keys(merged, {"epsilon", "dp"});
  for (const auto& [k, v] : kv) merged[k] = v;
  if (auto e = merged.find("epsilon"); e != merged.end() && !s.epsilon)
    s.epsilon = detail::to_double(merged, "epsilon", 1.0);
  if (detail::to_bool(merged, "dp", false)) s.use_dp = true;
  merged.erase("epsilon");
  merged.erase("dp");
  apply_train_keys(merged, s.cfg, s.dp);
  if (s.epsilon && !s.use_dp) throw ConfigError("--epsilon requires --dp");
  if (s.use_dp) {
    s.dp.epsilon = s.epsilon.value_or(s.dp.epsilon);
    s.cfg.dp = s.dp;
  }
  return s.cfg;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

fs::path privacy_path_for(const fs::path& ckpt) {
  fs::path p = ckpt;
  std::string stem = p.filename().string();
  if (stem.size() > 5 && stem.ends_with(".json")) stem.resize(stem.size() - 5);
  return p.replace_filename(stem + ".privacy.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privgraph: differentially private graph generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  std::optional<std::uint64_t> global_seed;
  app.add_option("--seed", global_seed, "Global seed; every random stream derives from it");

  // train
  Overrides train_kv;
  TrainSetup train_setup;
  std::string train_model, train_input;
  std::optional<std::string> train_out;
  bool train_full = false;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model on one graph");
  train_cmd->add_option("--model", train_model, "gvae or ggan")->required();
  train_cmd->add_option("--input", train_input, "Edge-list file")->required();
  train_cmd->add_option("--out", train_out, "Checkpoint path");
  train_cmd->add_flag("--full", train_full, "Keep encoder/discriminator (not releasable)");
  add_dp_switch(train_cmd, train_setup);
  add_train_options(train_cmd, train_kv);

  // generate
  std::string gen_ckpt, gen_mode = "topm";
  int gen_count = 1;
  std::optional<int> gen_m, gen_n;
  std::optional<std::string> gen_out;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Sample graphs from a checkpoint");
  gen_cmd->add_option("--ckpt", gen_ckpt, "Checkpoint file")->required();
  gen_cmd->add_option("--count", gen_count, "Number of graphs")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--mode", gen_mode, "bernoulli, threshold or topm")
      ->check(CLI::IsMember({"bernoulli", "threshold", "topm"}));
  gen_cmd->add_option("--m", gen_m, "Edge count for topm (default: training edge count)");
  gen_cmd->add_option("--n", gen_n, "Node count (default: training node count)");
  gen_cmd->add_option("--out-dir", gen_out, "Output directory");

  // stats
  std::string stats_input;
  std::optional<std::string> stats_generated;
  std::string stats_format = "csv";
  CLI::App* stats_cmd = app.add_subcommand("stats", "Graph statistics and gaps");
  stats_cmd->add_option("--input", stats_input, "Edge-list file")->required();
  stats_cmd->add_option("--generated", stats_generated, "Directory of generated edge lists");
  stats_cmd->add_option("--format", stats_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // probe
  Overrides probe_kv;
  TrainSetup probe_setup;
  std::string probe_input, probe_model = "ggan", probe_mode = "topm",
                           probe_scoring = "probability";
  int probe_folds = 5;
  double probe_frac = 0.8;
  std::optional<std::string> probe_out;
  CLI::App* probe_cmd = app.add_subcommand("probe", "Held-out link recovery probe");
  probe_cmd->add_option("--input", probe_input, "Edge-list file")->required();
  probe_cmd->add_option("--model", probe_model, "gvae or ggan");
  probe_cmd->add_option("--folds", probe_folds, "Number of folds")->check(CLI::PositiveNumber);
  probe_cmd->add_option("--train-fraction", probe_frac, "Fraction of edges kept for training");
  probe_cmd->add_option("--mode", probe_mode, "Binarization of the generated graph")
      ->check(CLI::IsMember({"bernoulli", "threshold", "topm"}));
  probe_cmd->add_option("--scoring", probe_scoring, "probability or indicator")
      ->check(CLI::IsMember({"probability", "indicator"}));
  probe_cmd->add_option("--out", probe_out, "Also write the JSON result here");
  add_dp_switch(probe_cmd, probe_setup);
  add_train_options(probe_cmd, probe_kv);

  // calibrate
  DpConfig cal_cfg;
  std::optional<int> cal_nodes, cal_batch, cal_epochs, cal_steps_per_epoch;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "Print sigma and validity for a DP config");
  cal_cmd->add_option("--epsilon", cal_cfg.epsilon, "Privacy budget");
  cal_cmd->add_option("--delta", cal_cfg.delta, "Failure probability");
  cal_cmd->add_option("--c0", cal_cfg.c0, "Calibration constant in (0, 1)");
  cal_cmd->add_option("--q", cal_cfg.q, "Sampling rate B/N");
  cal_cmd->add_option("--steps", cal_cfg.t_max, "Total steps T");
  cal_cmd->add_option("--nodes", cal_nodes, "Derive q from --batch/--nodes");
  cal_cmd->add_option("--batch", cal_batch, "Nodes per step");
  cal_cmd->add_option("--epochs", cal_epochs, "Derive T from --epochs x --steps-per-epoch");
  cal_cmd->add_option("--steps-per-epoch", cal_steps_per_epoch, "Steps per epoch");

  // run
  std::string run_config;
  std::optional<std::string> run_out;
  std::optional<int> run_jobs;
  CLI::App* run_cmd = app.add_subcommand("run", "Batch experiment over a dataset");
  run_cmd->add_option("--config", run_config, "Key-value experiment config")->required();
  run_cmd->add_option("--out-dir", run_out, "Output directory (overrides the config)");
  run_cmd->add_option("--jobs", run_jobs, "Worker threads (default: available parallelism)");

  // motifs
  CLI::App* motif_cmd = app.add_subcommand("motifs", "Print the motif class table");

  // synth
  CorpusSpec synth_spec;
  std::optional<std::string> synth_out;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a planted-partition corpus");
  synth_cmd->add_option("--graphs", synth_spec.graphs, "Number of graphs")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--nodes", synth_spec.nodes, "Nodes per graph")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--blocks", synth_spec.blocks, "Communities per graph")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--p-in", synth_spec.p_in, "Within-community edge probability");
  synth_cmd->add_option("--p-out", synth_spec.p_out, "Cross-community edge probability");
  synth_cmd->add_option("--out-dir", synth_out, "Output directory");

  CLI11_PARSE(app, argc, argv);
  const std::uint64_t seed = global_seed.value_or(0);

  try {
    if (*train_cmd) {
      if (global_seed) train_kv["seed"] = std::to_string(seed);
      const TrainConfig cfg = resolve_train(train_setup, train_kv);
      const Graph g = load_edge_list(train_input);
      const ModelKind kind = parse_model_kind(train_model);
      Checkpoint ckpt = train(kind, g, cfg);
      if (!train_full) ckpt = ckpt.released_copy();
      const fs::path out = train_out ? fs::path(*train_out)
                                     : default_out_dir() / (fs::path(train_input).stem().string() +
                                                            "." + to_string(kind) + ".ckpt.json");
      write_text(out, to_json(ckpt).dump(2) + "\n");
      const fs::path report = privacy_path_for(out);
      write_text(report, to_json(ckpt.privacy).dump(2) + "\n");
      const LossRecord& last = ckpt.loss_trace.empty() ? LossRecord{} : ckpt.loss_trace.back();
      std::cout << "checkpoint " << out.string() << (ckpt.released ? " (released)" : " (full)")
                << "\nprivacy report " << report.string() << "\nfinal rec loss " << last.rec
                << "\n";
      if (ckpt.privacy.enabled)
        std::cout << "sigma " << ckpt.privacy.sigma_used << ", steps " << ckpt.privacy.steps_taken
                  << (ckpt.privacy.validity ? "" : " (validity overridden)") << "\n";
      return 0;
    }

    if (*gen_cmd) {
      const Checkpoint ckpt = checkpoint_from_json(read_json(gen_ckpt));
      Binarization mode = parse_binarization(gen_mode);
      if (gen_m) mode.m = *gen_m;
      const int n = gen_n.value_or(ckpt.num_nodes);
      Rng rng = make_rng(seed, 0);
      const std::vector<Graph> graphs = sample_many(ckpt, n, gen_count, mode, rng);
      const fs::path dir = gen_out ? fs::path(*gen_out) : default_out_dir();
      fs::create_directories(dir);
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        std::ostringstream name;
        name << "graph_" << std::setw(4) << std::setfill('0') << i << ".txt";
        save_edge_list(graphs[i], dir / name.str());
        std::cout << (dir / name.str()).string() << '\n';
      }
      return 0;
    }

    if (*stats_cmd) {
      const Graph g = load_edge_list(stats_input);
      const GraphStatsReport orig = compute_stats(g);
      if (!stats_generated) {
        if (stats_format == "json") {
          print_json(to_json(orig));
        } else {
          std::cout << stats_csv_header() << '\n' << to_csv_row(orig) << '\n';
        }
        return 0;
      }
      const Dataset gen = load_multigraph_dataset(*stats_generated);
      std::vector<GraphStatsReport> reports;
      for (const Graph& x : gen.graphs) reports.push_back(compute_stats(x));
      const StatsGap gap = stats_gap(orig, reports);
      const Similarity sim = similarity_scores(orig, reports);
      if (stats_format == "json") {
        nlohmann::json j = to_json(gap);
        j["degree_cos"] = sim.degree_cos;
        j["motif_cos"] = sim.motif_cos;
        j["generated"] = reports.size();
        print_json(j);
        return 0;
      }
      auto row = [](const std::string& label, double lcc, double tc, double cpl, double gini,
                    double rd, const std::string& tail) {
        std::cout << label << ',' << format_double(lcc) << ',' << format_double(tc) << ','
                  << format_double(cpl) << ',' << format_double(gini) << ',' << format_double(rd)
                  << ',' << tail << '\n';
      };
      std::cout << "graph,LCC,TC,CPL,GINI,REDE,degree_cos,motif_cos\n";
      row("original", orig.lcc, static_cast<double>(orig.tc), orig.cpl, orig.gini, orig.rede, "1,1");
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const GraphStatsReport& r = reports[i];
        const Similarity s = similarity_scores(orig, std::span(&r, 1));
        row("generated_" + std::to_string(i), r.lcc, static_cast<double>(r.tc), r.cpl, r.gini,
            r.rede, format_double(s.degree_cos) + "," + format_double(s.motif_cos));
      }
      row("mean_abs_gap", gap.lcc, gap.tc, gap.cpl, gap.gini, gap.rede,
          format_double(sim.degree_cos) + "," + format_double(sim.motif_cos));
      return 0;
    }

    if (*probe_cmd) {
      if (global_seed) probe_kv["seed"] = std::to_string(seed);
      const TrainConfig cfg = resolve_train(probe_setup, probe_kv);
      const Graph g = load_edge_list(probe_input);
      const ProbeScoring scoring =
          probe_scoring == "indicator" ? ProbeScoring::kIndicator : ProbeScoring::kProbability;
      const ProbeGenerator gen = model_probe_generator(parse_model_kind(probe_model), cfg,
                                                       parse_binarization(probe_mode), scoring);
      const ProbeResult r = link_privacy_probe(g, gen, probe_folds, cfg.seed, probe_frac);
      nlohmann::json j = to_json(r);
      j["model"] = probe_model;
      j["epsilon"] = cfg.dp ? nlohmann::json(cfg.dp->epsilon) : nlohmann::json(nullptr);
      j["folds"] = probe_folds;
      if (probe_out) write_text(*probe_out, j.dump(2) + "\n");
      print_json(j);
      return 0;
    }

    if (*cal_cmd) {
      if (cal_nodes || cal_batch) {
        if (!cal_nodes || !cal_batch) throw ConfigError("calibrate: --nodes and --batch go together");
        cal_cfg.q = static_cast<double>(*cal_batch) / *cal_nodes;
      }
      if (cal_epochs) cal_cfg.t_max = *cal_epochs * cal_steps_per_epoch.value_or(1);
      const Calibration c = calibrate_sigma(cal_cfg);
      nlohmann::json j = to_json(c);
      j["epsilon"] = cal_cfg.epsilon;
      j["delta"] = cal_cfg.delta;
      j["q"] = cal_cfg.q;
      j["t_max"] = cal_cfg.t_max;
      j["c0"] = cal_cfg.c0;
      print_json(j);
      return 0;
    }

    if (*run_cmd) {
      KeyValueConfig raw = load_key_value(run_config);
      if (run_out) raw["output_dir"] = *run_out;
      if (run_jobs) raw["jobs"] = std::to_string(*run_jobs);
      if (global_seed) raw["seed"] = std::to_string(seed);
      const ExperimentConfig cfg = experiment_config_from(raw);
      const ExperimentOutcome out = run_experiment(cfg);
      std::cout << out.results_csv << "wrote " << cfg.output_dir.string() << '\n';
      if (out.failures > 0) {
        std::cerr << out.failures << " graph run(s) failed; see per_graph.csv\n";
        return kExitPartial;
      }
      return 0;
    }

    if (*motif_cmd) {
      std::cout << "| index | nodes | edges | code |\n|---|---|---|---|\n";
      const auto& classes = motif_classes();
      for (std::size_t i = 0; i < classes.size(); ++i)
        std::cout << "| " << i << " | " << classes[i].size << " | " << classes[i].edges << " | "
                  << classes[i].code << " |\n";
      return 0;
    }

    if (*synth_cmd) {
      const fs::path dir = synth_out ? fs::path(*synth_out) : default_out_dir();
      fs::create_directories(dir);
      const std::vector<Graph> graphs = planted_partition_corpus(synth_spec, seed);
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        std::ostringstream name;
        name << "graph_" << std::setw(3) << std::setfill('0') << i << ".txt";
        save_edge_list(graphs[i], dir / name.str());
      }
      std::cout << "wrote " << graphs.size() << " graphs to " << dir.string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
