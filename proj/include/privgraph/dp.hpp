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

// Edge-level differential privacy for gradient descent on the decoder:
// per-node clipping, Gaussian noise injection, closed-form noise calibration
// and the decaying clipping-norm schedule.
//
// The noisy gradient over a batch of B nodes is
//
//   g~ = (1/B) * (sum_i g_i / max(1, ||g_i|| / C) + N(0, sigma^2 C^2 I))
//
// and sigma is calibrated as
//
//   sigma = c2 * q * sqrt(T ln(1/delta)) / epsilon,   c2 = 1/sqrt(c0 (1 - c0)),
//
// valid when epsilon < c1 q^2 T with c1 = ln(1/(q sigma)) / c0.

#ifndef PRIVGRAPH_DP_HPP_
#define PRIVGRAPH_DP_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "privgraph/nn.hpp"

namespace privgraph {

struct DpConfig {
  double epsilon = 1.0;
  double delta = 1e-5;
  double clip_c0 = 1.0;  // initial clipping norm C
  std::optional<double> sigma;  // unset: calibrate from (epsilon, delta, q, T)
  double q = 1.0;        // sampling rate B / N
  int t_max = 1;         // total steps T
  double c0 = 0.5;
  double clip_decay = 1.0;
  double clip_min = 1e-3;
  bool override_validity = false;

  void validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("dp: epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("dp: delta must be in (0, 1)");
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("dp: q must be in (0, 1]");
    if (t_max < 1) throw ConfigError("dp: t_max must be >= 1");
    if (!(c0 > 0.0 && c0 < 1.0)) throw ConfigError("dp: c0 must be in (0, 1)");
    if (!(clip_c0 > 0.0)) throw ConfigError("dp: clipping norm must be > 0");
    if (!(clip_decay > 0.0 && clip_decay <= 1.0))
      throw ConfigError("dp: clip_decay must be in (0, 1]");
    if (!(clip_min > 0.0)) throw ConfigError("dp: clip_min must be > 0");
    if (sigma && *sigma < 0.0) throw ConfigError("dp: sigma must be >= 0");
  }
};

struct Calibration {
  double sigma = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double bound = 0.0;  // c1 q^2 T
  bool valid = false;
  std::string message;
};

// Smallest admissible sigma (c2 at its upper bound), then checks the epsilon
// precondition with the resulting sigma. Fails closed when q * sigma >= 1.
inline Calibration check_validity(const DpConfig& cfg, double sigma) {
  Calibration c;
  c.sigma = sigma;
  c.c2 = 1.0 / std::sqrt(cfg.c0 * (1.0 - cfg.c0));
  const double qs = cfg.q * sigma;
  std::ostringstream msg;
  if (!(qs < 1.0)) {
    c.c1 = qs > 0.0 ? std::log(1.0 / qs) / cfg.c0 : 0.0;
    c.bound = c.c1 * cfg.q * cfg.q * cfg.t_max;
    c.valid = false;
    msg << "q*sigma = " << qs << " >= 1, so ln(1/(q*sigma)) <= 0 and no epsilon satisfies "
        << "epsilon < c1*q^2*T";
  } else {
    c.c1 = std::log(1.0 / qs) / cfg.c0;
    c.bound = c.c1 * cfg.q * cfg.q * cfg.t_max;
    c.valid = cfg.epsilon < c.bound;
    msg << "epsilon = " << cfg.epsilon << (c.valid ? " < " : " >= ") << "c1*q^2*T = " << c.bound;
  }
  c.message = msg.str();
  return c;
}

inline Calibration calibrate_sigma(const DpConfig& cfg) {
  cfg.validate();
  const double c2 = 1.0 / std::sqrt(cfg.c0 * (1.0 - cfg.c0));
  const double sigma = c2 * cfg.q * std::sqrt(cfg.t_max * std::log(1.0 / cfg.delta)) / cfg.epsilon;
  return check_validity(cfg, sigma);
}

inline nlohmann::json to_json(const Calibration& c) {
  return {{"sigma", c.sigma}, {"c1", c.c1},       {"c2", c.c2},
          {"bound", c.bound}, {"valid", c.valid}, {"message", c.message}};
}

// C * decay^epoch, never below c_min.
inline double clip_schedule(double c_initial, double decay, int epoch, double c_min) {
  return std::max(c_min, c_initial * std::pow(decay, epoch));
}

inline GradSet clip_grad(GradSet g, double c) {
  const double norm = g.norm();
  if (norm > c) g.scale(c / norm);
  return g;
}

inline Matrix gaussian_noise(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  if (stddev < 0.0) throw Error("gaussian_noise: negative standard deviation");
  if (stddev == 0.0) return Matrix::Zero(rows, cols);
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

// (1/divisor) * (sum of clipped per-node gradients + N(0, sigma^2 c^2)).
// With sigma == 0 no noise is drawn and the RNG is left untouched.
inline GradSet dp_gradient(std::span<const GradSet> per_node, double c, double sigma,
                           int divisor, Rng& rng) {
  if (per_node.empty()) throw Error("dp_gradient: empty gradient list");
  if (sigma < 0.0) throw Error("dp_gradient: negative sigma");
  if (divisor < 1) throw Error("dp_gradient: divisor must be positive");
  GradSet sum = per_node.front().zeros_like();
  for (const GradSet& g : per_node) sum.add_scaled(clip_grad(g, c));
  if (sigma > 0.0) {
    const double stddev = sigma * c;
    for (auto& e : sum) e.value += gaussian_noise(e.value.rows(), e.value.cols(), stddev, rng);
  }
  sum.scale(1.0 / divisor);
  return sum;
}

struct PrivacyReport {
  bool enabled = false;
  double epsilon_spent = 0.0;
  double delta = 0.0;
  double sigma_used = 0.0;
  double q = 0.0;
  double c0 = 0.5;
  int steps_taken = 0;
  int t_max = 0;
  bool validity = false;
  bool validity_overridden = false;
  std::string message;
};

inline nlohmann::json to_json(const PrivacyReport& r) {
  return {{"enabled", r.enabled},
          {"epsilon_spent", r.epsilon_spent},
          {"delta", r.delta},
          {"sigma_used", r.sigma_used},
          {"q", r.q},
          {"c0", r.c0},
          {"steps_taken", r.steps_taken},
          {"t_max", r.t_max},
          {"validity", r.validity},
          {"validity_overridden", r.validity_overridden},
          {"message", r.message}};
}

inline PrivacyReport privacy_report_from_json(const nlohmann::json& j) {
  PrivacyReport r;
  r.enabled = j.at("enabled").get<bool>();
  r.epsilon_spent = j.at("epsilon_spent").get<double>();
  r.delta = j.at("delta").get<double>();
  r.sigma_used = j.at("sigma_used").get<double>();
  r.q = j.at("q").get<double>();
  r.c0 = j.at("c0").get<double>();
  r.steps_taken = j.at("steps_taken").get<int>();
  r.t_max = j.at("t_max").get<int>();
  r.validity = j.at("validity").get<bool>();
  r.validity_overridden = j.value("validity_overridden", false);
  r.message = j.value("message", "");
  return r;
}

}  // namespace privgraph

#endif  // PRIVGRAPH_DP_HPP_
