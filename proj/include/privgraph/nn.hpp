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

// Dense layers with hand-derived gradients for the two fixed architectures
// the models use:
//
//   two-layer GCN:  H = A ReLU(A X W0) W1
//   two-layer FNN:  F = ReLU(Z V0) V1
//
// ReLU'(0) is taken as 0.

#ifndef PRIVGRAPH_NN_HPP_
#define PRIVGRAPH_NN_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "privgraph/common.hpp"

namespace privgraph {

// Ordered collection of named matrices. Used both for parameters and for
// gradients, which share the key structure of the parameters they belong to.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Matrix value;
  };

  ParamSet() = default;

  void add(std::string name, Matrix value) {
    if (contains(name)) throw Error("ParamSet: duplicate name '" + name + "'");
    entries_.push_back({std::move(name), std::move(value)});
  }

  bool contains(const std::string& name) const { return find(name) != nullptr; }

  Matrix& at(const std::string& name) {
    if (Matrix* m = find(name)) return *m;
    throw Error("ParamSet: no entry named '" + name + "'");
  }
  const Matrix& at(const std::string& name) const {
    return const_cast<ParamSet*>(this)->at(name);
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  Entry& operator[](std::size_t i) { return entries_[i]; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
  }

  std::size_t num_values() const {
    std::size_t total = 0;
    for (const auto& e : entries_) total += static_cast<std::size_t>(e.value.size());
    return total;
  }

  // Same names and shapes, in the same order.
  bool same_structure(const ParamSet& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& a = entries_[i];
      const auto& b = other.entries_[i];
      if (a.name != b.name || a.value.rows() != b.value.rows() ||
          a.value.cols() != b.value.cols())
        return false;
    }
    return true;
  }

  ParamSet zeros_like() const {
    ParamSet out;
    for (const auto& e : entries_)
      out.add(e.name, Matrix::Zero(e.value.rows(), e.value.cols()));
    return out;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value.squaredNorm();
    return s;
  }
  double norm() const { return std::sqrt(squared_norm()); }

  bool all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Entry& e) { return e.value.allFinite(); });
  }

  ParamSet& scale(double s) {
    for (auto& e : entries_) e.value *= s;
    return *this;
  }

  // this += s * other
  ParamSet& add_scaled(const ParamSet& other, double s = 1.0) {
    require_structure(other, "ParamSet::add_scaled");
    for (std::size_t i = 0; i < entries_.size(); ++i)
      entries_[i].value += s * other.entries_[i].value;
    return *this;
  }

  void require_structure(const ParamSet& other, const char* what) const {
    if (!same_structure(other)) throw DimensionError(std::string(what) + ": key/shape mismatch");
  }

  friend bool operator==(const ParamSet& a, const ParamSet& b) {
    if (!a.same_structure(b)) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
      if (a.entries_[i].value != b.entries_[i].value) return false;
    return true;
  }

 private:
  Matrix* find(const std::string& name) {
    for (auto& e : entries_)
      if (e.name == name) return &e.value;
    return nullptr;
  }
  const Matrix* find(const std::string& name) const {
    return const_cast<ParamSet*>(this)->find(name);
  }

  std::vector<Entry> entries_;
};

using GradSet = ParamSet;

inline constexpr const char* kParamFormat = "privgraph.paramset.v1";

inline nlohmann::json to_json(const Matrix& m) {
  std::vector<double> values(m.data(), m.data() + m.size());
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", std::move(values)}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto values = j.at("values").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != rows * cols)
    throw ParseError("matrix value count does not match its shape", 0);
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

inline nlohmann::json to_json(const ParamSet& p) {
  nlohmann::json entries = nlohmann::json::object();
  nlohmann::json order = nlohmann::json::array();
  for (const auto& e : p) {
    entries[e.name] = to_json(e.value);
    order.push_back(e.name);
  }
  return {{"format", kParamFormat}, {"order", order}, {"params", entries}};
}

inline ParamSet paramset_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kParamFormat)
    throw ParseError("unsupported parameter format tag", 0);
  ParamSet p;
  for (const auto& name : j.at("order"))
    p.add(name.get<std::string>(), matrix_from_json(j.at("params").at(name.get<std::string>())));
  return p;
}

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
inline Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

inline Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

inline Matrix relu_mask(const Matrix& pre) {
  return (pre.array() > 0.0).cast<double>().matrix();
}

// Overflow-safe logistic function.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline Matrix sigmoid(const Matrix& x) {
  return x.unaryExpr([](double v) { return sigmoid(v); });
}

struct Gcn2Cache {
  Matrix a_norm;
  Matrix x;
  Matrix ax;      // A X
  Matrix pre;     // A X W0
  Matrix hidden;  // ReLU(pre)
  Matrix ah;      // A hidden
  Matrix w0;
  Matrix w1;
};

struct Gcn2Grads {
  Matrix d_w0;
  Matrix d_w1;
  Matrix d_x;
  Matrix d_a_norm;
};

inline std::pair<Matrix, Gcn2Cache> gcn2_forward(const Matrix& a_norm, const Matrix& x,
                                                  const Matrix& w0, const Matrix& w1) {
  if (a_norm.rows() != a_norm.cols() || a_norm.cols() != x.rows() ||
      x.cols() != w0.rows() || w0.cols() != w1.rows())
    throw DimensionError("gcn2_forward: incompatible dimensions");
  Gcn2Cache c;
  c.a_norm = a_norm;
  c.x = x;
  c.ax = a_norm * x;
  c.pre = c.ax * w0;
  c.hidden = relu(c.pre);
  c.ah = a_norm * c.hidden;
  c.w0 = w0;
  c.w1 = w1;
  Matrix h = c.ah * w1;
  return {std::move(h), std::move(c)};
}

inline Gcn2Grads gcn2_backward(const Gcn2Cache& c, const Matrix& d_h) {
  if (d_h.rows() != c.ah.rows() || d_h.cols() != c.w1.cols())
    throw DimensionError("gcn2_backward: upstream gradient shape mismatch");
  Gcn2Grads g;
  g.d_w1 = c.ah.transpose() * d_h;
  const Matrix d_ah = d_h * c.w1.transpose();
  const Matrix d_hidden = c.a_norm.transpose() * d_ah;
  const Matrix d_pre = d_hidden.cwiseProduct(relu_mask(c.pre));
  g.d_w0 = c.ax.transpose() * d_pre;
  const Matrix d_ax = d_pre * c.w0.transpose();
  g.d_x = c.a_norm.transpose() * d_ax;
  // A appears in both layers.
  g.d_a_norm = d_ah * c.hidden.transpose() + d_ax * c.x.transpose();
  return g;
}

struct Fnn2Cache {
  Matrix z;
  Matrix pre;     // Z V0
  Matrix hidden;  // ReLU(pre)
  Matrix v0;
  Matrix v1;
};

struct Fnn2Grads {
  Matrix d_v0;
  Matrix d_v1;
  Matrix d_z;
};

inline std::pair<Matrix, Fnn2Cache> fnn2_forward(const Matrix& z, const Matrix& v0,
                                                  const Matrix& v1) {
  if (z.cols() != v0.rows() || v0.cols() != v1.rows())
    throw DimensionError("fnn2_forward: incompatible dimensions");
  Fnn2Cache c;
  c.z = z;
  c.pre = z * v0;
  c.hidden = relu(c.pre);
  c.v0 = v0;
  c.v1 = v1;
  Matrix f = c.hidden * v1;
  return {std::move(f), std::move(c)};
}

inline Fnn2Grads fnn2_backward(const Fnn2Cache& c, const Matrix& d_f) {
  if (d_f.rows() != c.hidden.rows() || d_f.cols() != c.v1.cols())
    throw DimensionError("fnn2_backward: upstream gradient shape mismatch");
  Fnn2Grads g;
  g.d_v1 = c.hidden.transpose() * d_f;
  const Matrix d_pre = (d_f * c.v1.transpose()).cwiseProduct(relu_mask(c.pre));
  g.d_v0 = c.z.transpose() * d_pre;
  g.d_z = d_pre * c.v0.transpose();
  return g;
}

// Scalar objective plus its analytic gradient with respect to `params`.
using LossAndGrad = std::function<std::pair<double, GradSet>(const ParamSet&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  Eigen::Index worst_index = -1;
};

// Compares the analytic gradient against central differences entry by entry.
// Relative error: |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
inline GradCheckResult grad_check(const LossAndGrad& fn, const ParamSet& params,
                                  double epsilon = 1e-5) {
  const GradSet analytic = fn(params).second;
  params.require_structure(analytic, "grad_check");
  GradCheckResult result;
  ParamSet probe = params;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    Matrix& value = probe[p].value;
    for (Eigen::Index i = 0; i < value.size(); ++i) {
      const double saved = value.data()[i];
      value.data()[i] = saved + epsilon;
      const double up = fn(probe).first;
      value.data()[i] = saved - epsilon;
      const double down = fn(probe).first;
      value.data()[i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic[p].value.data()[i];
      const double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_param = probe[p].name;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace privgraph

#endif  // PRIVGRAPH_NN_HPP_
