// Copyright 2026 The rusarith Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rusarith/angles.hpp"
#include "rusarith/expr.hpp"
#include "rusarith/montecarlo.hpp"
#include "rusarith/rng.hpp"
#include "rusarith/rus.hpp"

namespace rusarith {

struct CostDist {
  double mean = 0;
  double variance = 0;

  CostDist& operator+=(const CostDist& o) {
    mean += o.mean;
    variance += o.variance;
    return *this;
  }
  friend CostDist operator+(CostDist a, const CostDist& b) { return a += b; }
  double stddev() const { return std::sqrt(variance); }
};

struct RotationCostModel {
  enum class Mode { Constant, Synthesis };
  Mode mode = Mode::Constant;
  double value = 1;  // c, or epsilon in synthesis mode

  static RotationCostModel constant(double c) {
    if (!(c >= 0)) throw std::invalid_argument("constant rotation cost must be >= 0");
    return {Mode::Constant, c};
  }
  static RotationCostModel synthesis(double eps) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("synthesis epsilon must be in (0, 1)");
    return {Mode::Synthesis, eps};
  }
  // T gates per rotation.
  double per_rotation() const { return mode == Mode::Constant ? value : 1.15 * std::log2(1 / value); }
};

struct CostModel {
  RotationCostModel rotation = RotationCostModel::constant(1);
  // Charge 4(k-1) T gates for each k-controlled gate.
  bool multicontrol = true;
  // An affine leaf stands for this many rotations (e.g. a ladder of n
  // controlled rotations loading an n-bit register); constants count once.
  double affine_weight = 1;

  // Counts input-rotation uses only.
  static CostModel rotations() { return {RotationCostModel::constant(1), false, 1}; }
  static CostModel tcount(RotationCostModel r) { return {r, true, 1}; }
};

inline double multicontrol_tcount(int k) { return 4.0 * (k - 1); }

// N attempts with success probability P, each consuming the summed child
// costs: E = E(N) sum E_j, V = E(N) sum V_j + V(N) (sum E_j)^2.
inline CostDist rus_repeat_cost(const std::vector<CostDist>& children, double p) {
  if (!(p > 0) || p > 1 + 1e-12) throw std::domain_error("rus_repeat_cost: success probability outside (0, 1]");
  double se = 0, sv = 0;
  for (const auto& c : children) {
    se += c.mean;
    sv += c.variance;
  }
  double en = 1 / p, vn = (1 - p) / (p * p);
  return {en * se, en * sv + vn * se * se};
}

namespace detail {
// Success probabilities this small only arise from angles at a pole.
inline double checked_prob(double p) {
  if (p < 1e-15) throw AngleDomainError("cost: success probability vanishes at these angles");
  return p;
}
}  // namespace detail

inline CostDist par_tcount(const std::vector<double>& phis, const CostModel& model) {
  std::vector<CostDist> kids(phis.size(), CostDist{model.rotation.per_rotation(), 0});
  if (model.multicontrol) kids.push_back({multicontrol_tcount(static_cast<int>(phis.size())), 0});
  return rus_repeat_cost(kids, detail::checked_prob(par_success_prob(phis)));
}

inline CostDist gb_tcount(const std::vector<double>& phis, const CostModel& model) {
  std::vector<CostDist> kids(2 * phis.size(), CostDist{model.rotation.per_rotation(), 0});
  if (model.multicontrol) kids.push_back({multicontrol_tcount(static_cast<int>(phis.size())), 0});
  return rus_repeat_cost(kids, detail::checked_prob(gb_success_prob(phis)));
}

// Mean and variance of the cost of running e on a target; fresh means the
// target starts in |0>, which lets PAR skip amplification.
inline CostDist expr_cost(const RusExpr& e, const std::vector<double>& inputs,
                          const CostModel& model, bool fresh = true) {
  switch (e.kind()) {
    case NodeKind::Const:
      return {model.rotation.per_rotation(), 0};
    case NodeKind::Affine:
      return {model.affine_weight * model.rotation.per_rotation(), 0};
    case NodeKind::Neg:
      return expr_cost(e.child(0), inputs, model, fresh);
    case NodeKind::Sum: {
      CostDist c;
      for (std::size_t i = 0; i < e.children().size(); ++i)
        c += expr_cost(e.child(i), inputs, model, fresh && i == 0);
      return c;
    }
    case NodeKind::GB:
    case NodeKind::PAR: {
      int k = static_cast<int>(e.children().size());
      std::vector<double> vals;
      std::vector<CostDist> kids;
      bool oaa = e.kind() == NodeKind::PAR && !fresh;
      int reps = oaa ? 3 : 1;
      for (const auto& c : e.children()) {
        vals.push_back(eval_angle(c, inputs));
        kids.push_back(expr_cost(c, inputs, model, true));
        if (e.kind() == NodeKind::GB) kids.push_back(expr_cost(c, inputs, model, false));
        if (oaa) {
          kids.push_back(expr_cost(c, inputs, model, false));
          kids.push_back(expr_cost(c, inputs, model, false));
        }
      }
      if (model.multicontrol)
        for (int r = 0; r < reps; ++r) kids.push_back({multicontrol_tcount(k), 0});
      double p = e.kind() == NodeKind::GB ? gb_success_prob(vals) : par_success_prob(vals);
      return rus_repeat_cost(kids, detail::checked_prob(p));
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Classical baselines.

inline double enc_cost(int n) {
  if (n < 1) throw std::invalid_argument("enc_cost: n must be positive");
  return 1.15 * (n + 2) * std::log2((n + 2) * std::ldexp(1.0, n + 2));
}

inline int multi_cnot_tcount(int k) {
  if (k < 2) throw std::invalid_argument("multi_cnot_tcount: k must be at least 2");
  switch (k) {
    case 2:
      return 7;
    case 3:
      return 22;
    case 4:
      return 52;
    default:
      return 32 * k - 84;
  }
}

enum class BaselineMethod { CarryRipple, TableLookupMultiplier, Euclid, Newton, TableLookupReciprocal };

inline std::string method_name(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::CarryRipple:
      return "carry_ripple";
    case BaselineMethod::TableLookupMultiplier:
      return "table_lookup_mult";
    case BaselineMethod::Euclid:
      return "euclid";
    case BaselineMethod::Newton:
      return "newton";
    case BaselineMethod::TableLookupReciprocal:
      return "table_lookup_recip";
  }
  return "?";
}

inline BaselineMethod parse_method(const std::string& s) {
  for (auto m : {BaselineMethod::CarryRipple, BaselineMethod::TableLookupMultiplier, BaselineMethod::Euclid,
                 BaselineMethod::Newton, BaselineMethod::TableLookupReciprocal})
    if (method_name(m) == s) return m;
  throw std::invalid_argument("unsupported baseline method '" + s + "'");
}

struct BaselineReport {
  std::string method;
  int n = 0;
  double tcount = 0;
  long qubits = 0;
  std::string mode;  // "prose" or "table"
};

// table_mode selects the variants that reproduce the printed tables where
// they disagree with the prose formulas (Newton drops the log2 n iteration
// factor; Euclid qubits are 5n + log2 n + 1).
inline BaselineReport baseline_cost(BaselineMethod m, int n, bool table_mode = false) {
  if (n < 2) throw std::invalid_argument("baseline_cost: n must be at least 2");
  double nn = n, lg = std::log2(nn), enc = enc_cost(n);
  BaselineReport r{method_name(m), n, 0, 0, table_mode ? "table" : "prose"};
  switch (m) {
    case BaselineMethod::CarryRipple:
      r.tcount = 2 * (18 * nn * nn + 18 * nn) + enc;
      r.qubits = 2 * n;
      break;
    case BaselineMethod::TableLookupMultiplier:
      r.tcount = (n == 2 ? 6656.0 : 2 * std::ldexp(1.0, 2 * n) * (64 * nn * nn + 44 * nn - 168)) + enc;
      r.qubits = 3;
      break;
    case BaselineMethod::Euclid:
      r.tcount = 2 * 1890 * nn * nn + enc;
      r.qubits = table_mode ? std::lround(5 * nn + lg + 1) : std::lround(5 * nn + 4 * lg);
      break;
    case BaselineMethod::Newton: {
      double poly = 2 * (144 * nn * nn + 200 * nn - 28);
      r.tcount = (table_mode ? poly : poly * lg) + enc;
      r.qubits = std::lround((10 * nn - 4) * lg + 1);
      break;
    }
    case BaselineMethod::TableLookupReciprocal:
      if (n == 2)
        r.tcount = 112 + enc;
      else if (n == 4)
        r.tcount = 8320 + enc;
      else if (n < 5)
        r.tcount = 2 * nn * std::ldexp(1.0, n) * multi_cnot_tcount(n) + enc;
      else
        r.tcount = std::ldexp(1.0, n + 1) * (32 * nn * nn - 84 * nn) + enc;
      r.qubits = 3;
      break;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Caching (qubits of the phase-estimation register, rotations consumed).

struct CacheCost {
  int qubits;
  double rotations;
};

inline CacheCost cache_cost(double kappa, double eps, double delta, double n1, double n2) {
  if (!(kappa > 0) || !(eps > 0 && eps < 1) || !(delta > 0 && delta < 1) || n1 < 0 || n2 < 0)
    throw std::domain_error("cache_cost: parameters out of range");
  int t = static_cast<int>(std::ceil(std::log2(kappa / eps) - 1e-12)) +
          static_cast<int>(std::ceil(std::log2(2 + 1 / (2 * delta)) - 1e-12));
  return {t, std::ldexp(1.0, t) * n2 + n1};
}

// ---------------------------------------------------------------------------
// Flattened success probabilities.

inline double flat_factor(double v) {
  double c = std::cos(v / 2 + kPi / 4), s = std::sin(v / 2 + kPi / 4);
  return c * c * c * c + s * s * s * s;
}

inline double flattened_gb_success(double x) {
  double c = std::cos(x), s = std::sin(x);
  double f = flat_factor(x);
  return f * f * (c * c * c * c + s * s * s * s);
}

inline double flattened_par_success(double a, double b) {
  double ca = std::cos(a), cb = std::cos(b), sa = std::sin(a), sb = std::sin(b);
  return flat_factor(a) * flat_factor(b) * (ca * ca * cb * cb + sa * sa * sb * sb);
}

// ---------------------------------------------------------------------------

struct EmpiricalStats {
  SampleStats stats;
  std::uint64_t exhausted = 0;
};

// Monte Carlo input-rotation uses of GB^k(x) on |0>; trial t uses stream t.
inline EmpiricalStats gbk_expected_rotations(double x, int k, std::uint64_t seed, std::uint64_t trials) {
  if (k < 0 || k > 8) throw std::invalid_argument("gbk_expected_rotations: k must be in [0, 8]");
  if (trials < 1) throw std::invalid_argument("gbk_expected_rotations: need at least one trial");
  RusExpr e = RusExpr::constant(x);
  for (int i = 0; i < k; ++i) e = RusExpr::gb({e});
  auto runs = parallel_trials<std::pair<double, bool>>(trials, [&](std::uint64_t t) {
    RngStream rng(seed, t);
    auto res = run_expr(e, {}, rng);
    return std::pair<double, bool>{static_cast<double>(res.trace.leaf_rotations), res.trace.exhausted};
  });
  EmpiricalStats st;
  std::vector<double> xs;
  xs.reserve(trials);
  for (auto& [v, ex] : runs) {
    xs.push_back(v);
    st.exhausted += ex;
  }
  st.stats = sample_stats(xs);
  return st;
}

}  // namespace rusarith
