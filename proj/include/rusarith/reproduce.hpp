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

// Recomputation of the reference error and resource tables next to the printed
// values.

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rusarith/costs.hpp"
#include "rusarith/reciprocal.hpp"
#include "rusarith/synth.hpp"

namespace rusarith {

struct ReportCell {
  std::string table;
  std::string row;
  std::string column;
  double computed = 0;
  double printed = 0;  // NaN when no reference value exists
  bool match = false;
  std::string note;  // "unreconciled" for rows the formulas cannot reproduce
};

// Two-significant-figure comparison: the printed value equals the computed
// one rounded or truncated to two figures.
inline bool matches_2sf(double computed, double printed) {
  if (computed == 0 || printed == 0) return computed == printed;
  double e = std::floor(std::log10(std::abs(computed)));
  double scale = std::pow(10.0, e - 1);
  double mant = std::abs(computed) / scale;
  double pm = std::abs(printed) / scale;
  return std::abs(std::round(mant) - pm) < 1e-6 || std::abs(std::floor(mant) - pm) < 1e-6;
}

inline bool within_rel(double computed, double printed, double tol) {
  return std::abs(computed - printed) <= tol * std::abs(printed);
}

inline bool within_factor(double computed, double printed, double f) {
  return computed > 0 && printed > 0 && computed <= f * printed && printed <= f * computed;
}

inline std::string fmt_e(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  return buf;
}

namespace printed {

inline constexpr std::array<double, 5> kMultErrX{0.01, 0.05, 0.1, 0.5, 1.0};
inline constexpr std::array<double, 5> kMultErrM4{6.7e-9, 4.2e-7, 6.7e-5, 4.0e-2, 0.18};
inline constexpr std::array<double, 5> kMultErrM6{6.6e-14, 1.0e-9, 6.6e-8, 9.4e-4, 0.054};
inline constexpr std::array<double, 5> kMultErrM8{5.5e-17, 2.2e-11, 5.5e-9, 1.9e-3, 0.088};

inline constexpr std::array<double, 3> kChebError{1.6e-2, 5.1e-4, 1.2e-5};

inline constexpr std::array<int, 4> kBits{2, 4, 8, 16};
inline constexpr std::array<double, 4> kCarryRipple{2.34e2, 7.84e2, 2.80e3, 1.06e4};
inline constexpr std::array<long, 4> kCarryRippleQubits{4, 8, 16, 32};
inline constexpr std::array<double, 4> kTableLookupMult{3.38e3, 3.26e6, 3.98e9, 1.13e13};
inline constexpr std::array<double, 4> kM4{6.11e1, 1.97e3, 4.64e4, 3.00e7};
inline constexpr std::array<long, 4> kM4Qubits{3, 4, 4, 4};
inline constexpr std::array<double, 4> kM6{7.71e2, 1.67e3, 3.82e3, 5.21e5};
inline constexpr std::array<long, 4> kM6Qubits{4, 4, 4, 5};

inline constexpr std::array<double, 4> kEuclid{1.51e4, 6.05e4, 2.42e5, 9.68e5};
inline constexpr std::array<long, 4> kEuclidQubits{12, 23, 44, 85};
inline constexpr std::array<double, 4> kNewton{1.92e3, 6.21e3, 2.17e4, 8.05e4};
inline constexpr std::array<long, 4> kNewtonQubits{17, 73, 229, 625};
inline constexpr std::array<double, 4> kTableLookupRecip{1.40e2, 8.38e3, 7.05e5, 8.98e8};
inline constexpr std::array<double, 2> kR2{3.17e3, 1.53e5};
inline constexpr long kR2Qubits = 6;

}  // namespace printed

// ---------------------------------------------------------------------------
// Slicing policy for the multiplier rows of the resource tables.

struct SlicedMultiplierCost {
  int r = 1;                 // slices per input (r^2 applications)
  bool oaa = false;          // slices after the first act on a non-|0> target
  double approx_error = 0;   // |r^2 M(x/r, x/r) - x^2|
  double synth_rotations = 0;
  double tcount = 0;
  long qubits = 0;
};

struct MultiplierPolicy {
  double x = 0.5;             // worst-case input angle
  double approx_fraction = 0.5;
  int max_slices = 100000;
};

// Target error 2^-(n+1) is split between the approximation (choice of r) and
// rotation synthesis; each input leaf is an n-rotation load of an n-bit input.
inline SlicedMultiplierCost multiplier_rus_cost(const RusExpr& m, int n, const MultiplierPolicy& pol = {}) {
  if (n < 1) throw std::invalid_argument("multiplier_rus_cost: n must be positive");
  double eps = std::ldexp(1.0, -(n + 1));
  double ea = eps * pol.approx_fraction, es = eps - ea;
  double target = pol.x * pol.x;
  SlicedMultiplierCost out;
  int r = 1;
  for (;; ++r) {
    if (r > pol.max_slices) throw std::domain_error("multiplier_rus_cost: slicing did not converge");
    double xr = pol.x / r;
    out.approx_error = std::abs(double(r) * r * eval_angle(m, {xr, xr}) - target);
    if (out.approx_error <= ea) break;
  }
  out.r = r;
  out.oaa = r > 1;
  double xr = pol.x / r;
  double reps = double(r) * r * (out.oaa ? 3 : 1);
  CostModel count{RotationCostModel::constant(1), false, double(n)};
  out.synth_rotations = reps * expr_cost(m, {xr, xr}, count).mean;
  double per = 1.15 * std::log2(out.synth_rotations / es);
  CostModel tmodel{RotationCostModel::constant(per), true, double(n)};
  out.tcount = reps * expr_cost(m, {xr, xr}, tmodel).mean;
  out.qubits = static_cast<long>(m.children().size()) + 1 + (out.oaa ? 1 : 0);
  return out;
}

// R2 over y = 1/2 with 99% of the tolerance given to synthesis.
inline SlicedMultiplierCost r2_rus_cost(int n) {
  RusExpr e = assemble_R2();
  double eps = std::ldexp(1.0, -(n + 1));
  double es = 0.99 * eps;
  SlicedMultiplierCost out;
  CostModel count{RotationCostModel::constant(1), false, double(n)};
  out.synth_rotations = expr_cost(e, {0.5}, count).mean;
  double per = 1.15 * std::log2(out.synth_rotations / es);
  CostModel tmodel{RotationCostModel::constant(per), true, double(n)};
  out.tcount = expr_cost(e, {0.5}, tmodel).mean;
  out.qubits = ancilla_width(e) + 1;
  out.approx_error = reciprocal_error(chebyshev_reciprocal(2)).max_abs;
  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<ReportCell> reproduce_multerror() {
  std::vector<ReportCell> cells;
  const std::array<std::pair<const char*, const std::array<double, 5>*>, 3> cols{
      {{"M4", &printed::kMultErrM4}, {"M6", &printed::kMultErrM6}, {"M8", &printed::kMultErrM8}}};
  const std::array<RusExpr, 3> exprs{m4_expr(), m6_expr(), m8_expr()};
  for (std::size_t i = 0; i < printed::kMultErrX.size(); ++i) {
    double x = printed::kMultErrX[i];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      double err = std::abs(eval_angle(exprs[c], {x, x}) - x * x);
      double p = (*cols[c].second)[i];
      char row[32];
      std::snprintf(row, sizeof row, "x=%g", x);
      cells.push_back({"multerror", row, cols[c].first, err, p, matches_2sf(err, p), ""});
    }
  }
  return cells;
}

inline std::vector<ReportCell> reproduce_cheb() {
  std::vector<ReportCell> cells;
  for (int i = 0; i < 3; ++i) {
    int order = 2 * (i + 1);
    auto err = reciprocal_error(chebyshev_reciprocal(order));
    double p = printed::kChebError[i];
    cells.push_back({"cheb", "R" + std::to_string(order), "max_abs_error", err.max_abs, p,
                     matches_2sf(err.max_abs, p), ""});
    cells.push_back({"cheb", "R" + std::to_string(order), "max_rel_error", err.max_rel, p,
                     matches_2sf(err.max_rel, p), "diagnostic"});
  }
  return cells;
}

inline std::vector<ReportCell> reproduce_multiplier() {
  std::vector<ReportCell> cells;
  for (std::size_t i = 0; i < printed::kBits.size(); ++i) {
    int n = printed::kBits[i];
    std::string col = "n=" + std::to_string(n);
    auto cr = baseline_cost(BaselineMethod::CarryRipple, n);
    cells.push_back({"multiplier", "carry_ripple.tcount", col, cr.tcount, printed::kCarryRipple[i],
                     within_rel(cr.tcount, printed::kCarryRipple[i], 0.05), ""});
    cells.push_back({"multiplier", "carry_ripple.qubits", col, double(cr.qubits),
                     double(printed::kCarryRippleQubits[i]), cr.qubits == printed::kCarryRippleQubits[i], ""});
    auto tl = baseline_cost(BaselineMethod::TableLookupMultiplier, n);
    cells.push_back({"multiplier", "table_lookup.tcount", col, tl.tcount, printed::kTableLookupMult[i],
                     within_rel(tl.tcount, printed::kTableLookupMult[i], 0.01), "unreconciled"});
    cells.push_back({"multiplier", "table_lookup.qubits", col, double(tl.qubits), 3, tl.qubits == 3, ""});
    auto m4c = multiplier_rus_cost(m4_expr(), n);
    cells.push_back({"multiplier", "M4.tcount", col, m4c.tcount, printed::kM4[i],
                     within_factor(m4c.tcount, printed::kM4[i], 2), "monte_carlo_row"});
    cells.push_back({"multiplier", "M4.qubits", col, double(m4c.qubits), double(printed::kM4Qubits[i]),
                     m4c.qubits == printed::kM4Qubits[i], ""});
    auto m6c = multiplier_rus_cost(m6_expr(), n);
    cells.push_back({"multiplier", "M6.tcount", col, m6c.tcount, printed::kM6[i],
                     within_factor(m6c.tcount, printed::kM6[i], 2), "monte_carlo_row"});
    cells.push_back({"multiplier", "M6.qubits", col, double(m6c.qubits), double(printed::kM6Qubits[i]),
                     m6c.qubits == printed::kM6Qubits[i], ""});
  }
  return cells;
}

inline std::vector<ReportCell> reproduce_reciprocals(bool table_mode = true) {
  std::vector<ReportCell> cells;
  for (std::size_t i = 0; i < printed::kBits.size(); ++i) {
    int n = printed::kBits[i];
    std::string col = "n=" + std::to_string(n);
    auto eu = baseline_cost(BaselineMethod::Euclid, n, table_mode);
    cells.push_back({"reciprocals", "euclid.tcount", col, eu.tcount, printed::kEuclid[i],
                     within_rel(eu.tcount, printed::kEuclid[i], 0.01), ""});
    cells.push_back({"reciprocals", "euclid.qubits", col, double(eu.qubits), double(printed::kEuclidQubits[i]),
                     eu.qubits == printed::kEuclidQubits[i], ""});
    auto nw = baseline_cost(BaselineMethod::Newton, n, table_mode);
    cells.push_back({"reciprocals", "newton.tcount", col, nw.tcount, printed::kNewton[i],
                     within_rel(nw.tcount, printed::kNewton[i], 0.01), ""});
    cells.push_back({"reciprocals", "newton.qubits", col, double(nw.qubits), double(printed::kNewtonQubits[i]),
                     nw.qubits == printed::kNewtonQubits[i], ""});
    auto tl = baseline_cost(BaselineMethod::TableLookupReciprocal, n, table_mode);
    cells.push_back({"reciprocals", "table_lookup.tcount", col, tl.tcount, printed::kTableLookupRecip[i],
                     within_rel(tl.tcount, printed::kTableLookupRecip[i], 0.01), ""});
    cells.push_back({"reciprocals", "table_lookup.qubits", col, double(tl.qubits), 3, tl.qubits == 3, ""});
    if (i < printed::kR2.size()) {
      auto r2 = r2_rus_cost(n);
      cells.push_back({"reciprocals", "R2.tcount", col, r2.tcount, printed::kR2[i],
                       within_factor(r2.tcount, printed::kR2[i], 2), "unreconciled"});
      cells.push_back({"reciprocals", "R2.qubits", col, double(r2.qubits), double(printed::kR2Qubits),
                       r2.qubits == printed::kR2Qubits, "unreconciled"});
    }
  }
  return cells;
}

inline std::vector<ReportCell> reproduce_table(const std::string& which, bool table_mode = true) {
  if (which == "multerror") return reproduce_multerror();
  if (which == "cheb") return reproduce_cheb();
  if (which == "multiplier") return reproduce_multiplier();
  if (which == "reciprocals") return reproduce_reciprocals(table_mode);
  throw std::invalid_argument("unknown table '" + which + "'");
}

}  // namespace rusarith
