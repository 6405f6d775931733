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

// Acceptance checks. Prints one PASS/FAIL line per criterion, then the
// figure-level claims. `--only ID` runs a single entry.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "branches.hpp"

namespace rusarith {
namespace {

using namespace rusarith::testing;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_s;  // 0: no limit
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome count_cells(const std::vector<ReportCell>& cells, const std::function<bool(const ReportCell&)>& keep) {
  int total = 0, ok = 0;
  std::ostringstream miss;
  for (const auto& c : cells) {
    if (!keep(c)) continue;
    ++total;
    if (c.match) {
      ++ok;
    } else {
      miss << " " << c.row << "/" << c.column << "=" << fmt("%.3g", c.computed) << "(printed "
           << fmt("%.3g", c.printed) << ")";
    }
  }
  std::string d = std::to_string(ok) + "/" + std::to_string(total) + " cells match";
  if (ok != total) d += "; mismatches:" + miss.str();
  return {ok == total, d};
}

// 1. Multiplication error grid.
Outcome mult_errors() {
  return count_cells(reproduce_multerror(), [](const ReportCell&) { return true; });
}

// 2. Chebyshev reciprocal errors, maximum absolute error on a dense grid.
Outcome cheb_errors() {
  int ok = 0;
  std::ostringstream d;
  for (int i = 0; i < 3; ++i) {
    int order = 2 * (i + 1);
    auto e = reciprocal_error(chebyshev_reciprocal(order), 20001);
    bool m = matches_2sf(e.max_abs, printed::kChebError[i]);
    ok += m;
    d << " R" << order << "=" << fmt("%.3g", e.max_abs) << (m ? "" : "(printed " + fmt("%.2g", printed::kChebError[i]) + ")")
      << " [rel " << fmt("%.3g", e.max_rel) << "]";
  }
  return {ok == 3, std::to_string(ok) + "/3 match;" + d.str()};
}

// 3. Resource rows the formulas reconcile, plus the factor-2 multiplier rows.
Outcome resource_rows() {
  auto cells = reproduce_reciprocals(true);
  auto mult = reproduce_multiplier();
  cells.insert(cells.end(), mult.begin(), mult.end());
  return count_cells(cells, [](const ReportCell& c) {
    if (c.note == "unreconciled") return false;  // table-lookup multiplier and R2
    return true;
  });
}

// 4. Block-level branch states.
Outcome primitives() {
  RngStream rng(900, 0);
  double worst = 1;
  for (int t = 0; t < 100; ++t) {
    int k = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<double> phis;
    for (int j = 0; j < k; ++j) phis.push_back(uniform(rng, -1.5, 1.5));
    auto psi = random_state(1, rng);
    auto g = check_gb_block(phis, psi);
    auto p = check_par_block(phis, psi);
    auto o = check_oaa_block(phis, psi);
    for (double f : {g.worst_success_fidelity, g.worst_failure_fidelity, p.worst_success_fidelity,
                     p.worst_failure_fidelity, o.block.worst_success_fidelity, o.block.worst_failure_fidelity})
      worst = std::min(worst, f);
  }
  return {worst >= 1 - 1e-10, "worst branch fidelity 1 - " + fmt("%.2e", 1 - worst)};
}

// 5. Single-input amplified PAR is deterministic.
Outcome oaa_determinism() {
  RngStream rng(901, 0);
  double worst_amp = 1, worst_fid = 1;
  for (int t = 0; t < 50; ++t) {
    double phi = uniform(rng, -1.5, 1.5);
    auto o = check_oaa_block({phi}, random_state(1, rng));
    worst_amp = std::min(worst_amp, std::sqrt(o.block.success_probability));
    worst_fid = std::min(worst_fid, o.block.worst_success_fidelity);
  }
  bool ok = 1 - worst_amp <= 1e-10 && 1 - worst_fid <= 1e-10;
  return {ok, "min success amplitude 1 - " + fmt("%.2e", 1 - worst_amp) + ", min fidelity 1 - " +
                  fmt("%.2e", 1 - worst_fid)};
}

// 6. First-attempt success frequencies.
Outcome success_statistics() {
  const std::uint64_t n = 100000;
  RngStream rng(902, 0);
  double worst_z = 0;
  std::string worst_what;
  auto check = [&](const std::string& what, double p, const std::vector<int>& hits) {
    double f = std::accumulate(hits.begin(), hits.end(), 0.0) / n;
    double z = std::abs(f - p) / binomial_sigma(p, n);
    if (z > worst_z) {
      worst_z = z;
      worst_what = what;
    }
  };
  for (int t = 0; t < 10; ++t) {
    int k = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<double> phis;
    for (int j = 0; j < k; ++j) phis.push_back(uniform(rng, 0.05, 1.5));
    auto psi = random_state(1, rng);
    std::uint64_t seed = 1000 + t;
    check("gb", gb_success_prob(phis), parallel_trials<int>(n, [&](std::uint64_t i) {
            RngStream r(seed, i);
            return int(run_gb(phis, psi, 0, r).trace.attempts == 1);
          }));
    check("par", par_success_prob(phis), parallel_trials<int>(n, [&](std::uint64_t i) {
            RngStream r(seed + 100, i);
            return int(run_par_on_zero(phis, r).trace.attempts == 1);
          }));
    double phi = phis[0];
    check("nonrus_gb", nonrus_gb_success_prob(phi), parallel_trials<int>(n, [&](std::uint64_t i) {
            RngStream r(seed + 200, i);
            return int(run_nonrus_gb(phi, psi, r).outcome == NonRusOutcome::Success);
          }));
  }
  return {worst_z <= 4, "30 tuples x 1e5 trials, worst |z| = " + fmt("%.2f", worst_z) + " (" + worst_what + ")"};
}

// 7. Analytic cost recursion against simulated traces.
Outcome cost_consistency() {
  RngStream rng(903, 0);
  const std::uint64_t n = 100000;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    int k = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<RusExpr> kids;
    for (int j = 0; j < k; ++j) kids.push_back(RusExpr::constant(uniform(rng, 0.05, 1.5)));
    for (NodeKind kind : {NodeKind::GB, NodeKind::PAR}) {
      RusExpr e = kind == NodeKind::GB ? RusExpr::gb(kids) : RusExpr::par(kids);
      std::uint64_t seed = 2000 + 2 * t + (kind == NodeKind::PAR);
      auto rot = parallel_trials<double>(n, [&](std::uint64_t i) {
        RngStream r(seed, i);
        return double(run_expr(e, {}, r).trace.leaf_rotations);
      });
      auto st = sample_stats(rot);
      auto an = expr_cost(e, {}, CostModel::rotations());
      // A deterministic tree (P = 1) has zero spread and must match exactly.
      auto dev = [](double a, double b, double se) {
        if (se == 0) return std::abs(a - b) <= 1e-9 ? 0.0 : HUGE_VAL;
        return std::abs(a - b) / se;
      };
      worst = std::max(worst, dev(st.mean, an.mean, st.mean_stderr()));
      worst = std::max(worst, dev(st.variance, an.variance, st.variance_stderr()));
    }
  }
  return {worst <= 3, "40 trees x 1e5 trials, worst deviation " + fmt("%.2f", worst) + " standard errors"};
}

// 8. Algebraic properties of PAR and GB.
Outcome properties() {
  RngStream rng(904, 0);
  int fails = 0, checks = 0;
  auto expect = [&](bool c) {
    ++checks;
    fails += !c;
  };
  auto close = [&](double a, double b) { expect(std::abs(a - b) <= 1e-12); };
  for (int t = 0; t < 200; ++t) {
    double x = uniform(rng, -1.4, 1.4), y = uniform(rng, -1.4, 1.4), z = uniform(rng, -1.4, 1.4);
    close(par_angle({par_angle({x, y}), z}), par_angle({x, y, z}));  // associativity
    close(par_angle({z, x, y}), par_angle({x, y, z}));                // commutativity
    close(par_angle({x + kPi, y}), par_angle({x, y}));                // periodicity
    close(par_angle({-x, y}), -par_angle({x, y}));                    // oddness
    close(gb_angle({z, y, x}), gb_angle({x, y, z}));
    close(gb_angle({x - kPi, y}), gb_angle({x, y}));
    close(gb_angle({-x, y}), gb_angle({x, y}));  // evenness
    close(gb_angle(x), par_angle({x, x}));       // equivalence
    close(gb_iterate(x, 3), gb_angle(gb_angle(gb_angle(x))));  // composition
  }
  // Non-linearity orders: PAR k+2, k-input GB 2k+2.
  auto stable = [&](const std::function<double(double)>& ratio) {
    double base = ratio(0.04);
    for (double h = 0.02; h > 0.004; h /= 2) expect(ratio(h) < 4 * base && ratio(h) > base / 4);
  };
  for (int k = 2; k <= 4; ++k)
    stable([k](double h) { return std::abs(par_angle(std::vector<double>(k, h)) - std::pow(h, k)) / std::pow(h, k + 2); });
  for (int k = 1; k <= 3; ++k)
    stable([k](double h) {
      return std::abs(gb_angle(std::vector<double>(k, h)) - std::pow(h, 2 * k)) / std::pow(h, 2 * k + 2);
    });
  // Orthogonality of GB(2^m x) - pi/4 on [0, pi].
  const int pts = 1 << 14;
  double worst = 0;
  std::vector<std::vector<double>> w(4, std::vector<double>(pts));
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < pts; ++i) w[m][i] = gb_angle(std::ldexp(kPi * i / pts, m)) - kPi / 4;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double mn = 0, mm = 0, nn = 0;
      for (int i = 0; i < pts; ++i) {
        mn += w[m][i] * w[n][i];
        mm += w[m][i] * w[m][i];
        nn += w[n][i] * w[n][i];
      }
      double corr = mn / std::sqrt(mm * nn);
      worst = std::max(worst, std::abs(corr - (m == n ? 1 : 0)));
    }
  expect(worst <= 1e-6);
  return {fails == 0, std::to_string(checks - fails) + "/" + std::to_string(checks) +
                          " checks hold; orthogonality deviation " + fmt("%.1e", worst)};
}

// 9. Square-wave fit of the reciprocal.
Outcome square_wave() {
  auto f = [](double y) { return 1 / (1 - y); };
  auto fit = square_wave_fit(f, 0, 0.5, 71, 8, 0.1);
  auto prof = square_wave_error(fit, f, 2001);
  bool ok = prof.max_rel <= 0.026 && prof.mean_rel <= 0.0046;
  return {ok, "max rel " + fmt("%.2f%%", 100 * prof.max_rel) + ", mean rel " + fmt("%.3f%%", 100 * prof.mean_rel)};
}

// 10. Binomial reciprocal.
Outcome binomial() {
  double worst_lit = 0, worst_closed = 0;
  bool bound = true;
  for (int i = 0; i <= 1000; ++i) {
    double y = 0.5 * i / 1000;
    for (int n = 0; n <= 6; ++n) {
      worst_lit = std::max(worst_lit, std::abs(binomial_reciprocal_value(y, n) - binomial_product_literal(y, n)));
      worst_closed = std::max(worst_closed, std::abs(binomial_error(y, n) - std::pow(y, std::ldexp(1.0, n))));
      // Doubles cannot resolve 2^-64, so the bound carries rounding slack.
      bound = bound && binomial_error(y, n) <= std::ldexp(1.0, -(1 << n)) + 1e-15;
    }
  }
  bool ok = worst_lit <= 1e-14 && worst_closed <= 1e-14 && bound;
  return {ok, "closed form vs product " + fmt("%.1e", worst_lit) + ", error vs y^(2^n) " + fmt("%.1e", worst_closed) +
                  (bound ? ", bound holds" : ", bound violated")};
}

// Figure claims: mean rotations at x = 0.1 within a factor 1.5.
Outcome rotations_claim(const RusExpr& e, double claim) {
  const std::uint64_t n = 20000;
  auto rot = parallel_trials<double>(n, [&](std::uint64_t i) {
    RngStream r(905, i);
    return double(run_expr(e, {0.1, 0.1}, r).trace.leaf_rotations);
  });
  auto st = sample_stats(rot);
  double an = expr_cost(e, {0.1, 0.1}, CostModel::rotations()).mean;
  bool ok = within_factor(st.mean, claim, 1.5);
  return {ok, "simulated mean " + fmt("%.2f", st.mean) + " (analytic " + fmt("%.2f", an) + ") vs claimed " +
                  fmt("%g", claim)};
}

Outcome monotone_rotations() {
  std::vector<double> xs{0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
  std::ostringstream d;
  bool ok = true;
  for (auto [name, e] : {std::pair<const char*, RusExpr>{"M4", m4_expr()}, {"M6", m6_expr()}, {"M8", m8_expr()}}) {
    double prev = 0;
    for (double x : xs) {
      double m = expr_cost(e, {x, x}, CostModel::rotations()).mean;
      ok = ok && m >= prev;
      prev = m;
    }
    d << " " << name << ":" << fmt("%.1f", expr_cost(e, {0.01, 0.01}, CostModel::rotations()).mean) << "->"
      << fmt("%.1f", prev);
  }
  return {ok, "mean rotations non-decreasing in x over [0.01, 0.5];" + d.str()};
}

Outcome slicing_tradeoff() {
  // r slices: error falls like 1/r^2 while the rotation count grows like r^2.
  auto e = m4_expr();
  double prev_err = HUGE_VAL, prev_cost = 0;
  bool ok = true;
  double e1 = 0, e8 = 0;
  for (int r = 1; r <= 8; ++r) {
    double xr = 0.5 / r;
    double err = std::abs(double(r) * r * eval_angle(e, {xr, xr}) - 0.25);
    double cost = double(r) * r * expr_cost(e, {xr, xr}, CostModel::rotations()).mean;
    ok = ok && err < prev_err && cost > prev_cost;
    prev_err = err;
    prev_cost = cost;
    if (r == 1) e1 = err;
    if (r == 8) e8 = err;
  }
  double scaling = e1 / e8 / 64;
  ok = ok && scaling > 0.5 && scaling < 2;
  return {ok, "M4 at x=0.5: error " + fmt("%.2e", e1) + " -> " + fmt("%.2e", e8) + " over r=1..8 (r^2 scaling ratio " +
                  fmt("%.2f", scaling) + "), cost increasing"};
}

std::vector<Criterion> criteria() {
  return {
      {"1", "multiplication error grid", 1, mult_errors},
      {"2", "Chebyshev reciprocal errors", 1, cheb_errors},
      {"3", "baseline and RUS resource rows", 0, resource_rows},
      {"4", "primitive branch states", 30, primitives},
      {"5", "OAA determinism", 5, oaa_determinism},
      {"6", "success-probability statistics", 60, success_statistics},
      {"7", "cost-model consistency", 60, cost_consistency},
      {"8", "PAR/GB property suites", 10, properties},
      {"9", "square-wave reciprocal experiment", 120, square_wave},
      {"10", "binomial reciprocal", 0, binomial},
      {"fig-m4", "M4 costs about 2 rotations", 0, [] { return rotations_claim(m4_expr(), 2); }},
      {"fig-m6", "M6 costs about 40 rotations", 0, [] { return rotations_claim(m6_expr(), 40); }},
      {"fig-m8", "M8 costs about 120 rotations", 0, [] { return rotations_claim(m8_expr(), 120); }},
      {"fig-trend", "rotation count grows with x", 0, monotone_rotations},
      {"fig-slicing", "slicing trades rotations for error", 0, slicing_tradeoff},
  };
}

}  // namespace
}  // namespace rusarith

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string only;
  app.add_option("--only", only, "Run a single criterion (1-10 or fig-*)");
  CLI11_PARSE(app, argc, argv);

  bool all_ok = true, ran = false;
  for (const auto& c : rusarith::criteria()) {
    if (!only.empty() && c.id != only) continue;
    ran = true;
    auto t0 = std::chrono::steady_clock::now();
    rusarith::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && dt > c.budget_s) {
      o.pass = false;
      o.detail += "; over time budget of " + rusarith::fmt("%g s", c.budget_s);
    }
    std::printf("%s [%s] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), o.detail.c_str(),
                dt);
    std::fflush(stdout);
    all_ok = all_ok && o.pass;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion named '%s'\n", only.c_str());
    return 2;
  }
  return all_ok ? 0 : 1;
}
