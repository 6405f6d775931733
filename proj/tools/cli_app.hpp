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

// Batch front end. run_cli() is the whole program minus process plumbing so
// that tests can drive it in-process.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "rusarith/rusarith.hpp"

namespace rusarith::cli {

constexpr std::uint64_t kDefaultSeed = 20160301;
constexpr int kSchemaVersion = 1;

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2 };

struct JobConfig {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t trials = 10000;
  std::string format = "json";
  std::string out;
  bool table_mode = false;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using nlohmann::json;

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      v.push_back(parse_scalar(item));
    } catch (const ParseError& e) {
      throw UsageError("bad number '" + item + "' in list: " + e.what());
    }
  }
  return v;
}

inline std::string csv_num(double v) { return fmt_e(v, 6); }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

struct Emitter {
  const JobConfig& cfg;
  std::ostream& fallback;

  void write(const std::string& text) const {
    if (cfg.out.empty() || cfg.out == "-") {
      fallback << text;
      return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + cfg.out + "'");
  }
  void json_doc(json j) const {
    j["schema_version"] = kSchemaVersion;
    write(j.dump(2) + "\n");
  }
};

inline json cost_json(const CostDist& c) { return {{"mean", c.mean}, {"variance", c.variance}}; }

// ---------------------------------------------------------------------------

inline void cmd_reproduce(const JobConfig& cfg, const std::string& table, std::ostream& out) {
  auto cells = reproduce_table(table, cfg.table_mode || table == "reciprocals");
  Emitter em{cfg, out};
  std::size_t matched = 0;
  for (const auto& c : cells) matched += c.match;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "table,row,column,computed,printed,match,note\n";
    for (const auto& c : cells)
      s << c.table << ',' << csv_field(c.row) << ',' << csv_field(c.column) << ',' << csv_num(c.computed) << ','
        << csv_num(c.printed) << ',' << (c.match ? "true" : "false") << ',' << c.note << '\n';
    em.write(s.str());
    return;
  }
  json arr = json::array();
  for (const auto& c : cells)
    arr.push_back({{"row", c.row},
                   {"column", c.column},
                   {"computed", c.computed},
                   {"printed", c.printed},
                   {"match", c.match},
                   {"note", c.note}});
  em.json_doc({{"command", "reproduce"},
               {"table", table},
               {"table_mode", cfg.table_mode},
               {"cells", arr},
               {"matched", matched},
               {"total", cells.size()}});
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string primitive;
  std::string angles;
  std::string expr;
  std::string inputs;
  double max_exhausted_rate = 0.01;
  std::uint64_t max_attempts = kDefaultMaxAttempts;
};

inline RusExpr named_expr(const std::string& name) {
  if (name == "m4") return m4_expr();
  if (name == "m6") return m6_expr();
  if (name == "m8") return m8_expr();
  throw UsageError("unknown multiplier '" + name + "'");
}

inline void cmd_simulate(const JobConfig& cfg, const SimulateArgs& a, std::ostream& out) {
  Emitter em{cfg, out};
  std::vector<double> phis = parse_list(a.angles);
  const std::string& p = a.primitive;

  if (p == "nonrus_gb") {
    if (phis.size() != 1) throw UsageError("nonrus_gb takes exactly one angle");
    auto outcomes = parallel_trials<int>(cfg.trials, [&](std::uint64_t t) {
      RngStream rng(cfg.seed, t);
      return static_cast<int>(run_nonrus_gb(phis[0], rng).outcome);
    });
    std::uint64_t counts[3] = {0, 0, 0};
    for (int o : outcomes) ++counts[o];
    double n = static_cast<double>(cfg.trials);
    double c2 = std::cos(phis[0]) * std::cos(phis[0]), s2 = 1 - c2;
    double ps = nonrus_gb_success_prob(phis[0]);
    double pc = c2 * s2;
    if (cfg.format == "csv") {
      std::ostringstream s;
      s << "outcome,count,frequency,analytic\n";
      s << "success," << counts[0] << ',' << csv_num(counts[0] / n) << ',' << csv_num(ps) << '\n';
      s << "reverse_rotation," << counts[1] << ',' << csv_num(counts[1] / n) << ',' << csv_num(ps) << '\n';
      s << "clifford," << counts[2] << ',' << csv_num(counts[2] / n) << ',' << csv_num(2 * pc) << '\n';
      em.write(s.str());
    } else {
      em.json_doc({{"command", "simulate"},
                   {"primitive", p},
                   {"angles", phis},
                   {"trials", cfg.trials},
                   {"seed", cfg.seed},
                   {"success_rate", counts[0] / n},
                   {"reverse_rate", counts[1] / n},
                   {"clifford_rate", counts[2] / n},
                   {"analytic_success_prob", ps},
                   {"analytic_reverse_prob", ps},
                   {"analytic_clifford_prob", 2 * pc}});
    }
    return;
  }

  RusExpr e = RusExpr::constant(0);
  std::vector<double> inputs;
  bool fresh = true;
  if (p == "gb" || p == "par" || p == "par_oaa") {
    if (phis.empty()) throw UsageError("--angles is required for " + p);
    e = detail::const_node(p == "gb" ? NodeKind::GB : NodeKind::PAR, phis);
    fresh = p != "par_oaa";
  } else if (p == "m4" || p == "m6" || p == "m8") {
    if (phis.size() == 1) phis.push_back(phis[0]);
    if (phis.size() != 2) throw UsageError(p + " takes one or two angles");
    e = named_expr(p);
    inputs = phis;
  } else if (p == "expr") {
    if (a.expr.empty()) throw UsageError("--expr is required for primitive 'expr'");
    e = parse_expr(a.expr);
    inputs = parse_list(a.inputs);
    if (static_cast<int>(inputs.size()) < arity(e)) throw UsageError("--inputs shorter than the expression arity");
  } else {
    throw UsageError("unknown primitive '" + p + "'");
  }

  struct Sample {
    double rotations, attempts, tcount;
    bool first, exhausted;
  };
  auto samples = parallel_trials<Sample>(cfg.trials, [&](std::uint64_t t) {
    RngStream rng(cfg.seed, t);
    RunResult r = fresh ? run_expr(e, inputs, rng, a.max_attempts)
                        : run_expr_on(e, inputs, new_state(1), 0, rng, a.max_attempts);
    return Sample{double(r.trace.leaf_rotations), double(r.trace.attempts),
                  double(r.trace.leaf_rotations + r.trace.multicontrol_tcount), r.trace.attempts == 1,
                  r.trace.exhausted};
  });
  std::vector<double> rot, att;
  std::uint64_t first = 0, exhausted = 0;
  std::map<long, std::uint64_t> hist;
  for (const auto& s : samples) {
    if (s.exhausted) {
      ++exhausted;
      continue;
    }
    rot.push_back(s.rotations);
    att.push_back(s.attempts);
    first += s.first;
    ++hist[static_cast<long>(s.rotations)];
  }
  auto rs = sample_stats(rot), as = sample_stats(att);
  CostDist analytic = expr_cost(e, inputs, CostModel::rotations(), fresh);
  double p_success = std::numeric_limits<double>::quiet_NaN();
  if (e.kind() == NodeKind::GB || e.kind() == NodeKind::PAR) {
    std::vector<double> vals;
    for (const auto& c : e.children()) vals.push_back(eval_angle(c, inputs));
    p_success = e.kind() == NodeKind::GB ? gb_success_prob(vals) : par_success_prob(vals);
  }
  double n = static_cast<double>(cfg.trials);
  double exhausted_rate = exhausted / n;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "rotations,count,fraction\n";
    for (auto [k, c] : hist) s << k << ',' << c << ',' << csv_num(c / n) << '\n';
    em.write(s.str());
  } else {
    json h = json::array();
    for (auto [k, c] : hist) h.push_back({{"rotations", k}, {"count", c}});
    em.json_doc({{"command", "simulate"},
                 {"primitive", p},
                 {"expr", to_string(e)},
                 {"inputs", inputs},
                 {"trials", cfg.trials},
                 {"seed", cfg.seed},
                 {"angle", eval_angle(e, inputs)},
                 {"success_rate_first_attempt", first / n},
                 {"analytic_success_prob", p_success},
                 {"mean_attempts", as.mean},
                 {"rotations", {{"mean", rs.mean}, {"variance", rs.variance}, {"stderr", rs.mean_stderr()}}},
                 {"analytic_rotations", cost_json(analytic)},
                 {"exhausted", exhausted},
                 {"exhausted_rate", exhausted_rate},
                 {"histogram", h}});
  }
  if (exhausted_rate > a.max_exhausted_rate)
    throw std::domain_error("exhaustion rate " + std::to_string(exhausted_rate) + " above threshold");
}

// ---------------------------------------------------------------------------

struct SqwaveArgs {
  std::string f = "reciprocal";
  std::string interval = "0,0.5";
  int n = 71;
  int k = 8;
  double padding = -1;
  int points = 2001;
  std::string fit_out;
};

inline std::function<double(double)> parse_function(const std::string& spec, SquareWaveFit* basis_ref) {
  if (spec == "reciprocal") return [](double y) { return 1 / (1 - y); };
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "poly") {
    auto c = parse_list(arg);
    if (c.empty()) throw UsageError("poly: needs coefficients");
    return [c](double x) {
      double v = 0;
      for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
      return v;
    };
  }
  if (kind == "basis") {
    int j = std::stoi(arg);
    if (j < 1) throw UsageError("basis index starts at 1");
    return [basis_ref, j](double x) {
      if (j > static_cast<int>(basis_ref->size())) throw UsageError("basis index beyond N");
      return square_wave_basis(x, basis_ref->periods[j - 1], basis_ref->k, basis_ref->origin());
    };
  }
  if (kind == "mesh") {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read mesh file '" + arg + "'");
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto v = parse_list(line);
      if (v.size() != 2) throw UsageError("mesh lines must be 'x,y'");
      pts.emplace_back(v[0], v[1]);
    }
    if (pts.size() < 2) throw UsageError("mesh needs at least two points");
    std::sort(pts.begin(), pts.end());
    return [pts](double x) {
      auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(x, -HUGE_VAL));
      if (it == pts.begin()) it = pts.begin() + 1;
      if (it == pts.end()) it = pts.end() - 1;
      auto [x1, y1] = *it;
      auto [x0, y0] = *(it - 1);
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    };
  }
  throw UsageError("unknown function spec '" + spec + "'");
}

inline void cmd_sqwave(const JobConfig& cfg, const SqwaveArgs& a, std::ostream& out) {
  auto iv = parse_list(a.interval);
  if (iv.size() != 2 || !(iv[1] > iv[0])) throw UsageError("--interval must be 'lo,hi' with lo < hi");
  if (a.points < 2) throw UsageError("--points must be at least 2");
  double pad = a.padding < 0 ? default_padding(iv[0], iv[1]) : a.padding;
  // The basis spec needs the grid geometry before the fit exists.
  SquareWaveFit geometry;
  if (a.f.rfind("basis:", 0) == 0) {
    geometry = square_wave_fit([](double) { return 1.0; }, iv[0], iv[1], a.n, a.k, pad);
  }
  auto f = parse_function(a.f, &geometry);
  SquareWaveFit fit = square_wave_fit(f, iv[0], iv[1], a.n, a.k, pad);
  FitErrorProfile prof = square_wave_error(fit, f, a.points);
  if (!a.fit_out.empty()) {
    std::ofstream fo(a.fit_out);
    if (!fo) throw std::runtime_error("cannot open '" + a.fit_out + "'");
    json j = fit;
    j["schema_version"] = kSchemaVersion;
    fo << j.dump(2) << "\n";
  }
  Emitter em{cfg, out};
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "x,value,exact,rel_error\n";
    for (std::size_t i = 0; i < prof.x.size(); ++i)
      s << csv_num(prof.x[i]) << ',' << csv_num(prof.value[i]) << ',' << csv_num(prof.exact[i]) << ','
        << csv_num(prof.rel_error[i]) << '\n';
    em.write(s.str());
    return;
  }
  json err = json::array();
  for (std::size_t i = 0; i < prof.x.size(); ++i)
    err.push_back({{"x", prof.x[i]}, {"value", prof.value[i]}, {"rel_error", prof.rel_error[i]}});
  em.json_doc({{"command", "sqwave"},
               {"function", a.f},
               {"seed", cfg.seed},
               {"fit", fit},
               {"rcond", fit.rcond},
               {"residual", fit.residual},
               {"max_rel_error", prof.max_rel},
               {"mean_rel_error", prof.mean_rel},
               {"profile", err}});
}

// ---------------------------------------------------------------------------

struct CostArgs {
  std::string what;
  std::string spec;
  std::string inputs;
  std::string angles;
  double rotation_cost = 1;
  double synthesis_eps = 0;
  bool no_multicontrol = false;
  bool nonfresh = false;
  std::string method;
  int n = 0;
  double kappa = 1, eps = 0.5, delta = 0.25, n1 = 0, n2 = 0;
  std::string which = "m4";
};

inline void cmd_cost(const JobConfig& cfg, const CostArgs& a, std::ostream& out) {
  Emitter em{cfg, out};
  auto rotation = a.synthesis_eps > 0 ? RotationCostModel::synthesis(a.synthesis_eps)
                                      : RotationCostModel::constant(a.rotation_cost);
  CostModel model{rotation, !a.no_multicontrol, 1};

  auto emit_dist = [&](const std::string& kind, const CostDist& c, json extra) {
    if (cfg.format == "csv") {
      em.write("kind,mean,variance\n" + kind + "," + csv_num(c.mean) + "," + csv_num(c.variance) + "\n");
      return;
    }
    extra["command"] = "cost";
    extra["kind"] = kind;
    extra["mean"] = c.mean;
    extra["variance"] = c.variance;
    em.json_doc(extra);
  };

  if (a.what == "expr") {
    if (a.spec.empty()) throw UsageError("cost expr needs an expression spec");
    RusExpr e = parse_expr(a.spec);
    auto in = parse_list(a.inputs);
    if (static_cast<int>(in.size()) < arity(e)) throw UsageError("--inputs shorter than the expression arity");
    emit_dist("expr", expr_cost(e, in, model, !a.nonfresh), {{"expr", to_string(e)}, {"inputs", in}});
  } else if (a.what == "gb" || a.what == "par") {
    auto phis = parse_list(a.angles);
    if (phis.empty()) throw UsageError("--angles is required");
    auto c = a.what == "gb" ? gb_tcount(phis, model) : par_tcount(phis, model);
    emit_dist(a.what, c, {{"angles", phis}});
  } else if (a.what == "baseline") {
    if (a.method.empty() || a.n < 2) throw UsageError("baseline needs --method and --n >= 2");
    BaselineReport r = baseline_cost(parse_method(a.method), a.n, cfg.table_mode);
    if (cfg.format == "csv") {
      em.write("method,n,tcount,qubits,mode\n" + r.method + "," + std::to_string(r.n) + "," + csv_num(r.tcount) +
               "," + std::to_string(r.qubits) + "," + r.mode + "\n");
    } else {
      em.json_doc({{"command", "cost"},
                   {"kind", "baseline"},
                   {"method", r.method},
                   {"n", r.n},
                   {"tcount", r.tcount},
                   {"qubits", r.qubits},
                   {"mode", r.mode}});
    }
  } else if (a.what == "cache") {
    CacheCost c = cache_cost(a.kappa, a.eps, a.delta, a.n1, a.n2);
    if (cfg.format == "csv") {
      em.write("qubits,rotations\n" + std::to_string(c.qubits) + "," + csv_num(c.rotations) + "\n");
    } else {
      em.json_doc({{"command", "cost"}, {"kind", "cache"}, {"qubits", c.qubits}, {"rotations", c.rotations}});
    }
  } else if (a.what == "multiplier") {
    if (a.n < 1) throw UsageError("multiplier needs --n");
    auto c = multiplier_rus_cost(named_expr(a.which), a.n);
    if (cfg.format == "csv") {
      em.write("which,n,r,oaa,tcount,qubits\n" + a.which + "," + std::to_string(a.n) + "," + std::to_string(c.r) +
               "," + (c.oaa ? "true" : "false") + "," + csv_num(c.tcount) + "," + std::to_string(c.qubits) + "\n");
    } else {
      em.json_doc({{"command", "cost"},
                   {"kind", "multiplier"},
                   {"which", a.which},
                   {"n", a.n},
                   {"slices", c.r},
                   {"oaa", c.oaa},
                   {"approx_error", c.approx_error},
                   {"synth_rotations", c.synth_rotations},
                   {"tcount", c.tcount},
                   {"qubits", c.qubits}});
    }
  } else {
    throw UsageError("unknown cost kind '" + a.what + "'");
  }
}

// ---------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rusarith: repeat-until-success arithmetic toolkit", "rusarith"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read key=value options from a file (flags override it)");
  JobConfig cfg;
  app.add_option("--seed", cfg.seed, "Base RNG seed")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", cfg.out, "Output file (default: stdout)");
  app.add_flag("--table-mode", cfg.table_mode, "Use the formula variants that match the printed tables");

  std::string table;
  auto* rep = app.add_subcommand("reproduce", "Recompute a reference table next to its printed values");
  rep->add_option("table", table, "multerror | cheb | multiplier | reciprocals")
      ->required()
      ->check(CLI::IsMember({"multerror", "cheb", "multiplier", "reciprocals"}));

  SimulateArgs sim;
  auto* simc = app.add_subcommand("simulate", "Monte Carlo runs of a primitive or expression");
  simc->add_option("primitive", sim.primitive, "gb | par | par_oaa | nonrus_gb | m4 | m6 | m8 | expr")->required();
  simc->add_option("--angles", sim.angles, "Comma-separated input angles");
  simc->add_option("--expr", sim.expr, "Expression spec for primitive 'expr'");
  simc->add_option("--inputs", sim.inputs, "Comma-separated expression inputs");
  simc->add_option("--max-attempts", sim.max_attempts, "Attempt cap per RUS loop")->check(CLI::PositiveNumber);
  simc->add_option("--max-exhausted-rate", sim.max_exhausted_rate, "Fail (exit 2) above this exhaustion rate");

  SqwaveArgs sq;
  auto* sqc = app.add_subcommand("sqwave", "Square-wave fit and relative-error profile");
  sqc->add_option("--f", sq.f, "reciprocal | poly:c0,c1,... | basis:j | mesh:FILE")->capture_default_str();
  sqc->add_option("--interval", sq.interval, "Fit interval lo,hi")->capture_default_str();
  sqc->add_option("--N", sq.n, "Number of square waves")->check(CLI::Range(1, kMaxSquareWaves))->capture_default_str();
  sqc->add_option("--k", sq.k, "Gearbox recursion depth")->check(CLI::Range(0, 12))->capture_default_str();
  sqc->add_option("--padding", sq.padding, "Padding on each side (default 0.2 * width)");
  sqc->add_option("--points", sq.points, "Evaluation grid size")->capture_default_str();
  sqc->add_option("--fit-out", sq.fit_out, "Also write the fit as JSON to this file");

  CostArgs ca;
  auto* costc = app.add_subcommand("cost", "Analytic cost of an expression, primitive or baseline");
  costc->add_option("kind", ca.what, "expr | gb | par | baseline | cache | multiplier")->required();
  costc->add_option("spec", ca.spec, "Expression spec (kind = expr)");
  costc->add_option("--inputs", ca.inputs, "Expression inputs");
  costc->add_option("--angles", ca.angles, "Primitive angles");
  costc->add_option("--rotation-cost", ca.rotation_cost, "Constant cost per rotation");
  costc->add_option("--synthesis-eps", ca.synthesis_eps, "Charge 1.15 log2(1/eps) per rotation");
  costc->add_flag("--no-multicontrol", ca.no_multicontrol, "Do not charge multi-controlled gates");
  costc->add_flag("--nonfresh", ca.nonfresh, "Target is not |0> (PAR runs with amplification)");
  costc->add_option("--method", ca.method, "carry_ripple | table_lookup_mult | euclid | newton | table_lookup_recip");
  costc->add_option("--n", ca.n, "Bit width");
  costc->add_option("--kappa", ca.kappa, "Condition number");
  costc->add_option("--eps", ca.eps, "Target error");
  costc->add_option("--delta", ca.delta, "Failure probability");
  costc->add_option("--n1", ca.n1, "Rotations outside the cached part");
  costc->add_option("--n2", ca.n2, "Rotations per cached application");
  costc->add_option("--which", ca.which, "m4 | m6 | m8")->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*rep) cmd_reproduce(cfg, table, out);
    if (*simc) cmd_simulate(cfg, sim, out);
    if (*sqc) cmd_sqwave(cfg, sq, out);
    if (*costc) cmd_cost(cfg, ca, out);
  } catch (const ParseError& e) {
    err << "parse error at position " << e.position() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}

}  // namespace rusarith::cli
