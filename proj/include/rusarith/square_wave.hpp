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
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rusarith/angles.hpp"
#include "rusarith/expr.hpp"

namespace rusarith {

class SingularFit : public std::runtime_error {
 public:
  SingularFit(const std::string& what, double rcond) : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

// Smoothed square wave of period T starting at x0: +1 on (x0, x0 + T/2),
// -1 on (x0 + T/2, x0 + T), sharpening with k.
inline double square_wave_basis(double x, double period, int k, double x0) {
  double phase = (x - x0) * kPi / period + kPi / 4;
  // The gearbox stays defined at the tan pole; its angle there is pi/2.
  if (k > 0 && std::abs(std::cos(phase)) < 1e-15) return 1;
  return 4 / kPi * (gb_iterate(phase, k) - kPi / 4);
}

inline double ideal_square_wave(double x, double period, double x0) {
  double ph = std::fmod((x - x0) / period, 1.0);
  if (ph < 0) ph += 1;
  return ph < 0.5 ? 1.0 : -1.0;
}

struct SquareWaveFit {
  std::vector<double> coefficients;
  std::vector<double> periods;
  std::vector<double> midpoints;
  int k = 8;
  // Target interval; the fit itself runs on [x_min - padding, x_max + padding].
  double x_min = 0, x_max = 1;
  double padding = 0;
  double residual = 0;
  double rcond = 0;

  double origin() const { return x_min - padding; }
  std::size_t size() const { return coefficients.size(); }
};

inline double square_wave_eval(const SquareWaveFit& fit, double x) {
  double s = 0;
  for (std::size_t j = 0; j < fit.size(); ++j)
    s += fit.coefficients[j] * square_wave_basis(x, fit.periods[j], fit.k, fit.origin());
  return s;
}

// Same coefficients with each basis function replaced by its k -> infinity
// limit.
inline double square_wave_eval_ideal(const SquareWaveFit& fit, double x) {
  double s = 0;
  for (std::size_t j = 0; j < fit.size(); ++j)
    s += fit.coefficients[j] * ideal_square_wave(x, fit.periods[j], fit.origin());
  return s;
}

constexpr int kMaxSquareWaves = 512;

inline SquareWaveFit square_wave_fit(const std::function<double(double)>& f, double x_min,
                                     double x_max, int n, int k, double padding) {
  if (n < 1 || n > kMaxSquareWaves)
    throw std::invalid_argument("square_wave_fit: N must be in [1, 512]");
  if (k < 0) throw std::invalid_argument("square_wave_fit: negative recursion depth");
  if (!(x_max > x_min)) throw std::invalid_argument("square_wave_fit: empty interval");
  if (padding < 0) throw std::invalid_argument("square_wave_fit: negative padding");
  SquareWaveFit fit;
  fit.k = k;
  fit.x_min = x_min;
  fit.x_max = x_max;
  fit.padding = padding;
  double lo = x_min - padding, len = x_max - x_min + 2 * padding;
  for (int j = 1; j <= n; ++j) {
    fit.midpoints.push_back(lo + len * (j - 0.5) / n);
    fit.periods.push_back(2 * len * j / n);
  }
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) {
    y(r) = f(fit.midpoints[r]);
    if (!std::isfinite(y(r))) throw std::domain_error("square_wave_fit: f not finite on the interval");
    for (int c = 0; c < n; ++c) A(r, c) = square_wave_basis(fit.midpoints[r], fit.periods[c], k, lo);
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  fit.rcond = lu.rcond();
  if (!(fit.rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "square_wave_fit: singular collocation matrix (rcond ~ " << fit.rcond << ")";
    throw SingularFit(msg.str(), fit.rcond);
  }
  Eigen::VectorXd a = lu.solve(y);
  fit.residual = (A * a - y).norm() / std::max(y.norm(), 1e-300);
  if (!(fit.residual < 1e-8)) throw SingularFit("square_wave_fit: solve residual too large", fit.rcond);
  fit.coefficients.assign(a.data(), a.data() + n);
  return fit;
}

// One fifth of the width; [0, 0.5] becomes [-0.1, 0.6].
inline double default_padding(double x_min, double x_max) { return 0.2 * (x_max - x_min); }

struct FitErrorProfile {
  std::vector<double> x, value, exact, rel_error;
  double max_rel = 0;
  double mean_rel = 0;
};

inline FitErrorProfile square_wave_error(const SquareWaveFit& fit,
                                         const std::function<double(double)>& f, int points) {
  FitErrorProfile p;
  for (int i = 0; i < points; ++i) {
    double x = fit.x_min + (fit.x_max - fit.x_min) * i / (points - 1);
    double v = square_wave_eval(fit, x), e = f(x);
    double r = std::abs(v - e) / std::abs(e);
    p.x.push_back(x);
    p.value.push_back(v);
    p.exact.push_back(e);
    p.rel_error.push_back(r);
    p.max_rel = std::max(p.max_rel, r);
    p.mean_rel += r / points;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Circuit form of one term a S_j: GB(arctan(sqrt(tan 2a)), GB^k(...)) - a,
// with |a| split into equal chunks no larger than max_chunk.

inline std::vector<double> split_coefficient(double a, double max_chunk = kPi / 8) {
  if (!(max_chunk > 0)) throw std::invalid_argument("split_coefficient: bad chunk size");
  int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(a) / max_chunk - 1e-12)));
  return std::vector<double>(pieces, a / pieces);
}

inline RusExpr gb_power_expr(RusExpr inner, int k) {
  for (int i = 0; i < k; ++i) inner = RusExpr::gb({std::move(inner)});
  return inner;
}

inline RusExpr square_wave_expr_term(double a, double period, int k, double x0 = 0,
                                     double max_chunk = kPi / 8) {
  std::vector<RusExpr> parts;
  RusExpr phase = RusExpr::affine(0, kPi / period, kPi / 4 - x0 * kPi / period);
  for (double piece : split_coefficient(a, max_chunk)) {
    double m = std::abs(piece);
    if (2 * m >= kPi / 2) throw std::domain_error("square_wave_expr_term: chunk too large");
    double ctl = std::atan(std::sqrt(std::tan(2 * m)));
    RusExpr term = RusExpr::sum({RusExpr::gb({RusExpr::constant(ctl), gb_power_expr(phase, k)}),
                                 RusExpr::constant(-m)});
    parts.push_back(piece < 0 ? RusExpr::neg(std::move(term)) : std::move(term));
  }
  if (parts.size() == 1) return std::move(parts[0]);
  return RusExpr::sum(std::move(parts));
}

inline void to_json(nlohmann::json& j, const SquareWaveFit& f) {
  j = nlohmann::json{{"coefficients", f.coefficients},
                     {"periods", f.periods},
                     {"midpoints", f.midpoints},
                     {"k", f.k},
                     {"interval", {f.x_min, f.x_max}},
                     {"padding", f.padding}};
}

inline void from_json(const nlohmann::json& j, SquareWaveFit& f) {
  j.at("coefficients").get_to(f.coefficients);
  j.at("periods").get_to(f.periods);
  j.at("midpoints").get_to(f.midpoints);
  j.at("k").get_to(f.k);
  f.x_min = j.at("interval").at(0).get<double>();
  f.x_max = j.at("interval").at(1).get<double>();
  j.at("padding").get_to(f.padding);
}

}  // namespace rusarith
