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
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rusarith/angles.hpp"
#include "rusarith/expr.hpp"
#include "rusarith/synth.hpp"

namespace rusarith {

// Univariate polynomial in y, coefficients[p] multiplies y^p.
struct PolynomialApprox {
  std::vector<double> coefficients;

  double operator()(double y) const {
    double s = 0;
    for (std::size_t p = coefficients.size(); p-- > 0;) s = s * y + coefficients[p];
    return s;
  }
  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

inline void to_json(nlohmann::json& j, const PolynomialApprox& p) {
  j = nlohmann::json{{"coefficients", p.coefficients}};
}
inline void from_json(const nlohmann::json& j, PolynomialApprox& p) {
  j.at("coefficients").get_to(p.coefficients);
}

// Chebyshev approximants to 1/(1-y) on [0, 1/2] with the reference coefficients.
inline PolynomialApprox chebyshev_reciprocal(int order) {
  switch (order) {
    case 2:
      return {{1.012194, .608948, 2.664355}};
    case 4:
      return {{1.000359, .966359, 1.490195, -1.362554, 5.019604}};
    case 6:
      return {{1.000012, .9980208, 1.059785, .336629, 4.386547, -7.295458, 9.456853}};
    default:
      throw std::invalid_argument("chebyshev_reciprocal: order must be 2, 4 or 6");
  }
}

// Truncated Chebyshev series of f on [lo, hi] in the monomial basis,
// computed with Chebyshev-Gauss quadrature.
template <class F>
PolynomialApprox chebyshev_series(F&& f, double lo, double hi, int order, int nodes = 256) {
  std::vector<double> c(order + 1, 0.0);
  for (int k = 0; k < nodes; ++k) {
    double th = kPi * (k + 0.5) / nodes;
    double fy = f(lo + (hi - lo) * (std::cos(th) + 1) / 2);
    for (int n = 0; n <= order; ++n) c[n] += 2.0 / nodes * fy * std::cos(n * th);
  }
  c[0] /= 2;
  // T_n(t) in monomials of t, then t = a y + b.
  std::vector<std::vector<double>> T{{1.0}, {0.0, 1.0}};
  for (int n = 2; n <= order; ++n) {
    std::vector<double> t(n + 1, 0.0);
    for (std::size_t i = 0; i < T[n - 1].size(); ++i) t[i + 1] += 2 * T[n - 1][i];
    for (std::size_t i = 0; i < T[n - 2].size(); ++i) t[i] -= T[n - 2][i];
    T.push_back(t);
  }
  std::vector<double> in_t(order + 1, 0.0);
  for (int n = 0; n <= order; ++n)
    for (std::size_t i = 0; i < T[n].size(); ++i) in_t[i] += c[n] * T[n][i];
  double a = 2 / (hi - lo), b = -(hi + lo) / (hi - lo);
  std::vector<double> out(order + 1, 0.0);
  // sum_i in_t[i] (a y + b)^i
  std::vector<double> pw{1.0};
  for (int i = 0; i <= order; ++i) {
    for (std::size_t q = 0; q < pw.size(); ++q) out[q] += in_t[i] * pw[q];
    std::vector<double> nx(pw.size() + 1, 0.0);
    for (std::size_t q = 0; q < pw.size(); ++q) {
      nx[q] += b * pw[q];
      nx[q + 1] += a * pw[q];
    }
    pw = nx;
  }
  return {out};
}

struct ApproxError {
  double max_abs = 0;
  double max_rel = 0;
  double argmax_abs = 0;
};

inline ApproxError reciprocal_error(const PolynomialApprox& p, int grid = 20001) {
  ApproxError e;
  for (int i = 0; i < grid; ++i) {
    double y = 0.5 * i / (grid - 1);
    double exact = 1 / (1 - y);
    double d = std::abs(p(y) - exact);
    if (d > e.max_abs) {
      e.max_abs = d;
      e.argmax_abs = y;
    }
    e.max_rel = std::max(e.max_rel, d / exact);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Squaring identities: alpha x^2 up to O(x^8) from three gearboxes.

struct SquaringAngles {
  double c1, c2, c3;
};

inline SquaringAngles squaring_angles(double alpha) {
  double q2 = alpha * alpha - alpha / 3;
  double q3 = 2 * alpha * alpha * alpha / 3 - 8 * alpha / 45;
  if (alpha <= 0 || alpha > 1 || q2 < 0 || q2 > 1 || q3 < -1e-15 || q3 > 1)
    throw AngleDomainError("squaring_identity: alpha outside [2/sqrt(15), 1]");
  return {std::asin(std::sqrt(alpha)), std::asin(std::sqrt(q2)), std::asin(std::sqrt(std::max(q3, 0.0)))};
}

inline RusExpr squaring_identity_expr(const RusExpr& x, double alpha) {
  auto a = squaring_angles(alpha);
  using detail::c;
  auto first = alpha == 1 ? RusExpr::gb({x}) : RusExpr::gb({x, c(a.c1)});
  return RusExpr::sum({first, RusExpr::neg(RusExpr::gb({x, x, c(a.c2)})),
                       RusExpr::neg(RusExpr::gb({x, x, x, c(a.c3)}))});
}

inline double squaring_identity(double x, double alpha) {
  return eval_angle(squaring_identity_expr(RusExpr::affine(0), alpha), {x});
}

// R2 in y = input 0, rebuilt around the midpoint:
// 2.664355 y^2 = 2.664355 ((y - 1/4)^2 + y/2 - 1/16), with the square
// carried by two unit squaring identities and one alpha = 0.664355 identity.
inline RusExpr assemble_R2() {
  auto p = chebyshev_reciprocal(2).coefficients;
  double q = p[2];
  int whole = static_cast<int>(std::floor(q));
  double frac = q - whole;
  double c1 = p[1] + q / 2;
  double c0 = p[0] - q / 16;
  RusExpr shifted = RusExpr::affine(0, 1, -0.25);
  std::vector<RusExpr> terms{RusExpr::affine(0, c1, c0)};
  for (int i = 0; i < whole; ++i) terms.push_back(squaring_identity_expr(shifted, 1.0));
  if (frac > 0) terms.push_back(squaring_identity_expr(shifted, frac));
  return RusExpr::sum(std::move(terms));
}

// ---------------------------------------------------------------------------
// Binomial method: 1/(1-y) ~ (1+y)(1+y^2)...(1+y^{2^{n-1}}).

inline double binomial_reciprocal_value(double y, int n_stages) {
  if (n_stages < 0) throw std::invalid_argument("binomial: negative stage count");
  return (1 - std::pow(y, std::ldexp(1.0, n_stages))) / (1 - y);
}

inline double binomial_product_literal(double y, int n_stages) {
  double p = 1, w = y;
  for (int j = 0; j < n_stages; ++j) {
    p *= 1 + w;
    w *= w;
  }
  return p;
}

// Relative error against 1/(1-y); equals y^{2^n}.
inline double binomial_error(double y, int n_stages) {
  return std::abs(binomial_reciprocal_value(y, n_stages) * (1 - y) - 1);
}

// Binomial product with every multiplication done by the angle multiplier
// M: squares y^{2^j} = M(w, w), and (1 + u)(1 + w) = 1 + u + w + M(u, w).
inline double binomial_rus_value(double y, int n_stages, const RusExpr& multiplier) {
  double u = 0, w = y;
  for (int j = 0; j < n_stages; ++j) {
    u = u + w + (j == 0 ? 0 : eval_angle(multiplier, {u, w}));
    w = eval_angle(multiplier, {w, w});
  }
  return 1 + u;
}

struct NormalizedInput {
  int shift;
  double y;
};

// a -> (ceil(log2 a), 1 - a 2^{-shift}), so that 1/a = 2^{-shift}/(1-y).
inline NormalizedInput normalize_input(double a, int m_bits = 62) {
  if (!(a > 0)) throw std::invalid_argument("normalize_input: a must be positive");
  if (m_bits < 63 && a >= std::ldexp(1.0, m_bits))
    throw std::invalid_argument("normalize_input: a does not fit in the bit width");
  int shift = static_cast<int>(std::ceil(std::log2(a)));
  // Guard against log2 roundoff at exact powers of two.
  if (std::ldexp(1.0, shift - 1) >= a) --shift;
  if (std::ldexp(1.0, shift) < a) ++shift;
  return {shift, 1 - std::ldexp(a, -shift)};
}

}  // namespace rusarith
