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

#include "rusarith/angles.hpp"
#include "rusarith/expr.hpp"
#include "rusarith/series.hpp"

namespace rusarith {

inline const double kGamma2 = std::asin(1 / std::sqrt(6.0));
inline const double kGamma3 = std::asin(1 / std::sqrt(15.0));

namespace detail {
inline RusExpr x(int i) { return RusExpr::affine(i); }
inline RusExpr c(double v) { return RusExpr::constant(v); }
}  // namespace detail

// ---------------------------------------------------------------------------
// Multiplication formulas in phi1 = input 0, phi2 = input 1.

inline RusExpr m4_expr() { return RusExpr::par({detail::x(0), detail::x(1)}); }

inline RusExpr m6_expr() {
  using namespace detail;
  auto third = RusExpr::sum({c(kPi / 4), RusExpr::neg(RusExpr::gb({c(kGamma2), x(0)})),
                             RusExpr::neg(RusExpr::gb({c(kGamma2), x(1)}))});
  return RusExpr::par({x(0), x(1), std::move(third)});
}

// Eighth order. The fourth PAR input must cancel -a^4/15 - b^4/15 + a^2 b^2/6
// at fourth order, which takes GB(g3, GB(phi)) rather than GB(g3, phi).
inline RusExpr m8_expr() {
  using namespace detail;
  auto third = RusExpr::sum({c(kPi / 4), RusExpr::neg(RusExpr::gb({c(kGamma2), x(0)})),
                             RusExpr::neg(RusExpr::gb({c(kGamma2), x(1)}))});
  auto fourth = RusExpr::sum({c(kPi / 4),
                              RusExpr::neg(RusExpr::gb({c(kGamma3), RusExpr::gb({x(0)})})),
                              RusExpr::neg(RusExpr::gb({c(kGamma3), RusExpr::gb({x(1)})})),
                              RusExpr::gb({c(kGamma2), x(0), x(1)})});
  return RusExpr::par({x(0), x(1), std::move(third), std::move(fourth)});
}

// The M8 formula exactly as typeset in the multiplication-formula table.
// Only fourth order; kept for comparison.
inline RusExpr m8_printed_expr() {
  using namespace detail;
  auto third = RusExpr::sum({c(kPi / 4), RusExpr::neg(RusExpr::gb({c(kGamma2), x(0)})),
                             RusExpr::neg(RusExpr::gb({c(kGamma2), x(1)}))});
  auto fourth = RusExpr::sum({c(kPi / 4), RusExpr::neg(RusExpr::gb({c(kGamma3), x(0)})),
                              RusExpr::neg(RusExpr::gb({c(kGamma3), x(1)})),
                              RusExpr::gb({c(kGamma2), x(0), x(1)})});
  return RusExpr::par({x(0), x(1), std::move(third), std::move(fourth)});
}

inline double m4(double a, double b) { return eval_angle(m4_expr(), {a, b}); }
inline double m6(double a, double b) { return eval_angle(m6_expr(), {a, b}); }
inline double m8(double a, double b) { return eval_angle(m8_expr(), {a, b}); }

enum class ProductRegime { BothNearOne, Mixed };

// Products of angles that are not both small, through a small-angle
// multiplier M: phi1 phi2 = -1 + phi1 + phi2 + M(1-phi1, 1-phi2) when both
// are near one, and phi1 - M(phi1, 1-phi2) when phi1 is small, phi2 near one.
inline double big_angle_product(double phi1, double phi2, ProductRegime regime,
                                const RusExpr& multiplier) {
  if (regime == ProductRegime::BothNearOne)
    return -1 + phi1 + phi2 + eval_angle(multiplier, {1 - phi1, 1 - phi2});
  return phi1 - eval_angle(multiplier, {phi1, 1 - phi2});
}

// ---------------------------------------------------------------------------
// Monomials and time slicing.

// Approximates a * x0^i * x1^j to leading order with a single GB/PAR
// circuit, for |a| <= 1 and i + j >= 1.
inline RusExpr unit_monomial_expr(double a, int i, int j) {
  using namespace detail;
  if (std::abs(a) > 1) throw std::domain_error("unit_monomial_expr: |a| > 1");
  if (i < 0 || j < 0 || i + j < 1) throw std::invalid_argument("unit_monomial_expr: bad powers");
  if (a == 0) return c(0);
  if (a < 0) return RusExpr::neg(unit_monomial_expr(-a, i, j));
  if (i + j == 1) return RusExpr::affine(i == 1 ? 0 : 1, a, 0);
  std::vector<RusExpr> odd;
  if (i % 2) odd.push_back(x(0));
  if (j % 2) odd.push_back(x(1));
  int ei = i / 2, ej = j / 2;
  if (ei + ej == 0) {
    // x0 x1 only: PAR(x0, x1) has unit coefficient, otherwise scale by tan.
    if (a != 1) odd.push_back(c(std::atan(a)));
    return RusExpr::par(std::move(odd));
  }
  std::vector<RusExpr> g;
  // GB(pi/2, ...) equals GB(...), so a = 1 needs no constant input.
  if (a != 1) g.push_back(c(std::asin(std::sqrt(a))));
  for (int n = 0; n < ei; ++n) g.push_back(x(0));
  for (int n = 0; n < ej; ++n) g.push_back(x(1));
  RusExpr gbnode = RusExpr::gb(std::move(g));
  if (odd.empty()) return gbnode;
  odd.push_back(std::move(gbnode));
  return RusExpr::par(std::move(odd));
}

// a x^b + O(x^{b+2}); |a| > 1 is split into 2^ceil(log2 |a|) summed copies.
inline RusExpr monomial_expr(double a, int b) {
  if (b < 1) throw std::invalid_argument("monomial_expr: power must be positive");
  if (!std::isfinite(a)) throw std::invalid_argument("monomial_expr: non-finite coefficient");
  if (std::abs(a) <= 1) return unit_monomial_expr(a, b, 0);
  int copies = 1 << static_cast<int>(std::ceil(std::log2(std::abs(a))));
  std::vector<RusExpr> parts(copies, unit_monomial_expr(a / copies, b, 0));
  return RusExpr::sum(std::move(parts));
}

// r^b copies of the approximant at x / r.
inline double sliced_monomial_value(double a, int b, double x, int r) {
  if (r < 1) throw std::invalid_argument("sliced_monomial_value: r must be positive");
  return std::pow(r, b) * eval_angle(monomial_expr(a, b), {x / r});
}

// ---------------------------------------------------------------------------
// Taylor-series synthesis (peel the lowest-order term, approximate it by a
// monomial circuit, subtract that circuit's full expansion, repeat).

struct TaylorResult {
  std::vector<RusExpr> terms;
  Series2 residual;
};

// Returns terms whose summed angle matches f through total degree m - 1,
// so the remaining error is O(x^m). A constant offset, if any, comes first.
inline TaylorResult taylor_generate_full(const Series2& f, int arity, int m) {
  if (arity < 1 || arity > 2) throw std::invalid_argument("taylor_generate: arity must be 1 or 2");
  if (m < 1) throw std::invalid_argument("taylor_generate: order must be positive");
  if (m > f.order()) throw std::invalid_argument("taylor_generate: order exceeds series length");
  const double tiny = 1e-14;
  Series2 r = f;
  std::vector<RusExpr> terms;
  if (std::abs(r.at(0, 0)) > tiny) {
    terms.push_back(RusExpr::constant(r.at(0, 0)));
    r.at(0, 0) = 0;
  }
  for (int d = 1; d < m; ++d) {
    for (int i = d; i >= 0; --i) {
      int j = d - i;
      if (arity == 1 && j > 0) continue;
      double a = r.at(i, j);
      if (std::abs(a) <= tiny) continue;
      std::vector<RusExpr> pieces;
      if (std::abs(a) <= 1) {
        pieces.push_back(unit_monomial_expr(a, i, j));
      } else {
        int copies = 1 << static_cast<int>(std::ceil(std::log2(std::abs(a))));
        for (int n = 0; n < copies; ++n) pieces.push_back(unit_monomial_expr(a / copies, i, j));
      }
      for (auto& p : pieces) {
        r -= expr_series(p, f.order());
        terms.push_back(std::move(p));
      }
    }
  }
  if (terms.empty()) terms.push_back(RusExpr::constant(0));
  return {std::move(terms), std::move(r)};
}

inline std::vector<RusExpr> taylor_generate(const Series2& f, int arity, int m) {
  return taylor_generate_full(f, arity, m).terms;
}

// Univariate convenience: coeffs[n] multiplies x^n.
inline std::vector<RusExpr> taylor_generate(const std::vector<double>& coeffs, int m) {
  Series2 f(static_cast<int>(coeffs.size()) - 1);
  for (std::size_t n = 0; n < coeffs.size(); ++n) f.at(static_cast<int>(n), 0) = coeffs[n];
  return taylor_generate(f, 1, m);
}

inline RusExpr sum_of(std::vector<RusExpr> terms) {
  if (terms.size() == 1) return std::move(terms[0]);
  return RusExpr::sum(std::move(terms));
}

}  // namespace rusarith
