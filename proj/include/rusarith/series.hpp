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
#include <vector>

#include "rusarith/expr.hpp"

namespace rusarith {

// Bivariate power series truncated at total degree `order`.
class Series2 {
 public:
  explicit Series2(int order = 8) : m_(order), c_((order + 1) * (order + 1), 0.0) {}

  static Series2 constant(double v, int order) {
    Series2 s(order);
    s.at(0, 0) = v;
    return s;
  }
  static Series2 variable(int which, int order) {
    Series2 s(order);
    if (order >= 1) s.at(which == 0 ? 1 : 0, which == 0 ? 0 : 1) = 1;
    return s;
  }

  int order() const { return m_; }
  double& at(int i, int j) { return c_[i * (m_ + 1) + j]; }
  double at(int i, int j) const {
    if (i < 0 || j < 0 || i + j > m_) return 0;
    return c_[i * (m_ + 1) + j];
  }
  double constant_term() const { return at(0, 0); }

  Series2& operator+=(const Series2& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Series2& operator-=(const Series2& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Series2& operator*=(double a) {
    for (auto& v : c_) v *= a;
    return *this;
  }
  friend Series2 operator+(Series2 a, const Series2& b) { return a += b; }
  friend Series2 operator-(Series2 a, const Series2& b) { return a -= b; }
  friend Series2 operator*(Series2 a, double s) { return a *= s; }
  friend Series2 operator*(const Series2& a, const Series2& b) {
    Series2 r(a.m_);
    for (int i = 0; i <= a.m_; ++i)
      for (int j = 0; i + j <= a.m_; ++j) {
        double x = a.at(i, j);
        if (x == 0) continue;
        for (int p = 0; i + p <= a.m_; ++p)
          for (int q = 0; i + j + p + q <= a.m_; ++q) r.at(i + p, j + q) += x * b.at(p, q);
      }
    return r;
  }

  double evaluate(double x, double y) const {
    double s = 0;
    for (int i = 0; i <= m_; ++i)
      for (int j = 0; i + j <= m_; ++j) s += at(i, j) * std::pow(x, i) * std::pow(y, j);
    return s;
  }

  // Sum of |coefficient| over terms of total degree d.
  double degree_weight(int d) const {
    double w = 0;
    for (int i = 0; i <= d; ++i) w += std::abs(at(i, d - i));
    return w;
  }

 private:
  int m_;
  std::vector<double> c_;
};

namespace series {

// f(s0 + u) = sum_n a[n] u^n, composed with a series whose constant is s0.
inline Series2 compose(const std::vector<double>& a, const Series2& s) {
  Series2 u = s;
  u.at(0, 0) = 0;
  Series2 r = Series2::constant(a.back(), s.order());
  for (std::size_t n = a.size() - 1; n-- > 0;) {
    r = r * u;
    r.at(0, 0) += a[n];
  }
  return r;
}

inline std::vector<double> sin_coeffs(double c, int m) {
  std::vector<double> a(m + 1);
  double fact = 1;
  for (int n = 0; n <= m; ++n) {
    if (n) fact *= n;
    double d = (n % 4 == 0) ? std::sin(c) : (n % 4 == 1) ? std::cos(c) : (n % 4 == 2) ? -std::sin(c) : -std::cos(c);
    a[n] = d / fact;
  }
  return a;
}

inline std::vector<double> cos_coeffs(double c, int m) { return sin_coeffs(c + kPi / 2, m); }

// 1/(b0 + u) about u = 0.
inline std::vector<double> recip_coeffs(double b0, int m) {
  if (b0 == 0) throw std::domain_error("series reciprocal of a series with zero constant");
  std::vector<double> a(m + 1);
  double p = 1 / b0;
  for (int n = 0; n <= m; ++n) {
    a[n] = p;
    p *= -1 / b0;
  }
  return a;
}

// atan(w0 + u): integrate 1/(1 + (w0 + u)^2).
inline std::vector<double> atan_coeffs(double w0, int m) {
  // g(u) = 1/(q0 + q1 u + u^2), q0 = 1 + w0^2, q1 = 2 w0.
  double q0 = 1 + w0 * w0, q1 = 2 * w0;
  std::vector<double> g(m + 1, 0.0);
  for (int n = 0; n <= m; ++n) {
    double v = (n == 0) ? 1 : 0;
    if (n >= 1) v -= q1 * g[n - 1];
    if (n >= 2) v -= g[n - 2];
    g[n] = v / q0;
  }
  std::vector<double> a(m + 1);
  a[0] = std::atan(w0);
  for (int n = 1; n <= m; ++n) a[n] = g[n - 1] / n;
  return a;
}

inline Series2 sin(const Series2& s) { return compose(sin_coeffs(s.constant_term(), s.order()), s); }
inline Series2 cos(const Series2& s) { return compose(cos_coeffs(s.constant_term(), s.order()), s); }
inline Series2 recip(const Series2& s) {
  return compose(recip_coeffs(s.constant_term(), s.order()), s);
}
inline Series2 atan(const Series2& s) {
  return compose(atan_coeffs(s.constant_term(), s.order()), s);
}
inline Series2 tan(const Series2& s) { return sin(s) * recip(cos(s)); }

}  // namespace series

// Taylor expansion of the ideal output angle of e in inputs 0 and 1 around
// the origin, truncated at total degree `order`.
inline Series2 expr_series(const RusExpr& e, int order) {
  switch (e.kind()) {
    case NodeKind::Const:
      return Series2::constant(e.offset(), order);
    case NodeKind::Affine: {
      if (e.input() > 1) throw std::invalid_argument("expr_series supports at most two inputs");
      Series2 s = Series2::variable(e.input(), order) * e.scale();
      s.at(0, 0) += e.offset();
      return s;
    }
    case NodeKind::Neg:
      return expr_series(e.child(0), order) * -1.0;
    case NodeKind::Sum: {
      Series2 s(order);
      for (const auto& c : e.children()) s += expr_series(c, order);
      return s;
    }
    case NodeKind::GB: {
      Series2 s2 = Series2::constant(1, order);
      for (const auto& c : e.children()) {
        Series2 sn = series::sin(expr_series(c, order));
        s2 = s2 * sn * sn;
      }
      Series2 one_minus = Series2::constant(1, order) - s2;
      return series::atan(s2 * series::recip(one_minus));
    }
    case NodeKind::PAR: {
      Series2 t = Series2::constant(1, order);
      for (const auto& c : e.children()) t = t * series::tan(expr_series(c, order));
      return series::atan(t);
    }
  }
  return Series2(order);
}

}  // namespace rusarith
