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

// Test support: random states and a dense-matrix oracle assembled from
// Kronecker products (qubit 0 is the leftmost factor).

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <complex>
#include <vector>

#include "rusarith/rusarith.hpp"

namespace rusarith::testing {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline StateVector random_state(int n, RngStream& rng) {
  std::vector<cplx> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    // Box-Muller pairs give a Haar-distributed direction.
    double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
    double r = std::sqrt(-2 * std::log(u1));
    a = {r * std::cos(2 * kPi * u2), r * std::sin(2 * kPi * u2)};
  }
  StateVector s(n, std::move(amps));
  s.normalize();
  return s;
}

inline Vec to_eigen(const StateVector& s) {
  Vec v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) v(i) = s[i];
  return v;
}

inline Mat kron_list(const std::vector<Mat>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& op : ops) {
    Mat next(out.rows() * op.rows(), out.cols() * op.cols());
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j) next.block(i * op.rows(), j * op.cols(), op.rows(), op.cols()) = out(i, j) * op;
    out = next;
  }
  return out;
}

inline Mat I2() { return Mat::Identity(2, 2); }
inline Mat X2() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Mat P1() {
  Mat m = Mat::Zero(2, 2);
  m(1, 1) = 1;
  return m;
}

inline Mat on_qubit(int n, int q, const Mat& u) {
  std::vector<Mat> ops(n, I2());
  ops[q] = u;
  return kron_list(ops);
}

// I + (prod_c |1><1|_c) (x) (V - I)_t
inline Mat controlled(int n, const std::vector<int>& controls, int target, const Mat& v) {
  std::vector<Mat> ops(n, I2());
  for (int c : controls) ops[c] = P1();
  ops[target] = v - I2();
  return Mat::Identity(1 << n, 1 << n) + kron_list(ops);
}

inline Mat dense(int n, const GateOp& g) {
  const cplx i1{0, 1};
  return std::visit(
      [&](const auto& op) -> Mat {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, gate::RotX>) {
          Mat u(2, 2);
          u << std::cos(op.angle), -i1 * std::sin(op.angle), -i1 * std::sin(op.angle), std::cos(op.angle);
          return on_qubit(n, op.qubit, u);
        } else if constexpr (std::is_same_v<T, gate::Hadamard>) {
          Mat u(2, 2);
          u << 1, 1, 1, -1;
          return on_qubit(n, op.qubit, u / std::sqrt(2.0));
        } else if constexpr (std::is_same_v<T, gate::PauliX>) {
          return on_qubit(n, op.qubit, X2());
        } else if constexpr (std::is_same_v<T, gate::PauliZ>) {
          Mat u(2, 2);
          u << 1, 0, 0, -1;
          return on_qubit(n, op.qubit, u);
        } else if constexpr (std::is_same_v<T, gate::PhaseS>) {
          Mat u(2, 2);
          u << 1, 0, 0, op.adjoint ? -i1 : i1;
          return on_qubit(n, op.qubit, u);
        } else if constexpr (std::is_same_v<T, gate::CNot>) {
          return controlled(n, {op.control}, op.target, X2());
        } else {
          return controlled(n, op.controls, op.target, std::pow(i1, op.phase_exponent) * X2());
        }
      },
      g);
}

inline Mat rotx(double a) {
  const cplx i1{0, 1};
  Mat u(2, 2);
  u << std::cos(a), -i1 * std::sin(a), -i1 * std::sin(a), std::cos(a);
  return u;
}

// |<a|b>|^2 for single-qubit states.
inline double fidelity(const StateVector& a, const StateVector& b) { return std::norm(overlap(a, b)); }

inline StateVector rotated(const StateVector& s, double angle, int q = 0) {
  StateVector t = s;
  apply_gate(t, gate::RotX{q, angle});
  return t;
}

// Binomial standard deviation of a frequency.
inline double binomial_sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

}  // namespace rusarith::testing
