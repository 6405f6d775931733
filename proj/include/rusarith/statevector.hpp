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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rusarith/rng.hpp"

namespace rusarith {

using cplx = std::complex<double>;

constexpr int kMaxQubits = 14;

class RegisterError : public std::invalid_argument {
 public:
  explicit RegisterError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a measurement branch that should be impossible is requested.
class ImpossibleBranch : public std::domain_error {
 public:
  explicit ImpossibleBranch(const std::string& what) : std::domain_error(what) {}
};

namespace gate {
// e^{-i angle X}
struct RotX {
  int qubit;
  double angle;
};
struct Hadamard {
  int qubit;
};
struct PauliX {
  int qubit;
};
struct PauliZ {
  int qubit;
};
// diag(1, i), or diag(1, -i) when adjoint.
struct PhaseS {
  int qubit;
  bool adjoint = false;
};
struct CNot {
  int control;
  int target;
};
// i^phase_exponent X on target when every control is 1.
struct MultiControlledIX {
  std::vector<int> controls;
  int target;
  int phase_exponent;
};
}  // namespace gate

using GateOp = std::variant<gate::RotX, gate::Hadamard, gate::PauliX, gate::PauliZ,
                            gate::PhaseS, gate::CNot, gate::MultiControlledIX>;

inline cplx i_pow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

// Dense n-qubit register. Qubit 0 is the most significant bit of the
// basis index.
class StateVector {
 public:
  explicit StateVector(int n_qubits) : n_(n_qubits) {
    check_size(n_qubits);
    amps_.assign(std::size_t{1} << n_, cplx{0, 0});
    amps_[0] = 1;
  }

  StateVector(int n_qubits, std::vector<cplx> amps) : n_(n_qubits), amps_(std::move(amps)) {
    check_size(n_qubits);
    if (amps_.size() != (std::size_t{1} << n_)) throw RegisterError("amplitude count is not 2^n");
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  double norm() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    double s = norm();
    if (s == 0) throw ImpossibleBranch("cannot normalize the zero vector");
    for (auto& a : amps_) a /= s;
  }

  std::size_t mask(int q) const {
    check_qubit(q);
    return std::size_t{1} << (n_ - 1 - q);
  }

  void check_qubit(int q) const {
    if (q < 0 || q >= n_)
      throw RegisterError("qubit " + std::to_string(q) + " outside register of " +
                          std::to_string(n_));
  }

  // |psi> -> |psi>|0...0> with k new least significant qubits.
  void append_zero_qubits(int k) {
    if (k == 0) return;
    check_size(n_ + k);
    std::vector<cplx> out(amps_.size() << k, cplx{0, 0});
    for (std::size_t i = 0; i < amps_.size(); ++i) out[i << k] = amps_[i];
    amps_.swap(out);
    n_ += k;
  }

  // Inverse of append_zero_qubits; the dropped qubits must be |0>.
  void drop_zero_qubits(int k, double tol = 1e-10) {
    if (k == 0) return;
    if (k >= n_) throw RegisterError("cannot drop every qubit");
    std::vector<cplx> out(amps_.size() >> k);
    double leak = 0;
    std::size_t low = (std::size_t{1} << k) - 1;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & low)
        leak += std::norm(amps_[i]);
      else
        out[i >> k] = amps_[i];
    }
    if (leak > tol) throw RegisterError("dropped qubits are not in |0>");
    amps_.swap(out);
    n_ -= k;
  }

 private:
  static void check_size(int n) {
    if (n < 1 || n > kMaxQubits)
      throw RegisterError("register too large or empty: " + std::to_string(n) + " qubits");
  }

  int n_;
  std::vector<cplx> amps_;
};

inline StateVector new_state(int n) { return StateVector(n); }

namespace detail {

inline void check_distinct(const StateVector& s, const std::vector<int>& qs) {
  for (std::size_t a = 0; a < qs.size(); ++a) {
    s.check_qubit(qs[a]);
    for (std::size_t b = a + 1; b < qs.size(); ++b)
      if (qs[a] == qs[b]) throw RegisterError("repeated qubit index");
  }
}

struct GateApplier {
  StateVector& s;

  void operator()(const gate::RotX& g) const {
    std::size_t m = s.mask(g.qubit);
    double c = std::cos(g.angle), sn = std::sin(g.angle);
    cplx mis{0, -sn};
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (i & m) continue;
      cplx a = s[i], b = s[i | m];
      s[i] = c * a + mis * b;
      s[i | m] = mis * a + c * b;
    }
  }
  void operator()(const gate::Hadamard& g) const {
    std::size_t m = s.mask(g.qubit);
    const double r = 1 / std::sqrt(2.0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (i & m) continue;
      cplx a = s[i], b = s[i | m];
      s[i] = r * (a + b);
      s[i | m] = r * (a - b);
    }
  }
  void operator()(const gate::PauliX& g) const {
    std::size_t m = s.mask(g.qubit);
    for (std::size_t i = 0; i < s.dim(); ++i)
      if (!(i & m)) std::swap(s[i], s[i | m]);
  }
  void operator()(const gate::PauliZ& g) const {
    std::size_t m = s.mask(g.qubit);
    for (std::size_t i = 0; i < s.dim(); ++i)
      if (i & m) s[i] = -s[i];
  }
  void operator()(const gate::PhaseS& g) const {
    std::size_t m = s.mask(g.qubit);
    cplx ph{0, g.adjoint ? -1.0 : 1.0};
    for (std::size_t i = 0; i < s.dim(); ++i)
      if (i & m) s[i] *= ph;
  }
  void operator()(const gate::CNot& g) const {
    check_distinct(s, {g.control, g.target});
    std::size_t c = s.mask(g.control), t = s.mask(g.target);
    for (std::size_t i = 0; i < s.dim(); ++i)
      if ((i & c) && !(i & t)) std::swap(s[i], s[i | t]);
  }
  void operator()(const gate::MultiControlledIX& g) const {
    std::vector<int> all = g.controls;
    all.push_back(g.target);
    check_distinct(s, all);
    std::size_t cm = 0;
    for (int q : g.controls) cm |= s.mask(q);
    std::size_t t = s.mask(g.target);
    cplx ph = i_pow(g.phase_exponent);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if ((i & cm) != cm || (i & t)) continue;
      cplx a = s[i], b = s[i | t];
      s[i] = ph * b;
      s[i | t] = ph * a;
    }
  }
};

}  // namespace detail

inline void apply_gate(StateVector& s, const GateOp& g) { std::visit(detail::GateApplier{s}, g); }

// CNOTs from qubits[0] onto the others, then H on qubits[0]. Maps GHZ+ to
// |0...0> and GHZ- to |1 0...0>.
inline void apply_ghz_inverse(StateVector& s, const std::vector<int>& qubits) {
  if (qubits.empty()) throw RegisterError("GHZ measurement needs at least one qubit");
  detail::check_distinct(s, qubits);
  for (std::size_t j = 1; j < qubits.size(); ++j) apply_gate(s, gate::CNot{qubits[0], qubits[j]});
  apply_gate(s, gate::Hadamard{qubits[0]});
}

inline void apply_ghz(StateVector& s, const std::vector<int>& qubits) {
  if (qubits.empty()) throw RegisterError("GHZ preparation needs at least one qubit");
  detail::check_distinct(s, qubits);
  apply_gate(s, gate::Hadamard{qubits[0]});
  for (std::size_t j = qubits.size(); j-- > 1;) apply_gate(s, gate::CNot{qubits[0], qubits[j]});
}

inline double prob_zero(const StateVector& s, int qubit) {
  std::size_t m = s.mask(qubit);
  double p = 0;
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (!(i & m)) p += std::norm(s[i]);
  return p;
}

inline cplx overlap(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw RegisterError("overlap of registers with different sizes");
  cplx acc{0, 0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// Branches below this probability are never selected.
constexpr double kImpossible = 1e-15;

// Projects onto qubit = bit and renormalizes. Returns the branch probability.
inline double project(StateVector& s, int qubit, int bit) {
  double p0 = prob_zero(s, qubit);
  double p = bit ? 1 - p0 : p0;
  if (p < kImpossible) throw ImpossibleBranch("projection onto a zero-probability branch");
  std::size_t m = s.mask(qubit);
  double scale = 1 / std::sqrt(p);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    bool one = (i & m) != 0;
    s[i] = (one == static_cast<bool>(bit)) ? s[i] * scale : cplx{0, 0};
  }
  return p;
}

inline int measure(StateVector& s, int qubit, RngStream& rng) {
  double p0 = prob_zero(s, qubit);
  int bit;
  if (p0 < kImpossible)
    bit = 1;
  else if (1 - p0 < kImpossible)
    bit = 0;
  else
    bit = rng.uniform() < p0 ? 0 : 1;
  project(s, qubit, bit);
  return bit;
}

// Measures and returns the qubit to |0>.
inline int measure_reset(StateVector& s, int qubit, RngStream& rng) {
  int bit = measure(s, qubit, rng);
  if (bit) apply_gate(s, gate::PauliX{qubit});
  return bit;
}

// -1 on every basis state where any listed qubit is 1.
inline void reflect_about_zero(StateVector& s, const std::vector<int>& qubits) {
  detail::check_distinct(s, qubits);
  std::size_t m = 0;
  for (int q : qubits) m |= s.mask(q);
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (i & m) s[i] = -s[i];
}

}  // namespace rusarith
