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

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rusarith/angles.hpp"
#include "rusarith/expr.hpp"
#include "rusarith/rng.hpp"
#include "rusarith/statevector.hpp"

namespace rusarith {

enum class CorrectionKind { None, CliffordExpIPi4X, Identity, ReverseRotation };

struct RunTrace {
  // Repetitions of the outermost circuit.
  std::uint64_t attempts = 0;
  // Repetitions of every RUS loop, nested ones included.
  std::uint64_t node_attempts = 0;
  // Input rotations consumed (one per leaf application).
  std::uint64_t leaf_rotations = 0;
  // T gates spent on multi-controlled gates, 4(k-1) per use.
  std::uint64_t multicontrol_tcount = 0;
  std::uint64_t corrections = 0;
  double outcome_angle = 0;
  CorrectionKind last_correction = CorrectionKind::None;
  // Ancilla readout of the last outermost attempt.
  std::vector<int> last_record;
  bool exhausted = false;
};

struct RunResult {
  StateVector state;
  RunTrace trace;
  bool success() const { return !trace.exhausted; }
};

constexpr std::uint64_t kDefaultMaxAttempts = 10000;


// ---------------------------------------------------------------------------
// Unitary blocks. prep(j, qubit, inverse, fresh) applies input rotation j
// (or its inverse) to the given ancilla; fresh means the ancilla is |0>.

template <class Prep>
void gb_block(StateVector& s, const std::vector<int>& anc, int target, bool negate, Prep&& prep) {
  for (std::size_t j = 0; j < anc.size(); ++j) prep(j, anc[j], false, true);
  apply_gate(s, gate::MultiControlledIX{anc, target, negate ? 1 : 3});
  for (std::size_t j = 0; j < anc.size(); ++j) prep(j, anc[j], true, false);
}

// balanced: insert S on anc[0] for even k. Every non-GHZ outcome then has
// equal weight on anc[0] = 0 and 1, which OAA needs; the GHZ branches are
// unchanged because the multi-controlled phase compensates.
inline int par_phase_exponent(int k, bool negate, bool balanced) {
  bool s_gate = balanced && k % 2 == 0;
  int p = (negate ? k + 1 : k - 1) - (s_gate ? 1 : 0);
  return (p % 4 + 4) % 4;
}

template <class Prep>
void par_block(StateVector& s, const std::vector<int>& anc, int target, bool negate, bool fresh,
               Prep&& prep, bool balanced = false) {
  int k = static_cast<int>(anc.size());
  for (std::size_t j = 0; j < anc.size(); ++j) prep(j, anc[j], false, fresh);
  if (balanced && k % 2 == 0) apply_gate(s, gate::PhaseS{anc[0]});
  apply_gate(s, gate::MultiControlledIX{anc, target, par_phase_exponent(k, negate, balanced)});
  apply_ghz_inverse(s, anc);
}

template <class Prep>
void par_block_adjoint(StateVector& s, const std::vector<int>& anc, int target, bool negate,
                       Prep&& prep, bool balanced = false) {
  int k = static_cast<int>(anc.size());
  apply_ghz(s, anc);
  apply_gate(s, gate::MultiControlledIX{anc, target, -par_phase_exponent(k, negate, balanced)});
  if (balanced && k % 2 == 0) apply_gate(s, gate::PhaseS{anc[0], true});
  for (std::size_t j = anc.size(); j-- > 0;) prep(j, anc[j], true, false);
}

// -U~ R_good U~^dag R_init U~ with U~ = H(flag) x PAR. R_good is -1 off
// flag = anc[0] = 0, R_init is -1 off flag = anc = 0. The good branch of U~
// has amplitude exactly 1/2, so three applications rotate it to 1 and leave
// flag and anc[0] in |0> (up to roundoff).
template <class Prep>
void par_oaa_block(StateVector& s, int flag, const std::vector<int>& anc, int target, bool negate,
                   Prep&& prep) {
  const std::vector<int> good{flag, anc[0]};
  std::vector<int> init{flag};
  init.insert(init.end(), anc.begin(), anc.end());
  apply_gate(s, gate::Hadamard{flag});
  par_block(s, anc, target, negate, true, prep, true);
  reflect_about_zero(s, good);
  apply_gate(s, gate::Hadamard{flag});
  par_block_adjoint(s, anc, target, negate, prep, true);
  reflect_about_zero(s, init);
  apply_gate(s, gate::Hadamard{flag});
  par_block(s, anc, target, negate, false, prep, true);
}

inline auto angle_prep(StateVector& s, const std::vector<double>& phis) {
  return [&s, &phis](std::size_t j, int q, bool inverse, bool) {
    apply_gate(s, gate::RotX{q, inverse ? -phis[j] : phis[j]});
  };
}

// ---------------------------------------------------------------------------

struct AttemptsExhausted {};

// Runs expression trees on a register, allocating ancillas as a stack above
// first_free. Each GB/PAR node is repeated until success.
class Executor {
 public:
  Executor(StateVector& s, int first_free, RngStream& rng,
           std::uint64_t max_attempts = kDefaultMaxAttempts)
      : s_(s), next_(first_free), rng_(rng), max_(max_attempts) {}

  // Applies e^{-i f(inputs) X} (or its inverse) to target. Throws
  // AttemptsExhausted if some loop runs out of attempts.
  void apply(const RusExpr& e, const std::vector<double>& inputs, int target, bool negate,
             bool fresh) {
    inputs_ = &inputs;
    node(e, target, negate, fresh, 0);
  }

  RunTrace& trace() { return trace_; }

 private:
  std::vector<int> alloc(int k) {
    if (next_ + k > s_.n_qubits()) throw RegisterError("not enough ancilla qubits");
    std::vector<int> q(k);
    for (int i = 0; i < k; ++i) q[i] = next_ + i;
    next_ += k;
    return q;
  }
  void release(int k) { next_ -= k; }

  void count_attempt(int depth) {
    if (depth == 0) ++trace_.attempts;
    ++trace_.node_attempts;
  }

  std::vector<int> readout(const std::vector<int>& anc) {
    std::vector<int> bits(anc.size());
    for (std::size_t j = 0; j < anc.size(); ++j) bits[j] = measure_reset(s_, anc[j], rng_);
    return bits;
  }

  void node(const RusExpr& e, int target, bool negate, bool fresh, int depth) {
    switch (e.kind()) {
      case NodeKind::Const:
      case NodeKind::Affine: {
        double v = leaf_value(e, *inputs_);
        apply_gate(s_, gate::RotX{target, negate ? -v : v});
        ++trace_.leaf_rotations;
        if (depth == 0) ++trace_.attempts;
        return;
      }
      case NodeKind::Neg:
        node(e.child(0), target, !negate, fresh, depth);
        return;
      case NodeKind::Sum:
        for (std::size_t i = 0; i < e.children().size(); ++i)
          node(e.child(i), target, negate, fresh && i == 0, depth + 1);
        if (depth == 0) ++trace_.attempts;
        return;
      case NodeKind::GB:
        gb(e, target, negate, depth);
        return;
      case NodeKind::PAR:
        if (fresh)
          par_on_zero(e, target, negate, depth);
        else
          par_oaa(e, target, negate, depth);
        return;
    }
  }

  auto child_prep(const RusExpr& e, int depth) {
    return [this, &e, depth](std::size_t j, int q, bool inverse, bool fresh) {
      node(e.child(j), q, inverse, fresh, depth + 1);
    };
  }

  void gb(const RusExpr& e, int target, bool negate, int depth) {
    int k = static_cast<int>(e.children().size());
    for (std::uint64_t a = 0;; ++a) {
      if (a == max_) throw AttemptsExhausted{};
      count_attempt(depth);
      auto anc = alloc(k);
      gb_block(s_, anc, target, negate, child_prep(e, depth));
      trace_.multicontrol_tcount += 4 * (k - 1);
      auto bits = readout(anc);
      release(k);
      if (depth == 0) trace_.last_record = bits;
      bool ok = std::all_of(bits.begin(), bits.end(), [](int b) { return b == 0; });
      if (ok) return;
      // Failure applied e^{+i pi X/4} (e^{-i pi X/4} when negated).
      apply_gate(s_, gate::RotX{target, negate ? -kPi / 4 : kPi / 4});
      ++trace_.corrections;
      if (depth == 0) trace_.last_correction = CorrectionKind::CliffordExpIPi4X;
    }
  }

  void par_on_zero(const RusExpr& e, int target, bool negate, int depth) {
    int k = static_cast<int>(e.children().size());
    for (std::uint64_t a = 0;; ++a) {
      if (a == max_) throw AttemptsExhausted{};
      count_attempt(depth);
      auto anc = alloc(k);
      par_block(s_, anc, target, negate, true, child_prep(e, depth));
      trace_.multicontrol_tcount += 4 * (k - 1);
      auto bits = readout(anc);
      release(k);
      if (depth == 0) trace_.last_record = bits;
      bool rest_zero = std::all_of(bits.begin() + 1, bits.end(), [](int b) { return b == 0; });
      if (!rest_zero) {
        if (depth == 0) trace_.last_correction = CorrectionKind::Identity;
        continue;
      }
      if (bits[0] == 1) {
        // Wrong direction; Z flips the rotation on |0>.
        apply_gate(s_, gate::PauliZ{target});
        ++trace_.corrections;
        if (depth == 0) trace_.last_correction = CorrectionKind::ReverseRotation;
      } else if (depth == 0) {
        trace_.last_correction = CorrectionKind::None;
      }
      return;
    }
  }

  void par_oaa(const RusExpr& e, int target, bool negate, int depth) {
    int k = static_cast<int>(e.children().size());
    for (std::uint64_t a = 0;; ++a) {
      if (a == max_) throw AttemptsExhausted{};
      count_attempt(depth);
      auto flag = alloc(1);
      auto anc = alloc(k);
      par_oaa_block(s_, flag[0], anc, target, negate, child_prep(e, depth));
      trace_.multicontrol_tcount += 3 * 4 * (k - 1);
      // Amplification leaves both flags in |0> with certainty.
      int f0 = measure_reset(s_, flag[0], rng_);
      auto bits = readout(anc);
      release(k + 1);
      if (f0 != 0 || bits[0] != 0) throw ImpossibleBranch("amplification left a flag set");
      if (depth == 0) trace_.last_record = bits;
      bool ok = std::all_of(bits.begin(), bits.end(), [](int b) { return b == 0; });
      if (ok) {
        if (depth == 0) trace_.last_correction = CorrectionKind::None;
        return;
      }
      if (depth == 0) trace_.last_correction = CorrectionKind::Identity;
    }
  }

  StateVector& s_;
  int next_;
  RngStream& rng_;
  std::uint64_t max_;
  const std::vector<double>* inputs_ = nullptr;
  RunTrace trace_;
};

namespace detail {

inline RusExpr const_node(NodeKind kind, const std::vector<double>& phis) {
  if (phis.empty()) throw std::invalid_argument("primitive needs at least one angle");
  std::vector<RusExpr> kids;
  for (double p : phis) kids.push_back(RusExpr::constant(p));
  return kind == NodeKind::GB ? RusExpr::gb(std::move(kids)) : RusExpr::par(std::move(kids));
}

inline RunResult run_on(const RusExpr& e, const std::vector<double>& inputs, StateVector state,
                        int target, bool fresh, RngStream& rng, std::uint64_t max_attempts) {
  state.check_qubit(target);
  int base = state.n_qubits();
  int extra = ancilla_width(e, fresh);
  state.append_zero_qubits(extra);
  Executor ex(state, base, rng, max_attempts);
  try {
    ex.apply(e, inputs, target, false, fresh);
  } catch (const AttemptsExhausted&) {
    ex.trace().exhausted = true;
  }
  RunTrace trace = std::move(ex.trace());
  if (!trace.exhausted) trace.outcome_angle = eval_angle(e, inputs);
  try {
    state.drop_zero_qubits(extra);
  } catch (const RegisterError&) {
    // Exhaustion inside a nested loop can leave ancillas dirty; keep them.
  }
  return {std::move(state), std::move(trace)};
}

}  // namespace detail

// Runs e on a fresh |0> target.
inline RunResult run_expr(const RusExpr& e, const std::vector<double>& inputs, RngStream& rng,
                          std::uint64_t max_attempts = kDefaultMaxAttempts) {
  return detail::run_on(e, inputs, new_state(1), 0, true, rng, max_attempts);
}

// Runs e on target_qubit of an arbitrary state.
inline RunResult run_expr_on(const RusExpr& e, const std::vector<double>& inputs,
                             const StateVector& target_state, int target_qubit, RngStream& rng,
                             std::uint64_t max_attempts = kDefaultMaxAttempts) {
  return detail::run_on(e, inputs, target_state, target_qubit, false, rng, max_attempts);
}

inline RunResult run_gb(const std::vector<double>& phis, const StateVector& target_state,
                        int target_qubit, RngStream& rng,
                        std::uint64_t max_attempts = kDefaultMaxAttempts) {
  return detail::run_on(detail::const_node(NodeKind::GB, phis), {}, target_state, target_qubit,
                        false, rng, max_attempts);
}

inline RunResult run_par_on_zero(const std::vector<double>& phis, RngStream& rng,
                                 std::uint64_t max_attempts = kDefaultMaxAttempts) {
  return detail::run_on(detail::const_node(NodeKind::PAR, phis), {}, new_state(1), 0, true, rng,
                        max_attempts);
}

inline RunResult run_par_oaa(const std::vector<double>& phis, const StateVector& target_state,
                             int target_qubit, RngStream& rng,
                             std::uint64_t max_attempts = kDefaultMaxAttempts) {
  return detail::run_on(detail::const_node(NodeKind::PAR, phis), {}, target_state, target_qubit,
                        false, rng, max_attempts);
}

// ---------------------------------------------------------------------------
// Gearbox with offline rotations only (two prepared ancillas, Cliffords
// online). Qubits: 0 and 1 hold e^{-i phi X}|0>, 2 is the target.

enum class NonRusOutcome { Success, ReverseRotation, Clifford };

struct NonRusResult {
  NonRusOutcome outcome;
  StateVector state;  // target only
  RunTrace trace;
};

inline void nonrus_gb_block(StateVector& s, double phi, int top, int mid, int target) {
  apply_gate(s, gate::RotX{top, phi});
  apply_gate(s, gate::RotX{mid, phi});
  apply_gate(s, gate::MultiControlledIX{{mid}, target, 3});
  apply_gate(s, gate::CNot{top, mid});
  apply_gate(s, gate::Hadamard{top});
}

inline NonRusResult run_nonrus_gb(double phi, const StateVector& target_state, RngStream& rng) {
  if (target_state.n_qubits() != 1) throw RegisterError("non-RUS gearbox acts on one target qubit");
  StateVector s(3);
  s[0] = target_state[0];
  s[1] = target_state[1];
  nonrus_gb_block(s, phi, 0, 1, 2);
  RunTrace t;
  t.attempts = 1;
  t.node_attempts = 1;
  t.leaf_rotations = 2;
  int top = measure_reset(s, 0, rng);
  int mid = measure_reset(s, 1, rng);
  t.last_record = {top, mid};
  NonRusOutcome out;
  double g = gb_angle(phi);
  if (mid == 1) {
    out = NonRusOutcome::Clifford;
    t.last_correction = CorrectionKind::CliffordExpIPi4X;
    t.outcome_angle = top ? -kPi / 4 : kPi / 4;
  } else if (top == 1) {
    out = NonRusOutcome::Success;
    t.outcome_angle = g;
  } else {
    out = NonRusOutcome::ReverseRotation;
    t.last_correction = CorrectionKind::ReverseRotation;
    t.outcome_angle = -g;
  }
  StateVector tgt(1, {s[0], s[1]});
  return {out, std::move(tgt), t};
}

inline NonRusResult run_nonrus_gb(double phi, RngStream& rng) {
  return run_nonrus_gb(phi, new_state(1), rng);
}

inline double nonrus_gb_success_prob(double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  return 0.5 * (c * c * c * c + s * s * s * s);
}

}  // namespace rusarith
