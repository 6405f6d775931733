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
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace rusarith {

constexpr double kPi = std::numbers::pi;

class AngleDomainError : public std::domain_error {
 public:
  explicit AngleDomainError(const std::string& what) : std::domain_error(what) {}
};

namespace detail {
inline void require_nonempty(const std::vector<double>& phis, const char* who) {
  if (phis.empty()) throw std::invalid_argument(std::string(who) + ": empty angle list");
}
inline double sin2_product(const std::vector<double>& phis) {
  double s2 = 1;
  for (double p : phis) s2 *= std::sin(p) * std::sin(p);
  return s2;
}
inline double cos2_product(const std::vector<double>& phis) {
  double c2 = 1;
  for (double p : phis) c2 *= std::cos(p) * std::cos(p);
  return c2;
}
}  // namespace detail

// arctan(tan^2(arcsin(prod |sin phi|)))
inline double gb_angle(const std::vector<double>& phis) {
  detail::require_nonempty(phis, "gb_angle");
  double s2 = detail::sin2_product(phis);
  return std::atan2(s2, 1 - s2);
}

inline double gb_angle(double phi) { return gb_angle(std::vector<double>{phi}); }

// Per-attempt success probability of the gearbox: (1-s^2)^2 + s^4.
inline double gb_success_prob(const std::vector<double>& phis) {
  detail::require_nonempty(phis, "gb_success_prob");
  double s2 = detail::sin2_product(phis);
  return (1 - s2) * (1 - s2) + s2 * s2;
}

inline double par_angle(const std::vector<double>& phis) {
  detail::require_nonempty(phis, "par_angle");
  double t = 1;
  for (double p : phis) {
    double c = std::cos(p);
    if (std::abs(c) < 1e-15) throw AngleDomainError("par_angle: input at a pole of tan");
    t *= std::tan(p);
  }
  return std::atan(t);
}

// Probability that the GHZ measurement lands on either GHZ branch.
inline double par_success_prob(const std::vector<double>& phis) {
  detail::require_nonempty(phis, "par_success_prob");
  return detail::cos2_product(phis) + detail::sin2_product(phis);
}

// Closed form of k nested single-input gearboxes, arctan(tan^{2^k} x).
// Evaluated in log space so large k neither overflows nor underflows early.
inline double gb_iterate(double x, int k) {
  if (k < 0) throw std::invalid_argument("gb_iterate: negative depth");
  if (k == 0) return x;
  if (std::abs(std::cos(x)) < 1e-15) throw AngleDomainError("gb_iterate: input at a pole of tan");
  double t = std::abs(std::tan(x));
  if (t == 0) return 0;
  double e = std::ldexp(std::log(t), k);
  if (e <= 0) return std::atan(std::exp(e));
  return kPi / 2 - std::atan(std::exp(-e));
}

// Next angle in the correction ladder, GB(next) = 2 GB(phi).
inline double correction_angle_next(double phi) {
  double g = gb_angle(phi);
  if (2 * g >= kPi / 2) throw AngleDomainError("correction_angle_next: 2 GB(phi) >= pi/2");
  return std::atan(std::sqrt(std::tan(2 * g)));
}

}  // namespace rusarith
