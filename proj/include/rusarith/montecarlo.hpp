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
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace rusarith {

// Evaluates fn(t) for t in [0, trials) on a few threads. Results come back
// indexed by t, so any reduction over them is independent of scheduling.
template <class T, class Fn>
std::vector<T> parallel_trials(std::uint64_t trials, Fn fn, unsigned threads = 0) {
  std::vector<T> out(trials);
  if (threads == 0) threads = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));
  if (threads <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t) out[t] = fn(t);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t t = w; t < trials; t += threads) out[t] = fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct SampleStats {
  std::uint64_t n = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double m4 = 0;        // fourth central moment

  double mean_stderr() const { return std::sqrt(variance / n); }
  // Large-sample standard error of the sample variance.
  double variance_stderr() const {
    double v = variance * (n - 1) / n;
    return std::sqrt(std::max(0.0, m4 - v * v) / n);
  }
};

inline SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= s.n;
  double m2 = 0, m4 = 0;
  for (double x : xs) {
    double d = (x - s.mean) * (x - s.mean);
    m2 += d;
    m4 += d * d;
  }
  s.variance = s.n > 1 ? m2 / (s.n - 1) : 0;
  s.m4 = m4 / s.n;
  return s;
}

}  // namespace rusarith
