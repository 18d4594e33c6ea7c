/*
 * Copyright (c) 2026, the campa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef CAMPA_PRNG_HPP_
#define CAMPA_PRNG_HPP_

#include <cstdint>
#include <vector>

#include "campa/rational.hpp"

namespace campa {

/// SplitMix64. Deterministic across platforms, unlike the distributions in
/// <random>; every sampled binding and shuffled rewrite order in the project
/// flows through this generator.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  /// Rational in [0, hi] with denominator 8 (enough spread for sampling,
  /// keeps downstream exact arithmetic small).
  Rat rat(long hi = 1000) {
    return Rat(static_cast<long>(below(static_cast<std::uint64_t>(hi) * 8 + 1)), 8);
  }

  /// Rational in [lo, hi], denominator 8.
  Rat rat_between(long lo, long hi) { return Rat(lo) + rat(hi - lo); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace campa

#endif  // CAMPA_PRNG_HPP_
