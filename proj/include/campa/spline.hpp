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

// Natural cubic spline over exact rationals, used to turn profiled
// (size, time) samples into a cost curve. Queries outside the sampled range
// are errors; negative spline values clamp to zero with a warning flag.

#ifndef CAMPA_SPLINE_HPP_
#define CAMPA_SPLINE_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "campa/core.hpp"
#include "campa/rational.hpp"

namespace campa {

class CubicSpline {
 public:
  /// Natural cubic spline through the samples; sizes strictly increasing,
  /// times nonnegative, at least two samples. Two samples degenerate to the
  /// linear interpolant.
  static CubicSpline fit(std::vector<std::pair<Rat, Rat>> samples) {
    if (samples.size() < 2) throw Error("cost curve needs at least two samples");
    for (size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].second.sign() < 0) throw Error("cost curve times must be nonnegative");
      if (i > 0 && !(samples[i - 1].first < samples[i].first))
        throw Error("cost curve sizes must be strictly increasing");
    }
    CubicSpline s;
    s.x_.reserve(samples.size());
    s.y_.reserve(samples.size());
    for (auto& [x, y] : samples) {
      s.x_.push_back(x);
      s.y_.push_back(y);
    }
    s.solve_second_derivatives();
    return s;
  }

  /// Value at `x`; throws outside the sampled range. `clamped` (optional) is
  /// set when a negative spline value was clamped to zero.
  Rat operator()(const Rat& x, bool* clamped = nullptr) const {
    if (x < x_.front() || x_.back() < x)
      throw Error("cost curve query " + x.str() + " outside the measured range [" +
                  x_.front().str() + ", " + x_.back().str() + "]");
    size_t i = 1;
    while (i + 1 < x_.size() && x_[i] < x) ++i;
    // segment [i-1, i]
    Rat h = x_[i] - x_[i - 1];
    Rat a = (x_[i] - x) / h;
    Rat b = (x - x_[i - 1]) / h;
    Rat six(6);
    Rat v = a * y_[i - 1] + b * y_[i] +
            ((a * a * a - a) * m_[i - 1] + (b * b * b - b) * m_[i]) * (h * h) / six;
    if (v.sign() < 0) {
      if (clamped) *clamped = true;
      return Rat(0);
    }
    return v;
  }

  const std::vector<Rat>& knots() const { return x_; }

 private:
  // Tridiagonal system for natural boundary conditions (second derivative
  // zero at both ends); Thomas algorithm over exact rationals.
  void solve_second_derivatives() {
    size_t n = x_.size();
    m_.assign(n, Rat(0));
    if (n == 2) return;
    std::vector<Rat> diag(n, Rat(0)), off(n, Rat(0)), rhs(n, Rat(0));
    for (size_t i = 1; i + 1 < n; ++i) {
      Rat h0 = x_[i] - x_[i - 1];
      Rat h1 = x_[i + 1] - x_[i];
      diag[i] = (h0 + h1) * Rat(2);
      off[i] = h1;
      rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
      rhs[i] *= Rat(6);
    }
    // forward elimination over interior rows; sub-diagonal of row i is h0_i
    for (size_t i = 2; i + 1 < n; ++i) {
      Rat h0 = x_[i] - x_[i - 1];
      Rat w = h0 / diag[i - 1];
      diag[i] -= w * off[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (size_t i = n - 2; i >= 1; --i) {
      Rat upper = i + 2 < n ? off[i] * m_[i + 1] : Rat(0);
      m_[i] = (rhs[i] - upper) / diag[i];
      if (i == 1) break;
    }
  }

  std::vector<Rat> x_, y_, m_;  // knots, values, second derivatives
};

}  // namespace campa

#endif  // CAMPA_SPLINE_HPP_
