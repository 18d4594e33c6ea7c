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

#ifndef CAMPA_SIMPLEX_HPP_
#define CAMPA_SIMPLEX_HPP_

#include <cstddef>
#include <vector>

#include "campa/rational.hpp"

namespace campa {

/// Decides feasibility of { v >= 0 : A v >= b } with exact rational
/// arithmetic. Phase-one simplex with Bland's rule; problem sizes here are
/// tiny (atoms of a cost expression x terms of a normal form).
inline bool feasible_geq(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b) {
  const size_t m = A.size();
  if (m == 0) return true;
  const size_t n = A.empty() ? 0 : A[0].size();

  // Standard form: A v - s = b with surplus s >= 0, plus artificial t_i with
  // sign chosen so the start basis t = |b| is feasible. Minimize sum(t).
  // Columns: [v (n)] [s (m)] [t (m)] | rhs.
  const size_t cols = n + 2 * m + 1;
  std::vector<std::vector<Rat>> T(m + 1, std::vector<Rat>(cols, Rat(0)));
  std::vector<size_t> basis(m);

  for (size_t i = 0; i < m; ++i) {
    bool flip = b[i].sign() < 0;
    for (size_t j = 0; j < n; ++j) T[i][j] = flip ? -A[i][j] : A[i][j];
    T[i][n + i] = flip ? Rat(1) : Rat(-1);
    T[i][n + m + i] = Rat(1);
    T[i][cols - 1] = flip ? -b[i] : b[i];
    basis[i] = n + m + i;
  }
  // Objective row: minimize sum of artificials; express in terms of nonbasic
  // columns (subtract each constraint row).
  for (size_t j = 0; j < cols; ++j) {
    Rat acc(0);
    for (size_t i = 0; i < m; ++i) acc += T[i][j];
    T[m][j] = -acc;
  }
  for (size_t i = 0; i < m; ++i) T[m][n + m + i] = Rat(0);

  auto pivot = [&](size_t pr, size_t pc) {
    Rat inv = Rat(1) / T[pr][pc];
    for (size_t j = 0; j < cols; ++j) T[pr][j] *= inv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == pr || T[i][pc].is_zero()) continue;
      Rat f = T[i][pc];
      for (size_t j = 0; j < cols; ++j) T[i][j] -= f * T[pr][j];
    }
    basis[pr] = pc;
  };

  for (;;) {
    // Bland: smallest-index entering column with positive reduced benefit
    // (objective row stores -z; a negative entry improves the minimum).
    size_t pc = cols;
    for (size_t j = 0; j + 1 < cols; ++j) {
      if (T[m][j].sign() < 0) {
        pc = j;
        break;
      }
    }
    if (pc == cols) break;
    size_t pr = m;
    for (size_t i = 0; i < m; ++i) {
      if (T[i][pc].sign() <= 0) continue;
      if (pr == m) {
        pr = i;
        continue;
      }
      Rat cur = T[i][cols - 1] / T[i][pc];
      Rat best = T[pr][cols - 1] / T[pr][pc];
      if (cur < best || (cur == best && basis[i] < basis[pr])) pr = i;
    }
    if (pr == m) break;  // unbounded in an artificial-free direction
    pivot(pr, pc);
  }

  // Feasible iff all artificials were driven to zero.
  Rat total(0);
  for (size_t i = 0; i < m; ++i)
    if (basis[i] >= n + m) total += T[i][cols - 1];
  return total.is_zero();
}

}  // namespace campa

#endif  // CAMPA_SIMPLEX_HPP_
