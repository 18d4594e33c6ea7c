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

// Bounded unrolling of recursive protocols. The iteration vector assigns one
// count per mu-binder in binder-occurrence order (outermost first, left to
// right); unroll^0 is end.

#ifndef CAMPA_UNROLL_HPP_
#define CAMPA_UNROLL_HPP_

#include <cstddef>
#include <vector>

#include "campa/core.hpp"

namespace campa {

/// Number of mu-binders, in the order the iteration vector indexes them.
inline std::size_t binder_count(const GlobalType& g) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
    case GlobalType::Kind::kRecCall:
      return 0;
    case GlobalType::Kind::kRec:
      return 1 + binder_count(g.body());
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT: {
      std::size_t n = 0;
      for (const auto& arm : g.arms()) n += binder_count(arm.cont);
      return n;
    }
    default:
      return binder_count(g.cont());
  }
}

/// Substitutes the closed type `value` for the variable bound immediately
/// around `body` (binder index 0 at the top level).
inline GlobalType subst_top(const GlobalType& body, const GlobalType& value,
                            std::size_t depth = 0) {
  switch (body.kind()) {
    case GlobalType::Kind::kEnd:
      return body;
    case GlobalType::Kind::kRecCall:
      if (body.rec_index() == depth) return value;
      return body;
    case GlobalType::Kind::kRec:
      return GlobalType::rec(body.rec_name(), subst_top(body.body(), value, depth + 1));
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT: {
      GlobalType::Arms arms;
      for (const auto& arm : body.arms())
        arms.push_back({arm.label, subst_top(arm.cont, value, depth)});
      return body.with_arms(std::move(arms));
    }
    default:
      return body.with_cont(subst_top(body.cont(), value, depth));
  }
}

/// One unfolding of a closed recursive type: [mu X. G / X] G.
inline GlobalType unfold(const GlobalType& rec_type) {
  if (rec_type.kind() != GlobalType::Kind::kRec) throw Error("unfold expects a recursive type");
  return subst_top(rec_type.body(), rec_type);
}

namespace detail {

using KSlice = std::pair<const std::vector<std::size_t>*, std::size_t>;  // (ks, offset)

inline GlobalType unroll_walk(const GlobalType& g, const std::vector<std::size_t>& ks,
                              std::size_t offset, std::vector<GlobalType>& env) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
      return g;
    case GlobalType::Kind::kRecCall: {
      if (g.rec_index() >= env.size()) throw Error("unbound recursion variable");
      return env[env.size() - 1 - g.rec_index()];
    }
    case GlobalType::Kind::kRec: {
      std::size_t k = ks.at(offset);
      GlobalType acc = GlobalType::end();
      for (std::size_t i = 0; i < k; ++i) {
        env.push_back(acc);
        acc = unroll_walk(g.body(), ks, offset + 1, env);
        env.pop_back();
      }
      return acc;
    }
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT: {
      GlobalType::Arms arms;
      std::size_t child_offset = offset;
      for (const auto& arm : g.arms()) {
        arms.push_back({arm.label, unroll_walk(arm.cont, ks, child_offset, env)});
        child_offset += binder_count(arm.cont);
      }
      return g.with_arms(std::move(arms));
    }
    default:
      return g.with_cont(unroll_walk(g.cont(), ks, offset, env));
  }
}

}  // namespace detail

/// Unrolls every recursion per the iteration vector; result is mu-free.
inline GlobalType unroll(const GlobalType& g, const std::vector<std::size_t>& ks) {
  if (ks.size() != binder_count(g))
    throw Error("iteration vector length " + std::to_string(ks.size()) +
                " does not match binder count " + std::to_string(binder_count(g)));
  std::vector<GlobalType> env;
  return detail::unroll_walk(g, ks, 0, env);
}

}  // namespace campa

#endif  // CAMPA_UNROLL_HPP_
