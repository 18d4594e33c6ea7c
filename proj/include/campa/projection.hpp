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

// Endpoint projection with full merging, and well-formedness (projectability
// onto every role). Projection is partial: failures carry the branch-label
// path to the offending subterm instead of a bare "undefined".

#ifndef CAMPA_PROJECTION_HPP_
#define CAMPA_PROJECTION_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "campa/core.hpp"

namespace campa {

struct ProjectResult {
  std::optional<LocalType> local;
  std::string error;               // set when !local
  std::vector<std::string> path;   // branch labels taken to the failure

  explicit operator bool() const { return local.has_value(); }
};

namespace detail {

inline bool is_bare_var(const LocalType& l) { return l.kind() == LocalType::Kind::kRecCall; }

inline std::optional<LocalType> merge_locals(const LocalType& a, const LocalType& b,
                                             std::string& why);

/// Label-wise merge: shared labels merge recursively, disjoint ones are
/// united; the result's arms are sorted by label so merging is commutative
/// up to structural equality.
inline std::optional<LocalType> merge_branches(const LocalType& a, const LocalType& b,
                                               std::string& why) {
  LocalType::Arms arms;
  for (const auto& arm : a.arms()) {
    const LocalType::Arm* other = nullptr;
    for (const auto& cand : b.arms())
      if (cand.label == arm.label) other = &cand;
    if (other) {
      auto merged = merge_locals(arm.cont, other->cont, why);
      if (!merged) {
        why = "label '" + arm.label.name + "': " + why;
        return std::nullopt;
      }
      arms.push_back({arm.label, *merged});
    } else {
      arms.push_back(arm);
    }
  }
  for (const auto& arm : b.arms()) {
    bool shared = false;
    for (const auto& mine : a.arms())
      if (mine.label == arm.label) shared = true;
    if (!shared) arms.push_back(arm);
  }
  std::sort(arms.begin(), arms.end(),
            [](const LocalType::Arm& x, const LocalType::Arm& y) { return x.label < y.label; });
  return LocalType::branch(a.peer(), std::move(arms));
}

inline std::optional<LocalType> merge_locals(const LocalType& a, const LocalType& b,
                                             std::string& why) {
  if (a == b) return a;
  if (a.kind() == LocalType::Kind::kBranch && b.kind() == LocalType::Kind::kBranch &&
      a.peer() == b.peer())
    return merge_branches(a, b, why);
  if (a.kind() == LocalType::Kind::kRec && b.kind() == LocalType::Kind::kRec) {
    auto body = merge_locals(a.body(), b.body(), why);
    if (!body) return std::nullopt;
    return LocalType::rec(a.rec_name(), *body);
  }
  why = "unmergeable: " + a.str() + " vs " + b.str();
  return std::nullopt;
}

inline std::optional<LocalType> project_walk(const GlobalType& g, Role p, bool allow_split,
                                             std::string& why, std::vector<std::string>& path) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
      return LocalType::end();
    case GlobalType::Kind::kRecCall:
      return LocalType::rec_call(g.rec_index(), g.rec_name());
    case GlobalType::Kind::kRec: {
      auto body = project_walk(g.body(), p, allow_split, why, path);
      if (!body) return std::nullopt;
      if (is_bare_var(*body)) return LocalType::end();
      return LocalType::rec(g.rec_name(), *body);
    }
    case GlobalType::Kind::kMsg: {
      auto cont = project_walk(g.cont(), p, allow_split, why, path);
      if (!cont) return std::nullopt;
      if (p == g.from()) return LocalType::send(g.to(), g.payload(), *cont);
      if (p == g.to()) return LocalType::recv(g.from(), g.payload(), g.cost(), *cont);
      return cont;
    }
    case GlobalType::Kind::kBranch: {
      if (p == g.from() || p == g.to()) {
        LocalType::Arms arms;
        for (const auto& arm : g.arms()) {
          path.push_back(arm.label.name);
          auto cont = project_walk(arm.cont, p, allow_split, why, path);
          if (!cont) return std::nullopt;
          path.pop_back();
          arms.push_back({arm.label, *cont});
        }
        return p == g.from() ? LocalType::select(g.to(), std::move(arms))
                             : LocalType::branch(g.from(), std::move(arms));
      }
      std::optional<LocalType> acc;
      for (const auto& arm : g.arms()) {
        path.push_back(arm.label.name);
        auto cont = project_walk(arm.cont, p, allow_split, why, path);
        if (!cont) return std::nullopt;
        if (acc) {
          auto merged = merge_locals(*acc, *cont, why);
          if (!merged) return std::nullopt;
          acc = merged;
        } else {
          acc = cont;
        }
        path.pop_back();
      }
      return acc;
    }
    case GlobalType::Kind::kSendAct: {
      if (!allow_split) {
        why = "split send action outside the optimizer extension";
        return std::nullopt;
      }
      auto cont = project_walk(g.cont(), p, allow_split, why, path);
      if (!cont) return std::nullopt;
      if (p == g.from()) return LocalType::send(g.to(), g.payload(), *cont);
      return cont;
    }
    case GlobalType::Kind::kRecvAct: {
      if (!allow_split) {
        why = "split receive action outside the optimizer extension";
        return std::nullopt;
      }
      auto cont = project_walk(g.cont(), p, allow_split, why, path);
      if (!cont) return std::nullopt;
      if (p == g.to()) return LocalType::recv(g.from(), g.payload(), g.cost(), *cont);
      return cont;
    }
    case GlobalType::Kind::kMsgT:
    case GlobalType::Kind::kBranchT:
    case GlobalType::Kind::kEval:
      why = "projection of runtime-extended forms is undefined";
      return std::nullopt;
  }
  why = "unreachable";
  return std::nullopt;
}

inline ProjectResult project_impl(const GlobalType& g, Role p, bool allow_split) {
  ProjectResult res;
  std::string why;
  std::vector<std::string> path;
  res.local = project_walk(g, p, allow_split, why, path);
  if (!res.local) {
    res.error = "unprojectable: " + why;
    res.path = path;
  }
  return res;
}

}  // namespace detail

/// Endpoint projection of g onto p, per the standard rules with full
/// merging. Undefined exactly when some required merge is undefined.
inline ProjectResult project(const GlobalType& g, Role p) {
  return detail::project_impl(g, p, /*allow_split=*/false);
}

/// Projection extended to the split send/receive constructors.
inline ProjectResult project_ext(const GlobalType& g, Role p) {
  return detail::project_impl(g, p, /*allow_split=*/true);
}

/// Full merge of two local types; nullopt with a reason when undefined.
inline std::optional<LocalType> merge(const LocalType& a, const LocalType& b,
                                      std::string* why = nullptr) {
  std::string reason;
  auto r = detail::merge_locals(a, b, reason);
  if (!r && why) *why = reason;
  return r;
}

struct WfFailure {
  Role role;
  std::string error;
  std::vector<std::string> path;
};

struct WfReport {
  bool ok = true;
  std::vector<WfFailure> failures;

  explicit operator bool() const { return ok; }
};

/// WF(G): projection is defined for every role of G.
inline WfReport well_formed(const GlobalType& g) {
  WfReport report;
  for (Role r : roles_of(g)) {
    ProjectResult res = project(g, r);
    if (!res) {
      report.ok = false;
      report.failures.push_back({r, res.error, res.path});
    }
  }
  return report;
}

/// WF for optimizer-extended types, via project_ext.
inline WfReport well_formed_ext(const GlobalType& g) {
  WfReport report;
  for (Role r : roles_of(g)) {
    ProjectResult res = project_ext(g, r);
    if (!res) {
      report.ok = false;
      report.failures.push_back({r, res.error, res.path});
    }
  }
  return report;
}

}  // namespace campa

#endif  // CAMPA_PROJECTION_HPP_
