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

// Asynchronous operational semantics: the labelled transition system of
// global types (rules GR1a..GR5c, GR3), the configuration semantics of
// projected local types with FIFO queues (LR1..LR5), exhaustive trace
// enumeration, deadlock detection, and the bounded trace-equivalence oracle.

#ifndef CAMPA_SEMANTICS_HPP_
#define CAMPA_SEMANTICS_HPP_

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "campa/core.hpp"
#include "campa/projection.hpp"
#include "campa/unroll.hpp"

namespace campa {

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error("budget exceeded: " + what) {}
};

// ---------------------------------------------------------------------------
// Actions

struct Action {
  enum class Kind { kSend, kRecv, kSelect, kBranch, kRun };

  Kind kind;
  Role p, q;          // sender, receiver (kRun uses p only)
  SizedType payload;  // kSend/kRecv
  Label label;        // kSelect/kBranch
  CostExpr cost;      // kRun

  static Action send(Role p, Role q, SizedType t) {
    return Action{Kind::kSend, p, q, std::move(t), {}, {}};
  }
  static Action recv(Role p, Role q, SizedType t) {
    return Action{Kind::kRecv, p, q, std::move(t), {}, {}};
  }
  static Action select(Role p, Role q, Label l) {
    return Action{Kind::kSelect, p, q, {}, std::move(l), {}};
  }
  static Action branch(Role p, Role q, Label l) {
    return Action{Kind::kBranch, p, q, {}, std::move(l), {}};
  }
  static Action run(Role p, CostExpr c) { return Action{Kind::kRun, p, p, {}, {}, std::move(c)}; }

  /// The role in charge of performing the action.
  Role subject() const {
    switch (kind) {
      case Kind::kSend:
      case Kind::kSelect:
      case Kind::kRun:
        return p;
      case Kind::kRecv:
      case Kind::kBranch:
        return q;
    }
    return p;
  }

  /// Paper-style rendering: pq!t, pq?t, pq(+)l, pq(&)l, p@c.
  std::string str(const RoleTable* names = nullptr) const {
    auto role = [&](Role r) {
      return names ? names->name(r) : "r" + std::to_string(r.id);
    };
    switch (kind) {
      case Kind::kSend: return role(p) + role(q) + "!" + payload.str();
      case Kind::kRecv: return role(p) + role(q) + "?" + payload.str();
      case Kind::kSelect: return role(p) + role(q) + "(+)" + label.name;
      case Kind::kBranch: return role(p) + role(q) + "(&)" + label.name;
      case Kind::kRun: return role(p) + "@" + cost.str();
    }
    return "";
  }

  friend bool operator==(const Action& a, const Action& b) {
    if (a.kind != b.kind || a.p != b.p || a.q != b.q) return false;
    switch (a.kind) {
      case Kind::kSend:
      case Kind::kRecv:
        return a.payload == b.payload;
      case Kind::kSelect:
      case Kind::kBranch:
        return a.label == b.label;
      case Kind::kRun:
        return a.cost == b.cost;
    }
    return false;
  }
  friend bool operator<(const Action& a, const Action& b) { return a.str() < b.str(); }
};

using Trace = std::vector<Action>;

inline std::string trace_str(const Trace& tr, const RoleTable* names = nullptr) {
  std::string s;
  for (size_t i = 0; i < tr.size(); ++i) {
    if (i) s += " . ";
    s += tr[i].str(names);
  }
  return s;
}

// ---------------------------------------------------------------------------
// LTS of global types

inline bool contains_split(const GlobalType& g) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
    case GlobalType::Kind::kRecCall:
      return false;
    case GlobalType::Kind::kSendAct:
    case GlobalType::Kind::kRecvAct:
      return true;
    case GlobalType::Kind::kRec:
      return contains_split(g.body());
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT:
      for (const auto& arm : g.arms())
        if (contains_split(arm.cont)) return true;
      return false;
    default:
      return contains_split(g.cont());
  }
}

/// All (action, successor) pairs of the global-type LTS. GR3 unfolds
/// recursion on demand; callers bound exploration depth.
inline std::vector<std::pair<Action, GlobalType>> global_steps(const GlobalType& g) {
  using K = GlobalType::Kind;
  std::vector<std::pair<Action, GlobalType>> out;
  switch (g.kind()) {
    case K::kEnd:
    case K::kRecCall:
      return out;
    case K::kMsg: {
      // GR1a
      out.emplace_back(Action::send(g.from(), g.to(), g.payload()),
                       GlobalType::msg_t(g.from(), g.to(), g.payload(), g.cost(), g.cont()));
      // GR4a
      for (auto& [a, succ] : global_steps(g.cont())) {
        Role s = a.subject();
        if (s != g.from() && s != g.to())
          out.emplace_back(a, GlobalType::msg(g.from(), g.to(), g.payload(), g.cost(), succ));
      }
      return out;
    }
    case K::kMsgT: {
      // GR2a
      out.emplace_back(Action::recv(g.from(), g.to(), g.payload()),
                       GlobalType::eval(g.to(), g.payload(), g.cost(), g.cont()));
      // GR5a
      for (auto& [a, succ] : global_steps(g.cont())) {
        if (a.subject() != g.to())
          out.emplace_back(a, GlobalType::msg_t(g.from(), g.to(), g.payload(), g.cost(), succ));
      }
      return out;
    }
    case K::kEval: {
      // GR2b
      out.emplace_back(Action::run(g.from(), g.cost()), g.cont());
      // GR5b
      for (auto& [a, succ] : global_steps(g.cont())) {
        if (a.subject() != g.from())
          out.emplace_back(a, GlobalType::eval(g.from(), g.payload(), g.cost(), succ));
      }
      return out;
    }
    case K::kBranch: {
      // GR1b
      for (std::size_t j = 0; j < g.arms().size(); ++j)
        out.emplace_back(Action::select(g.from(), g.to(), g.arms()[j].label),
                         GlobalType::branch_t(g.from(), g.to(), j, g.arms()));
      // GR4b: an action is offered only if every arm can take it.
      std::vector<std::vector<std::pair<Action, GlobalType>>> per_arm;
      for (const auto& arm : g.arms()) per_arm.push_back(global_steps(arm.cont));
      for (const auto& [a, succ0] : per_arm[0]) {
        Role s = a.subject();
        if (s == g.from() || s == g.to()) continue;
        GlobalType::Arms arms;
        arms.push_back({g.arms()[0].label, succ0});
        bool all = true;
        for (std::size_t i = 1; i < per_arm.size() && all; ++i) {
          bool found = false;
          for (const auto& [ai, succi] : per_arm[i]) {
            if (ai == a) {
              arms.push_back({g.arms()[i].label, succi});
              found = true;
              break;
            }
          }
          all = found;
        }
        if (all) out.emplace_back(a, g.with_arms(std::move(arms)));
      }
      return out;
    }
    case K::kBranchT: {
      std::size_t j = g.chosen();
      // GR2c
      out.emplace_back(Action::branch(g.from(), g.to(), g.arms()[j].label), g.arms()[j].cont);
      // GR5c: only the chosen arm moves.
      for (auto& [a, succ] : global_steps(g.arms()[j].cont)) {
        if (a.subject() == g.to()) continue;
        GlobalType::Arms arms = g.arms();
        arms[j] = {arms[j].label, succ};
        out.emplace_back(a, GlobalType::branch_t(g.from(), g.to(), j, std::move(arms)));
      }
      return out;
    }
    case K::kRec:
      // GR3
      return global_steps(unfold(g));
    case K::kSendAct:
    case K::kRecvAct:
      throw Error("the global LTS does not cover split actions; use the configuration semantics");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configurations (LTS of local types)

struct QueueItem {
  bool is_label = false;
  SizedType payload;  // !is_label
  Label label;        // is_label

  static QueueItem value(SizedType t) { return QueueItem{false, std::move(t), {}}; }
  static QueueItem tag(Label l) { return QueueItem{true, {}, std::move(l)}; }

  std::string str() const { return is_label ? "#" + label.name : payload.str(); }
  friend bool operator==(const QueueItem& a, const QueueItem& b) {
    return a.is_label == b.is_label && (a.is_label ? a.label == b.label : a.payload == b.payload);
  }
};

/// Locals plus per-ordered-pair FIFO queues; absent queue means empty.
struct Configuration {
  std::map<std::uint32_t, LocalType> locals;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::deque<QueueItem>> queues;

  std::string str() const {
    std::ostringstream os;
    for (const auto& [r, l] : locals) os << "r" << r << ":" << l.str() << ";";
    for (const auto& [pq, w] : queues) {
      if (w.empty()) continue;
      os << "q" << pq.first << "," << pq.second << ":";
      for (const auto& item : w) os << item.str() << "|";
      os << ";";
    }
    return os.str();
  }

  bool all_end() const {
    for (const auto& [r, l] : locals)
      if (!l.is_end()) return false;
    return true;
  }

  bool queues_empty() const {
    for (const auto& [pq, w] : queues)
      if (!w.empty()) return false;
    return true;
  }
};

/// Builds the initial configuration [p -> G|p] with empty queues.
inline Configuration initial_configuration(const GlobalType& g) {
  Configuration cfg;
  bool split = contains_split(g);
  for (Role r : roles_of(g)) {
    ProjectResult res = split ? project_ext(g, r) : project(g, r);
    if (!res) throw Error("cannot form configuration: " + res.error);
    cfg.locals.emplace(r.id, *res.local);
  }
  return cfg;
}

namespace detail {

/// Local types are taken up to unfolding of their top-level recursion.
inline LocalType local_head(LocalType l) {
  int fuel = 64;
  while (l.kind() == LocalType::Kind::kRec) {
    if (--fuel == 0) throw Error("unguarded local recursion");
    // substitute the whole rec for occurrences of its variable
    struct Sub {
      static LocalType walk(const LocalType& b, const LocalType& v, std::size_t d) {
        switch (b.kind()) {
          case LocalType::Kind::kEnd:
            return b;
          case LocalType::Kind::kRecCall:
            return b.rec_index() == d ? v : b;
          case LocalType::Kind::kRec:
            return LocalType::rec(b.rec_name(), walk(b.body(), v, d + 1));
          case LocalType::Kind::kSend:
            return LocalType::send(b.peer(), b.payload(), walk(b.cont(), v, d));
          case LocalType::Kind::kRecv:
            return LocalType::recv(b.peer(), b.payload(), b.cost(), walk(b.cont(), v, d));
          case LocalType::Kind::kPendingEval:
            return LocalType::pending_eval(b.payload(), b.cost(), walk(b.cont(), v, d));
          case LocalType::Kind::kSelect:
          case LocalType::Kind::kBranch: {
            LocalType::Arms arms;
            for (const auto& arm : b.arms()) arms.push_back({arm.label, walk(arm.cont, v, d)});
            return b.kind() == LocalType::Kind::kSelect ? LocalType::select(b.peer(), arms)
                                                        : LocalType::branch(b.peer(), arms);
          }
        }
        return b;
      }
    };
    l = Sub::walk(l.body(), l, 0);
  }
  return l;
}

}  // namespace detail

/// All enabled LR1..LR5 steps of a configuration.
inline std::vector<std::pair<Action, Configuration>> config_steps(const Configuration& cfg) {
  std::vector<std::pair<Action, Configuration>> out;
  for (const auto& [rid, raw_local] : cfg.locals) {
    Role self{rid};
    LocalType l = detail::local_head(raw_local);
    switch (l.kind()) {
      case LocalType::Kind::kEnd:
      case LocalType::Kind::kRec:
      case LocalType::Kind::kRecCall:
        break;
      case LocalType::Kind::kSend: {  // LR1
        Configuration next = cfg;
        next.locals.at(rid) = l.cont();
        next.queues[{rid, l.peer().id}].push_back(QueueItem::value(l.payload()));
        out.emplace_back(Action::send(self, l.peer(), l.payload()), std::move(next));
        break;
      }
      case LocalType::Kind::kRecv: {  // LR2
        auto it = cfg.queues.find({l.peer().id, rid});
        if (it == cfg.queues.end() || it->second.empty()) break;
        const QueueItem& front = it->second.front();
        if (front.is_label || !(front.payload == l.payload())) break;
        Configuration next = cfg;
        next.locals.at(rid) = LocalType::pending_eval(l.payload(), l.cost(), l.cont());
        next.queues[{l.peer().id, rid}].pop_front();
        out.emplace_back(Action::recv(l.peer(), self, l.payload()), std::move(next));
        break;
      }
      case LocalType::Kind::kPendingEval: {  // LR3
        Configuration next = cfg;
        next.locals.at(rid) = l.cont();
        out.emplace_back(Action::run(self, l.cost()), std::move(next));
        break;
      }
      case LocalType::Kind::kSelect: {  // LR4
        for (const auto& arm : l.arms()) {
          Configuration next = cfg;
          next.locals.at(rid) = arm.cont;
          next.queues[{rid, l.peer().id}].push_back(QueueItem::tag(arm.label));
          out.emplace_back(Action::select(self, l.peer(), arm.label), std::move(next));
        }
        break;
      }
      case LocalType::Kind::kBranch: {  // LR5
        auto it = cfg.queues.find({l.peer().id, rid});
        if (it == cfg.queues.end() || it->second.empty()) break;
        const QueueItem& front = it->second.front();
        if (!front.is_label) break;
        for (const auto& arm : l.arms()) {
          if (arm.label == front.label) {
            Configuration next = cfg;
            next.locals.at(rid) = arm.cont;
            next.queues[{l.peer().id, rid}].pop_front();
            out.emplace_back(Action::branch(l.peer(), self, arm.label), std::move(next));
            break;
          }
        }
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

struct ExploreLimits {
  std::size_t state_cap = 1000000;
};

/// Exhaustive DFS enumeration of all complete traces of unroll(g, ks).
/// Deterministic: traces come back sorted by their printed form.
inline std::vector<Trace> enumerate_traces(const GlobalType& g, const std::vector<std::size_t>& ks,
                                           ExploreLimits limits = {}) {
  if (contains_split(g))
    throw Error("enumerate_traces requires a standard global type; split types run "
                "under the configuration semantics");
  GlobalType start = unroll(g, ks);
  std::vector<Trace> result;
  Trace current;
  std::size_t visited = 0;

  auto dfs = [&](const GlobalType& state, auto&& self) -> void {
    if (++visited > limits.state_cap) throw BudgetExceeded("trace enumeration state cap");
    if (state.is_end()) {
      result.push_back(current);
      return;
    }
    auto steps = global_steps(state);
    // determinism of the LTS: no action may have two successors
    for (size_t i = 0; i < steps.size(); ++i)
      for (size_t j = i + 1; j < steps.size(); ++j)
        if (steps[i].first == steps[j].first && !(steps[i].second == steps[j].second))
          throw Error("nondeterministic LTS state: " + state.str());
    if (steps.empty()) throw Error("stuck non-end global type: " + state.str());
    for (auto& [a, succ] : steps) {
      current.push_back(a);
      self(succ, self);
      current.pop_back();
    }
  };
  dfs(start, dfs);
  std::sort(result.begin(), result.end(),
            [](const Trace& a, const Trace& b) { return trace_str(a) < trace_str(b); });
  return result;
}

/// Replays a trace from unroll(g, ks); true iff every action is enabled in
/// sequence and the trace ends in end.
inline bool replay_trace(const GlobalType& g, const std::vector<std::size_t>& ks,
                         const Trace& tr) {
  GlobalType state = unroll(g, ks);
  for (const Action& a : tr) {
    bool moved = false;
    for (auto& [b, succ] : global_steps(state)) {
      if (a == b) {
        state = succ;
        moved = true;
        break;
      }
    }
    if (!moved) return false;
  }
  return state.is_end();
}

struct DeadlockReport {
  bool ok = true;
  std::optional<Configuration> counterexample;
  bool orphaned_messages = false;  // all-end terminal with leftover in-flight messages
  std::size_t states_explored = 0;

  explicit operator bool() const { return ok; }
};

/// Explores a configuration exhaustively. A deadlock is a stuck
/// configuration in which some participant has not reached end. A stuck
/// all-end configuration with leftover queue items is reported as orphaned
/// (it can arise from truncating a split protocol by unrolling) but is not a
/// deadlock: nobody is waiting.
inline DeadlockReport explore_deadlock(const Configuration& start, ExploreLimits limits = {}) {
  DeadlockReport report;
  std::unordered_set<std::string> seen;
  std::vector<Configuration> stack{start};
  seen.insert(start.str());
  while (!stack.empty()) {
    Configuration cfg = std::move(stack.back());
    stack.pop_back();
    if (++report.states_explored > limits.state_cap)
      throw BudgetExceeded("deadlock exploration state cap");
    auto steps = config_steps(cfg);
    if (steps.empty()) {
      if (!cfg.all_end()) {
        report.ok = false;
        report.counterexample = cfg;
        return report;
      }
      if (!cfg.queues_empty()) report.orphaned_messages = true;
      continue;
    }
    for (auto& [a, succ] : steps) {
      std::string key = succ.str();
      if (seen.insert(key).second) stack.push_back(std::move(succ));
    }
  }
  return report;
}

/// Deadlock-freedom of a global type at a given unrolling, via the
/// configuration of its projections.
inline DeadlockReport deadlock_free(const GlobalType& g, const std::vector<std::size_t>& ks,
                                    ExploreLimits limits = {}) {
  return explore_deadlock(initial_configuration(unroll(g, ks)), limits);
}

struct EquivReport {
  bool ok = true;
  std::string mismatch;  // description of the first divergence
  Trace prefix;
  std::size_t states_explored = 0;

  explicit operator bool() const { return ok; }
};

/// Bounded trace-set equality between the global LTS of unroll(g, ks) and
/// the configuration LTS of its projections. Both systems are deterministic,
/// so set equality up to `depth` is a synchronized walk comparing enabled
/// action sets at every joint state.
inline EquivReport trace_equiv(const GlobalType& g, const std::vector<std::size_t>& ks,
                               std::size_t depth, ExploreLimits limits = {}) {
  GlobalType start = unroll(g, ks);
  Configuration cfg0 = initial_configuration(start);

  EquivReport report;
  std::set<std::string> seen;
  Trace prefix;

  auto walk = [&](const GlobalType& gs, const Configuration& cs, std::size_t remaining,
                  auto&& self) -> bool {
    if (remaining == 0) return true;
    std::string key = gs.str() + "##" + cs.str() + "#" + std::to_string(remaining);
    if (!seen.insert(key).second) return true;
    if (++report.states_explored > limits.state_cap)
      throw BudgetExceeded("trace equivalence state cap");

    auto gsteps = global_steps(gs);
    auto csteps = config_steps(cs);
    std::set<std::string> ga, ca;
    for (auto& [a, s] : gsteps) ga.insert(a.str());
    for (auto& [a, s] : csteps) ca.insert(a.str());
    if (ga != ca) {
      std::ostringstream os;
      os << "enabled action sets differ after '" << trace_str(prefix) << "': global {";
      for (const auto& s : ga) os << s << " ";
      os << "} vs configuration {";
      for (const auto& s : ca) os << s << " ";
      os << "}";
      report.mismatch = os.str();
      report.prefix = prefix;
      return false;
    }
    for (auto& [a, gsucc] : gsteps) {
      for (auto& [b, csucc] : csteps) {
        if (a == b) {
          prefix.push_back(a);
          bool ok = self(gsucc, csucc, remaining - 1, self);
          prefix.pop_back();
          if (!ok) return false;
          break;
        }
      }
    }
    return true;
  };
  report.ok = walk(start, cfg0, depth, walk);
  return report;
}

}  // namespace campa

#endif  // CAMPA_SEMANTICS_HPP_
