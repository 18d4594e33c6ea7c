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

// Trace cost and global-type cost with bounded unrolling. The dependency
// queue records, per channel, the time at which each in-flight message
// becomes available; receives gate on the popped entry. check_soundness is
// the brute-force harness behind the bounded-cost soundness theorem and the
// two stepwise lemmas (WF preservation, cost preservation).

#ifndef CAMPA_COST_HPP_
#define CAMPA_COST_HPP_

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "campa/algebra.hpp"
#include "campa/core.hpp"
#include "campa/semantics.hpp"
#include "campa/unroll.hpp"

namespace campa {

// ---------------------------------------------------------------------------
// Dependency queues and cost states

/// Per-channel FIFO of availability times of in-flight messages.
class DepQueue {
 public:
  using Channel = std::pair<std::uint32_t, std::uint32_t>;

  bool empty(Role p, Role q) const {
    auto it = m_.find({p.id, q.id});
    return it == m_.end() || it->second.empty();
  }

  void push(Role p, Role q, NormalForm avail) {
    m_[{p.id, q.id}].push_back(std::move(avail));
  }

  NormalForm pop(Role p, Role q) {
    auto it = m_.find({p.id, q.id});
    if (it == m_.end() || it->second.empty())
      throw Error("dependency queue underflow on channel r" + std::to_string(p.id) + "->r" +
                  std::to_string(q.id));
    NormalForm front = it->second.front();
    it->second.pop_front();
    if (it->second.empty()) m_.erase(it);
    return front;
  }

  bool all_empty() const {
    for (const auto& [ch, w] : m_)
      if (!w.empty()) return false;
    return true;
  }

  std::size_t length(Role p, Role q) const {
    auto it = m_.find({p.id, q.id});
    return it == m_.end() ? 0 : it->second.size();
  }

  const std::map<Channel, std::deque<NormalForm>>& channels() const { return m_; }

  std::string str() const {
    std::ostringstream os;
    for (const auto& [ch, w] : m_) {
      if (w.empty()) continue;
      os << ch.first << ">" << ch.second << ":[";
      for (const auto& nf : w) os << nf.str() << " ;";
      os << "] ";
    }
    return os.str();
  }

 private:
  std::map<Channel, std::deque<NormalForm>> m_;
};

struct CostState {
  CostEnv env;
  DepQueue queue;

  std::string str() const { return env.str() + "//" + queue.str(); }
};

// ---------------------------------------------------------------------------
// Action and trace cost

namespace detail {

inline NormalForm unit_send() { return normalize(CostExpr::send(unit_type())); }
inline NormalForm unit_recv() { return normalize(CostExpr::recv(unit_type())); }

}  // namespace detail

/// Options shared by the cost folds. Label transmissions cost csend(1) and
/// crecv(1) by default; zero_label_cost drops them (labels piggybacked onto
/// data messages).
struct CostOptions {
  bool zero_label_cost = false;

  NormalForm label_send() const {
    return zero_label_cost ? NormalForm::zero() : detail::unit_send();
  }
  NormalForm label_recv() const {
    return zero_label_cost ? NormalForm::zero() : detail::unit_recv();
  }
};

/// The five per-action cost rules. Receives and branch labels pop the
/// availability gate from the channel queue; sends and selects append their
/// completion time; Run adds the local computation.
inline CostState action_cost(const Action& a, CostState s, const CostOptions& opt = {}) {
  switch (a.kind) {
    case Action::Kind::kRecv: {
      NormalForm gate = s.queue.pop(a.p, a.q);
      env_add_after_inplace(s.env, gate, a.q, normalize(CostExpr::recv(a.payload)));
      return s;
    }
    case Action::Kind::kBranch: {
      NormalForm gate = s.queue.pop(a.p, a.q);
      env_add_after_inplace(s.env, gate, a.q, opt.label_recv());
      return s;
    }
    case Action::Kind::kSend: {
      env_add_after_inplace(s.env, NormalForm::zero(), a.p, normalize(CostExpr::send(a.payload)));
      s.queue.push(a.p, a.q, s.env.get(a.p));
      return s;
    }
    case Action::Kind::kSelect: {
      env_add_after_inplace(s.env, NormalForm::zero(), a.p, opt.label_send());
      s.queue.push(a.p, a.q, s.env.get(a.p));
      return s;
    }
    case Action::Kind::kRun: {
      env_add_after_inplace(s.env, NormalForm::zero(), a.p, normalize(a.cost));
      return s;
    }
  }
  throw Error("unreachable");
}

/// Left fold of action_cost from the zero state; the env is the trace cost.
inline CostEnv trace_cost(const Trace& tr, const CostOptions& opt = {}) {
  CostState s;
  for (const Action& a : tr) s = action_cost(a, std::move(s), opt);
  return s.env;
}

// ---------------------------------------------------------------------------
// Global type cost

namespace detail {

/// The recursive engine over mu-free types, including the runtime-extended
/// clauses and (when allow_split) the split send/receive clauses.
inline CostState global_cost_state(const GlobalType& g, CostState s, bool allow_split,
                                   const CostOptions& opt) {
  using K = GlobalType::Kind;
  switch (g.kind()) {
    case K::kEnd:
      return s;
    case K::kMsg: {
      env_add_after_inplace(s.env, NormalForm::zero(), g.from(),
                            normalize(CostExpr::send(g.payload())));
      env_add_after_inplace(s.env, s.env.get(g.from()), g.to(),
                            nf_add(normalize(CostExpr::recv(g.payload())), normalize(g.cost())));
      return global_cost_state(g.cont(), std::move(s), allow_split, opt);
    }
    case K::kBranch: {
      std::optional<CostEnv> acc;
      std::optional<std::string> queue_shape;
      CostState out;
      for (const auto& arm : g.arms()) {
        CostState arm_state = s;
        env_add_after_inplace(arm_state.env, NormalForm::zero(), g.from(), opt.label_send());
        env_add_after_inplace(arm_state.env, arm_state.env.get(g.from()), g.to(),
                              opt.label_recv());
        CostState r = global_cost_state(arm.cont, std::move(arm_state), allow_split, opt);
        acc = acc ? env_max(*acc, r.env) : r.env;
        if (!queue_shape) {
          queue_shape = r.queue.str();
          out.queue = r.queue;
        } else if (*queue_shape != r.queue.str()) {
          throw Error("branch arms disagree on dependency-queue consumption");
        }
      }
      out.env = *acc;
      return out;
    }
    case K::kMsgT: {
      NormalForm gate = s.queue.pop(g.from(), g.to());
      env_add_after_inplace(s.env, gate, g.to(),
                            nf_add(normalize(CostExpr::recv(g.payload())), normalize(g.cost())));
      return global_cost_state(g.cont(), std::move(s), allow_split, opt);
    }
    case K::kBranchT: {
      NormalForm gate = s.queue.pop(g.from(), g.to());
      env_add_after_inplace(s.env, gate, g.to(), opt.label_recv());
      return global_cost_state(g.arms()[g.chosen()].cont, std::move(s), allow_split, opt);
    }
    case K::kEval: {
      env_add_after_inplace(s.env, NormalForm::zero(), g.from(), normalize(g.cost()));
      return global_cost_state(g.cont(), std::move(s), allow_split, opt);
    }
    case K::kSendAct: {
      if (!allow_split) throw Error("split send action in a standard cost fold");
      env_add_after_inplace(s.env, NormalForm::zero(), g.from(),
                            normalize(CostExpr::send(g.payload())));
      s.queue.push(g.from(), g.to(), s.env.get(g.from()));
      return global_cost_state(g.cont(), std::move(s), allow_split, opt);
    }
    case K::kRecvAct: {
      if (!allow_split) throw Error("split receive action in a standard cost fold");
      if (s.queue.empty(g.from(), g.to()))
        throw Error("ill-ordered optimized type: receive before matching send on channel r" +
                    std::to_string(g.from().id) + "->r" + std::to_string(g.to().id));
      NormalForm gate = s.queue.pop(g.from(), g.to());
      env_add_after_inplace(s.env, gate, g.to(),
                            nf_add(normalize(CostExpr::recv(g.payload())), normalize(g.cost())));
      return global_cost_state(g.cont(), std::move(s), allow_split, opt);
    }
    case K::kRec:
      throw Error("global cost requires an unrolled (mu-free) type");
    case K::kRecCall:
      throw Error("unbound recursion variable in cost fold");
  }
  throw Error("unreachable");
}

}  // namespace detail

/// cost(G, ks) for standard global types: unroll, then fold the printed
/// clauses from the empty state.
inline CostEnv global_cost(const GlobalType& g, const std::vector<std::size_t>& ks,
                           const CostOptions& opt = {}) {
  if (contains_split(g))
    throw Error("global_cost does not accept split actions; use global_cost_ext");
  return detail::global_cost_state(unroll(g, ks), CostState{}, false, opt).env;
}

/// Cost fold from an explicit state (stepwise lemma checks; recurrences).
inline CostState global_cost_from(const GlobalType& mu_free, CostState s,
                                  const CostOptions& opt = {}) {
  return detail::global_cost_state(mu_free, std::move(s), true, opt);
}

/// Extended cost covering split send/receive actions: sends append their
/// availability, receives pop their matching entry, per-channel FIFO.
inline CostEnv global_cost_ext(const GlobalType& g, const std::vector<std::size_t>& ks,
                               const CostOptions& opt = {}) {
  return detail::global_cost_state(unroll(g, ks), CostState{}, true, opt).env;
}

// ---------------------------------------------------------------------------
// Well-formedness of dependency queues

namespace detail {

inline bool wf_dep_queue_walk(const GlobalType& g, DepQueue q) {
  using K = GlobalType::Kind;
  switch (g.kind()) {
    case K::kEnd:
      return q.all_empty();
    case K::kMsg:
      if (!q.empty(g.from(), g.to())) return false;
      return wf_dep_queue_walk(g.cont(), std::move(q));
    case K::kMsgT: {
      if (q.empty(g.from(), g.to())) return false;
      q.pop(g.from(), g.to());
      return wf_dep_queue_walk(g.cont(), std::move(q));
    }
    case K::kEval:
      return wf_dep_queue_walk(g.cont(), std::move(q));
    case K::kBranch: {
      if (!q.empty(g.from(), g.to())) return false;
      for (const auto& arm : g.arms())
        if (!wf_dep_queue_walk(arm.cont, q)) return false;
      return true;
    }
    case K::kBranchT: {
      if (q.empty(g.from(), g.to())) return false;
      q.pop(g.from(), g.to());
      return wf_dep_queue_walk(g.arms()[g.chosen()].cont, std::move(q));
    }
    default:
      return false;  // recursion and split actions are outside the printed clauses
  }
}

}  // namespace detail

/// The six printed inference clauses, checked structurally: the queue holds
/// exactly the values the in-transit prefixes of g will consume.
inline bool wf_dep_queue(const GlobalType& g, const DepQueue& q) {
  return detail::wf_dep_queue_walk(g, q);
}

// ---------------------------------------------------------------------------
// Soundness harness

struct SoundnessViolation {
  std::string kind;  // "trace-bound" | "wf-preservation" | "cost-preservation"
  std::string state;
  std::string action;
  std::string detail;
};

struct SoundnessReport {
  bool ok = true;
  std::size_t transitions = 0;
  std::size_t terminal_states = 0;
  std::size_t distinct_final_envs = 0;
  bool via_configuration = false;  // split types run under the projected configuration
  std::vector<SoundnessViolation> violations;

  explicit operator bool() const { return ok; }
};

struct SoundnessOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  std::size_t state_cap = 1000000;
  std::size_t lemma_samples = 8;  // per-transition cost-preservation sampling
  bool check_lemmas = true;
  CostOptions cost;
};

/// Explores every reachable (type, cost-state) pair of unroll(g, ks),
/// deduplicating equal pairs (permutations of independent actions converge),
/// and checks: (1) every complete execution's trace cost is bounded by the
/// global cost, per role, under sampled bindings; (2) WF of the dependency
/// queue is preserved across every transition; (3) cost preservation across
/// every transition. Types with split actions are explored through their
/// projected configuration against global_cost_ext, and the stepwise lemmas
/// (stated for the global LTS) are skipped.
inline SoundnessReport check_soundness(const GlobalType& g, const std::vector<std::size_t>& ks,
                                       const SoundnessOptions& opt = {}) {
  SoundnessReport report;
  const bool split = contains_split(g);
  report.via_configuration = split;

  GlobalType start = unroll(g, ks);
  CostEnv bound = split ? global_cost_ext(g, ks, opt.cost) : global_cost(g, ks, opt.cost);

  std::set<Atom> atoms;
  collect_atoms(bound, atoms);
  auto samples = sample_bindings(atoms, opt.samples, opt.seed);
  auto lemma_samples = sample_bindings(atoms, opt.lemma_samples, opt.seed + 1);

  std::set<std::string> final_envs;
  std::unordered_set<std::string> seen;
  std::size_t visited = 0;

  auto check_terminal = [&](const CostEnv& env, const std::string& where) {
    ++report.terminal_states;
    if (final_envs.insert(env.canonicalized().str()).second)
      ++report.distinct_final_envs;
    LeqResult le = env_leq(env, bound, samples);
    if (!le.ok) {
      report.ok = false;
      std::ostringstream os;
      os << "role r" << le.violation->role.id << " binding#" << le.violation->binding_index
         << ": " << le.violation->lhs.str() << " > " << le.violation->rhs.str();
      report.violations.push_back({"trace-bound", where, "", os.str()});
    }
  };

  if (!split) {
    struct Node {
      GlobalType type;
      CostState state;
      CostEnv total;  // cost of the remaining type from this state
    };
    std::unordered_map<std::string, CostEnv> totals;  // memo keyed like `seen`
    std::vector<Node> stack;
    std::string start_key = start.str() + "##";
    CostEnv start_total = global_cost_from(start, CostState{}, opt.cost).env;
    totals.emplace(start_key, start_total);
    stack.push_back({start, CostState{}, std::move(start_total)});
    seen.insert(start_key);
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (++visited > opt.state_cap) throw BudgetExceeded("soundness exploration state cap");
      if (node.type.is_end()) {
        check_terminal(node.state.env, "end");
        continue;
      }
      for (auto& [a, succ] : global_steps(node.type)) {
        ++report.transitions;
        CostState after = action_cost(a, node.state, opt.cost);
        std::string key = succ.str() + "##" + after.str();
        bool fresh = seen.insert(key).second;
        const CostEnv* succ_total = nullptr;
        if (opt.check_lemmas || fresh) {
          auto it = totals.find(key);
          if (it == totals.end())
            it = totals.emplace(key, global_cost_from(succ, after, opt.cost).env).first;
          succ_total = &it->second;
        }
        if (opt.check_lemmas) {
          if (!wf_dep_queue(succ, after.queue)) {
            report.ok = false;
            report.violations.push_back(
                {"wf-preservation", node.type.str(), a.str(), after.queue.str()});
          }
          LeqResult le = env_leq(*succ_total, node.total, lemma_samples, LeqEffort::kCheap);
          if (!le.ok) {
            report.ok = false;
            report.violations.push_back({"cost-preservation", node.type.str(), a.str(),
                                         "role r" + std::to_string(le.violation->role.id)});
          }
        }
        if (fresh) stack.push_back({std::move(succ), std::move(after), *succ_total});
      }
    }
  } else {
    struct Node {
      Configuration cfg;
      CostState state;
    };
    Configuration cfg0 = initial_configuration(start);
    std::vector<Node> stack{{cfg0, CostState{}}};
    seen.insert(cfg0.str() + "##");
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (++visited > opt.state_cap) throw BudgetExceeded("soundness exploration state cap");
      auto steps = config_steps(node.cfg);
      if (steps.empty()) {
        if (!node.cfg.all_end()) throw Error("deadlocked configuration during soundness check");
        check_terminal(node.state.env, "terminal configuration");
        continue;
      }
      for (auto& [a, succ] : steps) {
        ++report.transitions;
        CostState after = action_cost(a, node.state, opt.cost);
        std::string key = succ.str() + "##" + after.str();
        if (seen.insert(key).second) stack.push_back({std::move(succ), std::move(after)});
      }
    }
  }
  return report;
}

}  // namespace campa

#endif  // CAMPA_COST_HPP_
