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

// The asynchronous message optimization relation. Deciding g1 <= g2 reduces
// to a shared normal form: full messages are split into send/receive halves
// (Init), sends bubble to their leftmost legal position and receives to
// their rightmost (Opt, OBra, IBra), and independent same-kind neighbours
// are ordered by role id (Out, In). The only forbidden swap is a send past
// its own matching receive (same channel), which preserves per-channel FIFO
// causality.

#ifndef CAMPA_OPTIMIZER_HPP_
#define CAMPA_OPTIMIZER_HPP_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "campa/algebra.hpp"
#include "campa/cost.hpp"
#include "campa/core.hpp"
#include "campa/prng.hpp"
#include "campa/projection.hpp"
#include "campa/semantics.hpp"

namespace campa {

namespace detail {

inline std::pair<std::uint32_t, std::uint32_t> send_key(const GlobalType& s) {
  return {s.from().id, s.to().id};  // subject first
}

inline std::pair<std::uint32_t, std::uint32_t> recv_key(const GlobalType& r) {
  return {r.to().id, r.from().id};  // subject (receiver) first
}

inline bool same_channel(Role f1, Role t1, Role f2, Role t2) { return f1 == f2 && t1 == t2; }

/// All one-step rewrites of g toward the normal form, outermost-leftmost
/// first. Each entry is the complete rewritten tree.
inline void collect_rewrites(const GlobalType& g, std::vector<GlobalType>& out,
                             const std::function<GlobalType(const GlobalType&)>& rebuild) {
  using K = GlobalType::Kind;
  switch (g.kind()) {
    case K::kEnd:
    case K::kRecCall:
      return;
    case K::kMsgT:
    case K::kBranchT:
    case K::kEval:
      throw Error("normal form is undefined for runtime-extended types");
    case K::kMsg: {
      // Init: split into the send and receive halves.
      out.push_back(rebuild(GlobalType::send_act(
          g.from(), g.to(), g.payload(),
          GlobalType::recv_act(g.to(), g.from(), g.payload(), g.cost(), g.cont()))));
      collect_rewrites(g.cont(), out, [&, g](const GlobalType& c) {
        return rebuild(g.with_cont(c));
      });
      return;
    }
    case K::kSendAct: {
      const GlobalType& cont = g.cont();
      if (cont.kind() == K::kSendAct && send_key(cont) < send_key(g)) {
        // Out: order adjacent sends by (sender, receiver) id.
        out.push_back(rebuild(cont.with_cont(g.with_cont(cont.cont()))));
      }
      collect_rewrites(cont, out,
                       [&, g](const GlobalType& c) { return rebuild(g.with_cont(c)); });
      return;
    }
    case K::kRecvAct: {
      const GlobalType& cont = g.cont();
      if (cont.kind() == K::kSendAct &&
          !same_channel(cont.from(), cont.to(), g.from(), g.to())) {
        // Opt: a send hops left past a receive on a different channel.
        out.push_back(rebuild(cont.with_cont(g.with_cont(cont.cont()))));
      }
      if (cont.kind() == K::kRecvAct && recv_key(cont) < recv_key(g)) {
        // In: order adjacent receives by (receiver, sender) id.
        out.push_back(rebuild(cont.with_cont(g.with_cont(cont.cont()))));
      }
      if (cont.kind() == K::kBranch &&
          !same_channel(g.from(), g.to(), cont.from(), cont.to())) {
        // IBra: push the receive into every arm.
        GlobalType::Arms arms;
        for (const auto& arm : cont.arms()) arms.push_back({arm.label, g.with_cont(arm.cont)});
        out.push_back(rebuild(cont.with_arms(std::move(arms))));
      }
      collect_rewrites(cont, out,
                       [&, g](const GlobalType& c) { return rebuild(g.with_cont(c)); });
      return;
    }
    case K::kBranch: {
      // OBra: hoist a send that heads every arm identically.
      const auto& arms = g.arms();
      if (arms[0].cont.kind() == K::kSendAct) {
        const GlobalType& head = arms[0].cont;
        bool all = !same_channel(head.from(), head.to(), g.from(), g.to());
        for (std::size_t i = 1; i < arms.size() && all; ++i) {
          const GlobalType& h = arms[i].cont;
          all = h.kind() == K::kSendAct && h.from() == head.from() && h.to() == head.to() &&
                h.payload() == head.payload();
        }
        if (all) {
          GlobalType::Arms stripped;
          for (const auto& arm : arms) stripped.push_back({arm.label, arm.cont.cont()});
          out.push_back(rebuild(GlobalType::send_act(head.from(), head.to(), head.payload(),
                                                     g.with_arms(std::move(stripped)))));
        }
      }
      for (std::size_t i = 0; i < arms.size(); ++i) {
        collect_rewrites(arms[i].cont, out, [&, g, i](const GlobalType& c) {
          GlobalType::Arms copy = g.arms();
          copy[i] = {copy[i].label, c};
          return rebuild(g.with_arms(std::move(copy)));
        });
      }
      return;
    }
    case K::kRec: {
      collect_rewrites(g.body(), out, [&, g](const GlobalType& c) {
        return rebuild(GlobalType::rec(g.rec_name(), c));
      });
      return;
    }
  }
}

}  // namespace detail

/// All single-step rewrites toward the normal form.
inline std::vector<GlobalType> optimizer_rewrites(const GlobalType& g) {
  std::vector<GlobalType> out;
  detail::collect_rewrites(g, out, [](const GlobalType& x) { return x; });
  return out;
}

namespace detail {

/// One split action inside a straight-line segment.
struct SegAction {
  bool is_send = false;
  Role from, to;  // message flow; the subject is `from` for sends, `to` for receives
  SizedType payload;
  CostExpr cost;  // receives only

  std::pair<std::uint32_t, std::uint32_t> channel() const { return {from.id, to.id}; }
  Role subject() const { return is_send ? from : to; }
  Role peer() const { return is_send ? to : from; }

  GlobalType attach(const GlobalType& cont) const {
    return is_send ? GlobalType::send_act(from, to, payload, cont)
                   : GlobalType::recv_act(to, from, payload, cost, cont);
  }
};

inline GlobalType canonical_form(const GlobalType& g);

/// Greedy linearization of a segment under the invariant precedence order
/// (same-channel actions keep their order; nothing else constrains). Sends
/// go as early as the order allows, smallest (subject, peer) first; receives
/// fill in afterwards the same way. This is the unique rewrite-normal
/// arrangement of the segment.
inline std::vector<SegAction> arrange(std::vector<SegAction> actions) {
  const std::size_t n = actions.size();
  std::vector<bool> emitted(n, false);
  std::vector<SegAction> out;
  out.reserve(n);
  auto ready = [&](std::size_t i) {
    for (std::size_t j = 0; j < i; ++j)
      if (!emitted[j] && actions[j].channel() == actions[i].channel()) return false;
    return true;
  };
  for (std::size_t done = 0; done < n; ++done) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (emitted[i] || !ready(i)) continue;
      if (best == n) {
        best = i;
        continue;
      }
      auto key = [&](std::size_t k) {
        return std::tuple<int, std::uint32_t, std::uint32_t>(
            actions[k].is_send ? 0 : 1, actions[k].subject().id, actions[k].peer().id);
      };
      if (key(i) < key(best)) best = i;
    }
    emitted[best] = true;
    out.push_back(actions[best]);
  }
  return out;
}

/// Canonicalizes one segment: splits messages, recursively canonicalizes the
/// terminal, sinks eligible receives into a terminal branch and hoists
/// identical send heads out of it, then arranges the remaining actions.
inline GlobalType canonical_segment(const GlobalType& g) {
  using K = GlobalType::Kind;
  std::vector<SegAction> actions;
  GlobalType cur = g;
  for (;;) {
    if (cur.kind() == K::kMsg) {
      actions.push_back({true, cur.from(), cur.to(), cur.payload(), {}});
      actions.push_back({false, cur.from(), cur.to(), cur.payload(), cur.cost()});
      cur = cur.cont();
    } else if (cur.kind() == K::kSendAct) {
      actions.push_back({true, cur.from(), cur.to(), cur.payload(), {}});
      cur = cur.cont();
    } else if (cur.kind() == K::kRecvAct) {
      actions.push_back({false, cur.from(), cur.to(), cur.payload(), cur.cost()});
      cur = cur.cont();
    } else {
      break;
    }
  }

  GlobalType terminal = GlobalType::end();
  switch (cur.kind()) {
    case K::kEnd:
    case K::kRecCall:
      terminal = cur;
      break;
    case K::kRec:
      terminal = GlobalType::rec(cur.rec_name(), canonical_form(cur.body()));
      break;
    case K::kBranch: {
      GlobalType::Arms arms;
      for (const auto& arm : cur.arms()) arms.push_back({arm.label, canonical_form(arm.cont)});
      auto branch_channel = std::make_pair(cur.from().id, cur.to().id);
      bool changed = true;
      while (changed) {
        changed = false;
        // sink: the latest receive with no same-channel successor moves into
        // every arm (IBra toward the optimal side)
        for (std::size_t i = actions.size(); i > 0; --i) {
          const SegAction& a = actions[i - 1];
          if (a.is_send || a.channel() == branch_channel) continue;
          bool blocked = false;
          for (std::size_t j = i; j < actions.size() && !blocked; ++j)
            if (actions[j].channel() == a.channel()) blocked = true;
          if (blocked) continue;
          for (auto& arm : arms) arm.cont = canonical_form(a.attach(arm.cont));
          actions.erase(actions.begin() + static_cast<long>(i - 1));
          changed = true;
          break;
        }
        if (changed) continue;
        // hoist: a send heading every arm identically moves out (OBra)
        const GlobalType& head = arms[0].cont;
        if (head.kind() == K::kSendAct &&
            std::make_pair(head.from().id, head.to().id) != branch_channel) {
          bool all = true;
          for (std::size_t i = 1; i < arms.size() && all; ++i) {
            const GlobalType& h = arms[i].cont;
            all = h.kind() == K::kSendAct && h.from() == head.from() && h.to() == head.to() &&
                  h.payload() == head.payload();
          }
          if (all) {
            actions.push_back({true, head.from(), head.to(), head.payload(), {}});
            for (auto& arm : arms) arm.cont = canonical_form(arm.cont.cont());
            changed = true;
          }
        }
      }
      terminal = GlobalType::branch(cur.from(), cur.to(), std::move(arms));
      break;
    }
    default:
      throw Error("normal form is undefined for runtime-extended types");
  }

  std::vector<SegAction> ordered = arrange(std::move(actions));
  GlobalType result = terminal;
  for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) result = it->attach(result);
  return result;
}

inline GlobalType canonical_form(const GlobalType& g) { return canonical_segment(g); }

}  // namespace detail

/// Unique normal form of the optimization rewrite system: every message
/// split, sends at their leftmost legal position, receives at their
/// rightmost (including across branches), independent neighbours ordered by
/// role id. Computed directly as the greedy linearization of the invariant
/// same-channel precedence order, which every rewrite rule preserves.
inline GlobalType normal_form(const GlobalType& g) { return detail::canonical_form(g); }

/// Random rule-application order to a rewrite fixpoint, then the canonical
/// arrangement (order-independence tests).
inline GlobalType normal_form_random(const GlobalType& g, Prng& rng,
                                     std::size_t* steps_taken = nullptr) {
  GlobalType cur = g;
  std::size_t steps = 0;
  for (;;) {
    auto rw = optimizer_rewrites(cur);
    if (rw.empty()) break;
    cur = rw[static_cast<std::size_t>(rng.below(rw.size()))];
    ++steps;
  }
  if (steps_taken) *steps_taken = steps;
  return normal_form(cur);
}

/// Decides the optimization relation by normal-form equality (reflexive as
/// implemented).
inline bool optim_leq(const GlobalType& g1, const GlobalType& g2) {
  return normal_form(g1) == normal_form(g2);
}

// ---------------------------------------------------------------------------
// Termination metric (tests assert lexicographic strict decrease per step)

/// (unsplit messages,
///  receive-before-send pairs along continuation paths,
///  branch ancestors of sends + branch descendants of receives,
///  same-chain same-kind role-key inversions)
inline std::array<std::size_t, 4> rewrite_metric(const GlobalType& g) {
  using K = GlobalType::Kind;
  std::array<std::size_t, 4> m{0, 0, 0, 0};

  // branches below a node's subtree
  auto branches_below = [](const GlobalType& t, auto&& self) -> std::size_t {
    switch (t.kind()) {
      case K::kEnd:
      case K::kRecCall:
        return 0;
      case K::kRec:
        return self(t.body(), self);
      case K::kBranch:
      case K::kBranchT: {
        std::size_t n = 1;
        for (const auto& arm : t.arms()) n += self(arm.cont, self);
        return n;
      }
      default:
        return self(t.cont(), self);
    }
  };

  auto inversions = [](std::vector<std::pair<std::uint32_t, std::uint32_t>>& keys) {
    std::size_t inv = 0;
    for (size_t i = 0; i < keys.size(); ++i)
      for (size_t j = i + 1; j < keys.size(); ++j)
        if (keys[j] < keys[i]) ++inv;
    return inv;
  };

  // chain-local walk: collect send and recv keys of one maximal prefix chain
  auto walk = [&](const GlobalType& t, std::size_t open_recvs, std::size_t branch_depth,
                  auto&& self) -> void {
    GlobalType cur = t;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> send_keys, recv_keys;
    for (;;) {
      if (cur.kind() == K::kSendAct) {
        m[1] += open_recvs;
        m[2] += branch_depth;
        send_keys.push_back(detail::send_key(cur));
        cur = cur.cont();
      } else if (cur.kind() == K::kRecvAct) {
        ++open_recvs;
        m[2] += branches_below(cur.cont(), branches_below);
        recv_keys.push_back(detail::recv_key(cur));
        cur = cur.cont();
      } else {
        break;
      }
    }
    m[3] += inversions(send_keys) + inversions(recv_keys);
    switch (cur.kind()) {
      case K::kEnd:
      case K::kRecCall:
        return;
      case K::kMsg:
      case K::kMsgT:
      case K::kEval:
        if (cur.kind() == K::kMsg) ++m[0];
        self(cur.cont(), open_recvs, branch_depth, self);
        return;
      case K::kRec:
        self(cur.body(), open_recvs, branch_depth, self);
        return;
      case K::kBranch:
      case K::kBranchT:
        for (const auto& arm : cur.arms()) self(arm.cont, open_recvs, branch_depth + 1, self);
        return;
      default:
        return;
    }
  };
  walk(g, 0, 0, walk);
  return m;
}

// ---------------------------------------------------------------------------
// Theorem-backed checks

struct OptDeadlockReport {
  bool related = false;
  DeadlockReport deadlock;

  bool ok() const { return related && deadlock.ok; }
};

/// Theorem: if g2 is deadlock-free and g1 <= g2, then g1 is deadlock-free.
/// Verified here by exploration of g1's projected configuration.
inline OptDeadlockReport check_opt_deadlock(const GlobalType& g1, const GlobalType& g2,
                                            const std::vector<std::size_t>& ks,
                                            ExploreLimits limits = {}) {
  OptDeadlockReport report;
  report.related = optim_leq(g1, g2);
  if (!report.related) return report;
  report.deadlock = explore_deadlock(initial_configuration(unroll(g1, ks)), limits);
  return report;
}

struct OptCostReport {
  bool related = false;
  LeqResult leq;

  bool ok() const { return related && leq.ok; }
};

/// Theorem: with zero send costs, cost(g1) <= cost(g2) whenever g1 <= g2.
inline OptCostReport check_opt_cost(const GlobalType& g1, const GlobalType& g2,
                                    const std::vector<std::size_t>& ks, std::size_t samples = 100,
                                    std::uint64_t seed = 42, const CostOptions& opt = {}) {
  OptCostReport report;
  report.related = optim_leq(g1, g2);
  if (!report.related) return report;
  CostEnv c1 = global_cost_ext(g1, ks, opt);
  CostEnv c2 = global_cost_ext(g2, ks, opt);
  std::set<Atom> atoms;
  collect_atoms(c1, atoms);
  collect_atoms(c2, atoms);
  auto bindings = sample_bindings(atoms, samples, seed, 1000, /*zero_send=*/true);
  report.leq = env_leq(c1, c2, bindings);
  return report;
}

}  // namespace campa

#endif  // CAMPA_OPTIMIZER_HPP_
