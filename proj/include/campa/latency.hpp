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

// Latency of recursive protocols: cost recurrences T(n+1) = cost([end/X]G, T(n)),
// difference equations Delta(n) = T(n+1) - T(n), and the stabilized Delta as
// the average cost per iteration. The subtraction is carried out by exact
// max-plus factorization (find D with T(n) + D = T(n+1)); when no such D
// exists the difference is confirmed numerically on sampled bindings.

#ifndef CAMPA_LATENCY_HPP_
#define CAMPA_LATENCY_HPP_

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "campa/algebra.hpp"
#include "campa/cost.hpp"
#include "campa/core.hpp"
#include "campa/semantics.hpp"
#include "campa/unroll.hpp"

namespace campa {

// ---------------------------------------------------------------------------
// Max-plus factorization

namespace detail {

inline std::optional<Term> term_minus(const Term& a, const Term& b) {
  Term d;
  d.k = a.k - b.k;
  if (d.k.sign() < 0) return std::nullopt;
  size_t i = 0, j = 0;
  while (i < a.coeffs.size() || j < b.coeffs.size()) {
    if (j == b.coeffs.size() ||
        (i < a.coeffs.size() && a.coeffs[i].first < b.coeffs[j].first)) {
      d.coeffs.push_back(a.coeffs[i++]);
    } else if (i == a.coeffs.size() || b.coeffs[j].first < a.coeffs[i].first) {
      return std::nullopt;  // b has an atom a lacks: negative coefficient
    } else {
      Rat c = a.coeffs[i].second - b.coeffs[j].second;
      if (c.sign() < 0) return std::nullopt;
      if (!c.is_zero()) d.coeffs.emplace_back(a.coeffs[i].first, c);
      ++i;
      ++j;
    }
  }
  return d;
}

}  // namespace detail

/// Finds the max-plus polynomial D with B + D == A over all nonnegative
/// assignments, if one exists. Candidate terms are differences of terms of A
/// and B; each candidate d must keep B + d under A, and the surviving set
/// must multiply back to exactly A.
inline std::optional<NormalForm> nf_factor_diff(const NormalForm& A, const NormalForm& B) {
  NormalForm a = canonical(A), b = canonical(B);
  if (a == b) return NormalForm::zero();
  std::vector<Term> candidates;
  for (const Term& ta : a.terms)
    for (const Term& tb : b.terms)
      if (auto d = detail::term_minus(ta, tb)) candidates.push_back(*d);
  detail::sort_dedup(candidates);
  NormalForm d;
  for (const Term& c : candidates) {
    bool fits = true;
    for (const Term& tb : b.terms) {
      if (!detail::term_under_hull(detail::term_add(tb, c), a.terms)) {
        fits = false;
        break;
      }
    }
    if (fits) d.terms.push_back(c);
  }
  if (d.terms.empty()) return std::nullopt;
  detail::reduce_pointwise(d.terms);
  d = canonical(d);
  if (canonical(nf_add(b, d)) == a) return d;
  return std::nullopt;
}

/// Least-effort covering difference: the smallest natural D with B + D >= A,
/// built by giving every term of A its minimal nonnegative per-term
/// increment over B. Used when the difference A - B is not itself a max-plus
/// function (per-region growth rates differ); the result is a tight upper
/// bound of the difference, which is what the latency definition asks for.
inline std::optional<NormalForm> nf_cover_diff(const NormalForm& A, const NormalForm& B) {
  NormalForm a = canonical(A), b = canonical(B);
  if (a == b) return NormalForm::zero();
  NormalForm d;
  for (const Term& ta : a.terms) {
    std::optional<Term> best;
    std::optional<Rat> best_weight;
    for (const Term& tb : b.terms) {
      auto diff = detail::term_minus(ta, tb);
      if (!diff) continue;
      Rat weight = diff->k;
      for (const auto& [id, c] : diff->coeffs) weight += c;
      if (!best || weight < *best_weight || (weight == *best_weight && *diff < *best)) {
        best = diff;
        best_weight = weight;
      }
    }
    if (!best) return std::nullopt;
    d.terms.push_back(*best);
  }
  detail::reduce_pointwise(d.terms);
  return canonical(d);
}

// ---------------------------------------------------------------------------
// Recurrences

/// T(n) for a protocol of shape prefix.mu X. G: T(0) is the cost of the
/// prefix (empty for a bare mu), and one step folds the body with end
/// substituted for the recursion variable. The dependency queue is threaded
/// so split protocols whose prefix seeds the queue stay well defined.
class Recurrence {
 public:
  explicit Recurrence(const GlobalType& g, CostOptions opt = {}) : opt_(opt) {
    GlobalType cur = g;
    // peel straight-line prefixes in front of the binder
    while (cur.kind() != GlobalType::Kind::kRec) {
      switch (cur.kind()) {
        case GlobalType::Kind::kMsg:
        case GlobalType::Kind::kSendAct:
        case GlobalType::Kind::kRecvAct:
        case GlobalType::Kind::kEval:
          prefix_.push_back(cur);
          cur = cur.cont();
          break;
        default:
          throw Error("recurrence requires a (prefixed) single recursive protocol");
      }
    }
    if (binder_count(cur.body()) != 0)
      throw Error("recurrence requires exactly one recursion binder; split the protocol first");
    body_end_ = subst_top(cur.body(), GlobalType::end());
    CostState s;
    for (const GlobalType& node : prefix_)
      s = global_cost_from(node.with_cont(GlobalType::end()), std::move(s), opt_);
    states_.push_back(std::move(s));
  }

  const GlobalType& body() const { return body_end_; }

  /// T(n), memoized. Entries are kept canonical so successive differences
  /// factor against minimal term sets.
  const CostState& at(std::size_t n) {
    while (states_.size() <= n) {
      CostState next = global_cost_from(body_end_, states_.back(), opt_);
      next.env = next.env.canonicalized();
      states_.push_back(std::move(next));
    }
    return states_[n];
  }

 private:
  CostOptions opt_;
  std::vector<GlobalType> prefix_;
  GlobalType body_end_;
  std::deque<CostState> states_;  // stable references across growth
};

struct LatencyResult {
  CostEnv env;                    // stabilized Delta; Sub-free when !numeric
  bool numeric = false;           // stabilization confirmed by evaluation only
  bool upper_bound = false;       // some role needed a covering difference
  std::size_t stabilized_at = 0;  // smallest n with Delta(n) == Delta(n+1)
  // Numeric route only: the evaluable closed form T(n+1) - T(n) per role.
  std::map<std::uint32_t, CostExpr> sub_exprs;

  explicit operator bool() const { return !env.entries().empty() || !sub_exprs.empty(); }
};

namespace detail {

struct DeltaEnv {
  CostEnv env;
  bool exact = true;  // false when some role used the covering difference
};

inline std::optional<DeltaEnv> delta_env_full(Recurrence& rec, std::size_t n) {
  const CostEnv& tn = rec.at(n).env;
  const CostEnv& tn1 = rec.at(n + 1).env;
  DeltaEnv d;
  std::set<Role> roles = tn1.domain();
  for (Role r : tn.domain()) roles.insert(r);
  for (Role r : roles) {
    auto dr = nf_factor_diff(tn1.get(r), tn.get(r));
    if (!dr) {
      d.exact = false;
      dr = nf_cover_diff(tn1.get(r), tn.get(r));
    }
    if (!dr) return std::nullopt;
    d.env.set(r, *dr);
  }
  return d;
}

inline std::optional<CostEnv> delta_env(Recurrence& rec, std::size_t n) {
  auto d = delta_env_full(rec, n);
  if (!d) return std::nullopt;
  return d->env;
}

}  // namespace detail

/// Average cost per iteration: the stabilized difference equation. Fails
/// loudly if Delta does not stabilize by n_max.
inline LatencyResult latency(const GlobalType& g, std::size_t n_max = 8,
                             const CostOptions& opt = {}, std::size_t numeric_samples = 100,
                             std::uint64_t seed = 42) {
  Recurrence rec(g, opt);
  // Symbolic route: difference (or, where the difference is not max-plus,
  // its least covering upper bound) per iteration, until two consecutive
  // agreements. Early iterations may not resolve at all (the recurrence is
  // not in its steady state yet); only a full sweep without agreement falls
  // back to numerics.
  std::optional<detail::DeltaEnv> prev;
  bool resolved_any = false;
  for (std::size_t n = 1; n + 1 <= n_max; ++n) {
    auto d = detail::delta_env_full(rec, n);
    if (!d) {
      prev.reset();
      continue;
    }
    resolved_any = true;
    if (prev && d->env.canonicalized() == prev->env.canonicalized()) {
      LatencyResult res;
      res.env = d->env;
      res.upper_bound = !(d->exact && prev->exact);
      res.stabilized_at = n - 1;
      return res;
    }
    prev = d;
  }
  if (resolved_any && prev)
    throw Error("latency did not stabilize by n_max=" + std::to_string(n_max));

  // Numeric route: confirm stabilization by exact evaluation on samples and
  // report the evaluable closed form of the last difference.
  std::set<Atom> atoms;
  collect_atoms(rec.at(n_max).env, atoms);
  auto samples = sample_bindings(atoms, numeric_samples, seed);
  std::set<Role> roles = rec.at(n_max).env.domain();
  auto delta_values = [&](std::size_t n) {
    std::vector<Rat> vals;
    for (Role r : roles)
      for (const auto& b : samples)
        vals.push_back(evaluate(rec.at(n + 1).env.get(r), b) - evaluate(rec.at(n).env.get(r), b));
    return vals;
  };
  for (std::size_t n = 1; n + 1 < n_max; ++n) {
    if (delta_values(n) == delta_values(n + 1)) {
      LatencyResult res;
      res.numeric = true;
      res.stabilized_at = n;
      for (Role r : roles)
        res.sub_exprs.emplace(r.id, CostExpr::sub(denormalize(rec.at(n + 1).env.get(r)),
                                                  denormalize(rec.at(n).env.get(r))));
      return res;
    }
  }
  throw Error("latency did not stabilize by n_max=" + std::to_string(n_max));
}

/// Number of interactions of g in which p occurs, per iteration. For split
/// actions only the acting half counts, so a split message still counts once
/// per endpoint.
inline std::size_t interaction_count(const GlobalType& g, Role p) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
    case GlobalType::Kind::kRecCall:
      return 0;
    case GlobalType::Kind::kRec:
      return interaction_count(g.body(), p);
    case GlobalType::Kind::kMsg:
    case GlobalType::Kind::kMsgT:
      return (g.from() == p || g.to() == p ? 1 : 0) + interaction_count(g.cont(), p);
    case GlobalType::Kind::kEval:
      return interaction_count(g.cont(), p);
    case GlobalType::Kind::kSendAct:
      return (g.from() == p ? 1 : 0) + interaction_count(g.cont(), p);
    case GlobalType::Kind::kRecvAct:
      return (g.to() == p ? 1 : 0) + interaction_count(g.cont(), p);
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT: {
      std::size_t arm_max = 0;
      for (const auto& arm : g.arms())
        arm_max = std::max(arm_max, interaction_count(arm.cont, p));
      return (g.from() == p || g.to() == p ? 1 : 0) + arm_max;
    }
  }
  return 0;
}

/// Latency relative to p: every entry divided by p's interactions per
/// iteration of the body.
inline LatencyResult latency_rel(const GlobalType& g, Role p, std::size_t n_max = 8,
                                 const CostOptions& opt = {}) {
  GlobalType cur = g;
  while (cur.kind() == GlobalType::Kind::kMsg || cur.kind() == GlobalType::Kind::kSendAct ||
         cur.kind() == GlobalType::Kind::kRecvAct || cur.kind() == GlobalType::Kind::kEval)
    cur = cur.cont();
  if (cur.kind() != GlobalType::Kind::kRec)
    throw Error("latency_rel requires a (prefixed) recursive protocol");
  std::size_t count = interaction_count(subst_top(cur.body(), GlobalType::end()), p);
  if (count == 0) throw Error("role does not occur in the recursion body");
  LatencyResult base = latency(g, n_max, opt);
  LatencyResult res = base;
  for (const auto& [id, nf] : base.env.entries())
    res.env.set(Role{id}, nf_scale(Rat(1, static_cast<long>(count)), nf));
  return res;
}

// ---------------------------------------------------------------------------
// Splitting nested recursion

struct SplitPart {
  GlobalType type;     // at most one mu-binder
  std::string param;   // iteration parameter (k1, k2, ...) — empty for the outermost
};

namespace detail {

/// Finds the unique exit continuation of an inner recursion body: a leaf
/// that is end or a free recursion variable (relative to the inner binder).
inline void collect_exits(const GlobalType& g, std::size_t depth,
                          std::vector<GlobalType>& exits) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
      exits.push_back(g);
      return;
    case GlobalType::Kind::kRecCall:
      if (g.rec_index() >= depth)
        exits.push_back(GlobalType::rec_call(g.rec_index() - depth, g.rec_name()));
      return;
    case GlobalType::Kind::kRec:
      collect_exits(g.body(), depth + 1, exits);
      return;
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT:
      for (const auto& arm : g.arms()) collect_exits(arm.cont, depth, exits);
      return;
    default:
      collect_exits(g.cont(), depth, exits);
      return;
  }
}

/// Replaces free variables (>= depth) and end leaves with `value`.
inline GlobalType replace_exits(const GlobalType& g, std::size_t depth, const GlobalType& value) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
      return value;
    case GlobalType::Kind::kRecCall:
      return g.rec_index() >= depth ? value : g;
    case GlobalType::Kind::kRec:
      return GlobalType::rec(g.rec_name(), replace_exits(g.body(), depth + 1, value));
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT: {
      GlobalType::Arms arms;
      for (const auto& arm : g.arms())
        arms.push_back({arm.label, replace_exits(arm.cont, depth, value)});
      return g.with_arms(std::move(arms));
    }
    default:
      return g.with_cont(replace_exits(g.cont(), depth, value));
  }
}

inline GlobalType split_walk(const GlobalType& g, std::vector<SplitPart>& parts, int& counter,
                             bool outermost_seen);

/// Replaces one inner recursive subterm with a parameterized-cost block: one
/// Eval per participant carrying the symbol k_i*costw(r), followed by the
/// loop's unique exit.
inline GlobalType replace_inner(const GlobalType& inner, std::vector<SplitPart>& parts,
                                int& counter) {
  std::string param = "k" + std::to_string(++counter);
  // recursively split the inner protocol itself (with end at its exits)
  GlobalType closed = replace_exits(inner, 0, GlobalType::end());
  GlobalType closed_split = split_walk(closed, parts, counter, /*outermost_seen=*/false);
  parts.push_back({closed_split, param});

  std::vector<GlobalType> exits;
  collect_exits(inner.body(), 1, exits);
  std::optional<GlobalType> exit;
  for (const GlobalType& e : exits) {
    if (!exit) {
      exit = e;
    } else if (!(*exit == e)) {
      throw Error("cannot split: inner recursion has several distinct exits");
    }
  }
  if (!exit) exit = GlobalType::end();

  GlobalType repl = *exit;
  std::set<Role> rs = roles_of(inner);
  for (auto it = rs.rbegin(); it != rs.rend(); ++it) {
    CostExpr c = CostExpr::var(param + "*costw(r" + std::to_string(it->id) + ")");
    repl = GlobalType::eval(*it, unit_type(), c, repl);
  }
  return repl;
}

inline GlobalType split_walk(const GlobalType& g, std::vector<SplitPart>& parts, int& counter,
                             bool outermost_seen) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
    case GlobalType::Kind::kRecCall:
      return g;
    case GlobalType::Kind::kRec: {
      if (!outermost_seen)
        return GlobalType::rec(g.rec_name(), split_walk(g.body(), parts, counter, true));
      return replace_inner(g, parts, counter);
    }
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT: {
      GlobalType::Arms arms;
      for (const auto& arm : g.arms())
        arms.push_back({arm.label, split_walk(arm.cont, parts, counter, outermost_seen)});
      return g.with_arms(std::move(arms));
    }
    default:
      return g.with_cont(split_walk(g.cont(), parts, counter, outermost_seen));
  }
}

}  // namespace detail

/// Splits a protocol with nested recursion into parts with at most one
/// binder each. Inner loops are replaced by parameterized per-participant
/// costs k_i*costw(inner). Parts come back innermost first; the transformed
/// outermost protocol is last with an empty param.
inline std::vector<SplitPart> split_nested(const GlobalType& g) {
  if (!guarded(g)) throw Error("split_nested requires a guarded protocol");
  std::vector<SplitPart> parts;
  int counter = 0;
  if (binder_count(g) <= 1) {
    parts.push_back({g, ""});
    return parts;
  }
  GlobalType outer = detail::split_walk(g, parts, counter, false);
  parts.push_back({outer, ""});
  return parts;
}

// ---------------------------------------------------------------------------
// Theorem checks

struct LatencyTheoremReport {
  bool ok = true;
  std::size_t stabilized_at = 0;
  std::size_t correspondence_checks = 0;  // theorem: cost differences vs (k1-k2)*costw
  std::size_t trace_checks = 0;           // theorem: trace cost vs k*costw + cost(G, k0)
  std::vector<std::string> violations;

  explicit operator bool() const { return ok; }
};

struct LatencyTheoremOptions {
  std::size_t k_max = 6;        // range of the cost-level inequalities
  std::size_t trace_k_max = 2;  // range of the exhaustive trace-level check
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  std::size_t state_cap = 1000000;
  CostOptions cost;
};

/// Checks, under sampled bindings, the two latency theorems for a single-mu
/// protocol: (1) cost(G,k1) <= (k1-k2)*costw(G) + cost(G,k2) for all
/// stabilization <= k2 < k1 <= k_max, plus the derived bound cost(G,k) <=
/// k*costw(G) + cost(G,k0); (2) every complete trace of the k-unrolling has
/// cost <= k*costw(G) + cost(G,k0), checked exhaustively for k up to
/// trace_k_max (the trace side follows from (1) and bounded-cost soundness
/// for larger k).
inline LatencyTheoremReport check_latency_theorems(const GlobalType& g,
                                                   const LatencyTheoremOptions& topt = {}) {
  LatencyTheoremReport report;
  const std::size_t k_max = topt.k_max;
  const CostOptions& opt = topt.cost;
  LatencyResult lat = latency(g, 8, opt);
  if (lat.numeric) throw Error("latency theorems need a symbolic latency");
  std::size_t k0 = std::max<std::size_t>(lat.stabilized_at, 1);
  report.stabilized_at = lat.stabilized_at;

  auto cost_at = [&](std::size_t k) {
    return contains_split(g) ? global_cost_ext(g, {k}, opt) : global_cost(g, {k}, opt);
  };

  CostEnv costw = lat.env;
  CostEnv cost_k0 = cost_at(k0);

  std::set<Atom> atoms;
  collect_atoms(costw, atoms);
  collect_atoms(cost_at(k_max), atoms);
  auto bindings = sample_bindings(atoms, topt.samples, topt.seed);

  auto scaled = [&](std::size_t m, const CostEnv& env) {
    CostEnv out;
    for (const auto& [id, nf] : env.entries())
      out.set(Role{id}, nf_scale(Rat(static_cast<long>(m)), nf));
    return out;
  };

  for (std::size_t k2 = k0; k2 <= k_max; ++k2) {
    CostEnv ck2 = cost_at(k2);
    for (std::size_t k1 = k2 + 1; k1 <= k_max; ++k1) {
      CostEnv lhs = cost_at(k1);
      CostEnv rhs;
      CostEnv stepped = scaled(k1 - k2, costw);
      for (Role r : lhs.domain())
        rhs.set(r, nf_add(ck2.get(r), stepped.get(r)));
      ++report.correspondence_checks;
      LeqResult le = env_leq(lhs, rhs, bindings);
      if (!le.ok) {
        report.ok = false;
        report.violations.push_back("correspondence failed at k1=" + std::to_string(k1) +
                                    " k2=" + std::to_string(k2) + " role r" +
                                    std::to_string(le.violation->role.id));
      }
    }
  }

  // cost-level half of the soundness theorem for the whole range
  for (std::size_t k = 1; k <= k_max; ++k) {
    CostEnv lhs = cost_at(k);
    CostEnv rhs;
    CostEnv stepped = scaled(k, costw);
    std::set<Role> roles = cost_k0.domain();
    for (Role r : stepped.domain()) roles.insert(r);
    for (Role r : roles) rhs.set(r, nf_add(cost_k0.get(r), stepped.get(r)));
    ++report.correspondence_checks;
    LeqResult le = env_leq(lhs, rhs, bindings);
    if (!le.ok) {
      report.ok = false;
      report.violations.push_back("cost bound failed at k=" + std::to_string(k) + " role r" +
                                  std::to_string(le.violation->role.id));
    }
  }

  // trace side: dedup-explored executions of each unrolling
  const std::size_t state_cap = topt.state_cap;
  const std::uint64_t seed = topt.seed;
  for (std::size_t k = 1; k <= std::min(k_max, topt.trace_k_max); ++k) {
    CostEnv rhs;
    CostEnv stepped = scaled(k, costw);
    std::set<Role> roles = cost_k0.domain();
    for (Role r : stepped.domain()) roles.insert(r);
    for (Role r : roles) rhs.set(r, nf_add(cost_k0.get(r), stepped.get(r)));

    // walk terminal envs with the dedup exploration
    (void)seed;
    GlobalType start = unroll(g, {k});
    std::unordered_set<std::string> seen;
    std::vector<std::pair<GlobalType, CostState>> stack{{start, CostState{}}};
    std::vector<std::pair<Configuration, CostState>> cstack;
    bool split = contains_split(g);
    if (split) {
      Configuration cfg0 = initial_configuration(start);
      cstack.push_back({cfg0, CostState{}});
    }
    std::size_t visited = 0;
    auto check_env = [&](const CostEnv& env) {
      ++report.trace_checks;
      LeqResult le = env_leq(env, rhs, bindings);
      if (!le.ok) {
        report.ok = false;
        report.violations.push_back("trace bound failed at k=" + std::to_string(k) + " role r" +
                                    std::to_string(le.violation->role.id));
      }
    };
    if (!split) {
      seen.insert(start.str() + "##");
      while (!stack.empty()) {
        auto [ty, st] = std::move(stack.back());
        stack.pop_back();
        if (++visited > state_cap) throw BudgetExceeded("latency theorem exploration");
        if (ty.is_end()) {
          check_env(st.env);
          continue;
        }
        for (auto& [a, succ] : global_steps(ty)) {
          CostState after = action_cost(a, st, opt);
          std::string key = succ.str() + "##" + after.str();
          if (seen.insert(key).second) stack.push_back({std::move(succ), std::move(after)});
        }
      }
    } else {
      seen.insert(cstack[0].first.str() + "##");
      while (!cstack.empty()) {
        auto [cfg, st] = std::move(cstack.back());
        cstack.pop_back();
        if (++visited > state_cap) throw BudgetExceeded("latency theorem exploration");
        auto steps = config_steps(cfg);
        if (steps.empty()) {
          check_env(st.env);
          continue;
        }
        for (auto& [a, succ] : steps) {
          CostState after = action_cost(a, st, opt);
          std::string key = succ.str() + "##" + after.str();
          if (seen.insert(key).second) cstack.push_back({std::move(succ), std::move(after)});
        }
      }
    }
  }
  return report;
}

}  // namespace campa

#endif  // CAMPA_LATENCY_HPP_
