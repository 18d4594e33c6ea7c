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

// Symbolic cost algebra. The cost grammar (constants, atoms, +, max,
// nonnegative scalar *) is closed under a max-plus polynomial normal form:
// a set of linear terms over atoms, meaning the pointwise maximum. Terms
// inside the upper convex hull of the others are redundant over the
// nonnegative orthant; removing them (exact LP) yields a canonical form, so
// symbolic equality is normal-form identity.

#ifndef CAMPA_ALGEBRA_HPP_
#define CAMPA_ALGEBRA_HPP_

#include <algorithm>
#include <functional>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "campa/core.hpp"
#include "campa/prng.hpp"
#include "campa/rational.hpp"
#include "campa/simplex.hpp"

namespace campa {

// ---------------------------------------------------------------------------
// Atoms

/// Atomic symbol of a cost expression: a size variable, a cost variable, or
/// an uninterpreted send/receive cost keyed by (base type, normalized size).
/// The composite key is precomputed; atom comparisons sit on the hottest
/// paths of the state exploration.
struct Atom {
  enum class Kind { kSizeVar, kCostVar, kSend, kRecv };

  Kind kind = Kind::kCostVar;
  std::string name;  // variable name, or base type name for kSend/kRecv
  SizeExpr size;     // kSend/kRecv only

  static Atom size_var(const std::string& name) {
    Atom a{Kind::kSizeVar, name, {}};
    a.key_ = "n:" + name;
    return a;
  }
  static Atom cost_var(const std::string& name) {
    Atom a{Kind::kCostVar, name, {}};
    a.key_ = "v:" + name;
    return a;
  }
  static Atom comm(Kind kind, const SizedType& t) {
    Atom a{kind, t.base, t.size};
    a.key_ = (kind == Kind::kSend ? "s:" : "r:") + t.base + "^" + t.size.str();
    return a;
  }

  const std::string& key() const { return key_; }

  friend bool operator==(const Atom& a, const Atom& b) { return a.key_ == b.key_; }
  friend bool operator<(const Atom& a, const Atom& b) { return a.key_ < b.key_; }

 private:
  Atom(Kind k, std::string n, SizeExpr s) : kind(k), name(std::move(n)), size(std::move(s)) {}

  std::string key_;

 public:
  Atom() = default;
};

inline Atom send_atom(const SizedType& t) { return Atom::comm(Atom::Kind::kSend, t); }
inline Atom recv_atom(const SizedType& t) { return Atom::comm(Atom::Kind::kRecv, t); }

/// Process-wide atom interning. Normal-form terms carry integer ids; the
/// table resolves them back for evaluation and printing. Interning order is
/// deterministic for a fixed execution path.
class AtomTable {
 public:
  static AtomTable& get() {
    static AtomTable table;
    return table;
  }

  std::uint32_t id(const Atom& a) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ids_.find(a.key());
    if (it != ids_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(atoms_.size());
    atoms_.push_back(a);
    ids_.emplace(a.key(), id);
    return id;
  }

  /// Entries are append-only and a deque keeps references stable, so reads
  /// only need the lock to observe the size.
  const Atom& atom(std::uint32_t id) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (id >= atoms_.size()) throw Error("unknown atom id");
    }
    return atoms_[id];
  }

 private:
  mutable std::mutex mu_;
  std::deque<Atom> atoms_;
  std::map<std::string, std::uint32_t> ids_;
};

using AtomId = std::uint32_t;

inline AtomId intern(const Atom& a) { return AtomTable::get().id(a); }

// ---------------------------------------------------------------------------
// Bindings

/// Total assignment used to evaluate expressions: sizes, cost variables,
/// and an interpretation of send/recv atoms. Atom-keyed values take
/// precedence over the (optional) size-driven cost model functions.
struct Binding {
  std::map<std::string, Rat> sizes;
  std::map<std::string, Rat> vars;
  std::map<std::string, Rat> comm;  // Atom::key() -> value
  // Size-driven fallbacks (is_send, payload, concrete size) -> value.
  std::function<std::optional<Rat>(bool, const SizedType&, const Rat&)> comm_model;
  bool zero_send = false;

  Rat size_value(const std::string& name) const {
    auto it = sizes.find(name);
    if (it == sizes.end()) throw Error("unbound size variable: " + name);
    return it->second;
  }

  Rat var_value(const std::string& name) const {
    auto it = vars.find(name);
    if (it == vars.end()) throw Error("unbound cost variable: " + name);
    return it->second;
  }

  Rat comm_value(bool is_send, const SizedType& payload) const {
    if (zero_send && is_send) return Rat(0);
    Atom a = is_send ? send_atom(payload) : recv_atom(payload);
    auto it = comm.find(a.key());
    if (it != comm.end()) return it->second;
    if (comm_model) {
      Rat sz = payload.size.evaluate(sizes);
      if (auto v = comm_model(is_send, payload, sz)) return *v;
    }
    throw Error("unbound communication cost: " + a.key());
  }
};

/// Standard interpretation. Sub-free expressions evaluate nonnegative; Sub
/// is exact subtraction and appears only inside latency internals.
inline Rat evaluate(const CostExpr& e, const Binding& b) {
  switch (e.kind()) {
    case CostExpr::Kind::kConst: return e.k();
    case CostExpr::Kind::kSize: return e.size().evaluate(b.sizes);
    case CostExpr::Kind::kVar: return b.var_value(e.name());
    case CostExpr::Kind::kSend: return b.comm_value(true, e.payload());
    case CostExpr::Kind::kRecv: return b.comm_value(false, e.payload());
    case CostExpr::Kind::kAdd: return evaluate(e.lhs(), b) + evaluate(e.rhs(), b);
    case CostExpr::Kind::kMax: return max(evaluate(e.lhs(), b), evaluate(e.rhs(), b));
    case CostExpr::Kind::kScale: return e.k() * evaluate(e.lhs(), b);
    case CostExpr::Kind::kSub: return evaluate(e.lhs(), b) - evaluate(e.rhs(), b);
  }
  throw Error("unreachable");
}

inline void collect_atoms(const CostExpr& e, std::set<Atom>& out) {
  switch (e.kind()) {
    case CostExpr::Kind::kConst: return;
    case CostExpr::Kind::kSize: {
      std::set<std::string> vars;
      e.size().collect_vars(vars);
      for (const auto& v : vars) out.insert(Atom::size_var(v));
      return;
    }
    case CostExpr::Kind::kVar:
      out.insert(Atom::cost_var(e.name()));
      return;
    case CostExpr::Kind::kSend: {
      out.insert(send_atom(e.payload()));
      std::set<std::string> vars;
      e.payload().size.collect_vars(vars);
      for (const auto& v : vars) out.insert(Atom::size_var(v));
      return;
    }
    case CostExpr::Kind::kRecv: {
      out.insert(recv_atom(e.payload()));
      std::set<std::string> vars;
      e.payload().size.collect_vars(vars);
      for (const auto& v : vars) out.insert(Atom::size_var(v));
      return;
    }
    case CostExpr::Kind::kAdd:
    case CostExpr::Kind::kMax:
    case CostExpr::Kind::kSub:
      collect_atoms(e.lhs(), out);
      collect_atoms(e.rhs(), out);
      return;
    case CostExpr::Kind::kScale:
      collect_atoms(e.lhs(), out);
      return;
  }
}

/// Deterministic sampled binding: atoms are assigned in sorted key order, so
/// the same seed and atom set give the same sample regardless of discovery
/// order. Values are rationals in [0, hi].
inline Binding random_binding(const std::set<Atom>& atoms, Prng& rng, long hi = 1000,
                              bool zero_send = false) {
  Binding b;
  b.zero_send = zero_send;
  for (const Atom& a : atoms) {
    Rat v = rng.rat(hi);
    switch (a.kind) {
      case Atom::Kind::kSizeVar: b.sizes[a.name] = v; break;
      case Atom::Kind::kCostVar: b.vars[a.name] = v; break;
      case Atom::Kind::kSend: b.comm[a.key()] = zero_send ? Rat(0) : v; break;
      case Atom::Kind::kRecv: b.comm[a.key()] = v; break;
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Normal form

/// One max-plus term: constant + sum of coefficient * atom (by interned id).
struct Term {
  Rat k;
  std::vector<std::pair<AtomId, Rat>> coeffs;  // sorted by atom id, nonzero

  friend bool operator==(const Term& a, const Term& b) {
    return a.k == b.k && a.coeffs == b.coeffs;
  }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.k < b.k;
  }

  /// Pointwise t <= s over nonnegative atom values.
  static bool dominated(const Term& t, const Term& s) {
    if (s.k < t.k) return false;
    size_t i = 0, j = 0;
    while (i < t.coeffs.size()) {
      if (j == s.coeffs.size()) return false;
      if (s.coeffs[j].first < t.coeffs[i].first) {
        ++j;
      } else if (t.coeffs[i].first == s.coeffs[j].first) {
        if (s.coeffs[j].second < t.coeffs[i].second) return false;
        ++i;
        ++j;
      } else {
        return false;  // atom of t missing from s
      }
    }
    return true;
  }
};

/// Max-plus polynomial: max over `terms` of (k + sum coeff*atom). Kept
/// deduplicated, sorted, and free of pointwise-dominated terms; canonical()
/// additionally removes terms under the upper hull of the others.
struct NormalForm {
  std::vector<Term> terms;

  static NormalForm zero() { return constant(Rat(0)); }

  static NormalForm constant(Rat k) {
    NormalForm nf;
    nf.terms.push_back(Term{std::move(k), {}});
    return nf;
  }

  static NormalForm atom(const Atom& a) {
    NormalForm nf;
    nf.terms.push_back(Term{Rat(0), {{intern(a), Rat(1)}}});
    return nf;
  }

  bool is_zero() const {
    return terms.size() == 1 && terms[0].coeffs.empty() && terms[0].k.is_zero();
  }

  friend bool operator==(const NormalForm& a, const NormalForm& b) {
    return a.terms == b.terms;
  }
  friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }
  friend bool operator<(const NormalForm& a, const NormalForm& b) { return a.terms < b.terms; }

  std::string str() const {
    std::ostringstream os;
    for (size_t i = 0; i < terms.size(); ++i) {
      if (i) os << " | ";
      os << terms[i].k.str();
      for (const auto& [a, c] : terms[i].coeffs) os << " + " << c.str() << "*#" << a;
    }
    return os.str();
  }
};

namespace detail {

inline Term term_add(const Term& a, const Term& b) {
  Term r;
  r.k = a.k + b.k;
  size_t i = 0, j = 0;
  while (i < a.coeffs.size() || j < b.coeffs.size()) {
    if (j == b.coeffs.size() || (i < a.coeffs.size() && a.coeffs[i].first < b.coeffs[j].first)) {
      r.coeffs.push_back(a.coeffs[i++]);
    } else if (i == a.coeffs.size() || b.coeffs[j].first < a.coeffs[i].first) {
      r.coeffs.push_back(b.coeffs[j++]);
    } else {
      Rat c = a.coeffs[i].second + b.coeffs[j].second;
      if (!c.is_zero()) r.coeffs.emplace_back(a.coeffs[i].first, c);
      ++i;
      ++j;
    }
  }
  return r;
}

inline void sort_dedup(std::vector<Term>& ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

/// Removes pointwise-dominated terms (cheap pass, no LP). Distinct terms
/// cannot dominate each other mutually, so order does not matter.
inline void reduce_pointwise(std::vector<Term>& ts) {
  sort_dedup(ts);
  std::vector<Term> kept;
  for (size_t i = 0; i < ts.size(); ++i) {
    bool drop = false;
    for (size_t j = 0; j < ts.size() && !drop; ++j)
      if (i != j && Term::dominated(ts[i], ts[j])) drop = true;
    if (!drop) kept.push_back(ts[i]);
  }
  ts = std::move(kept);
}

/// Exact test: t <= max(others) on the nonnegative orthant. Encoded as
/// infeasibility of { z >= 0, w >= 1, (t - s_i)(z, w) >= 1 for all i } after
/// homogenizing constants with w.
inline bool term_under_hull(const Term& t, const std::vector<Term>& others) {
  if (others.empty()) return false;
  for (const Term& s : others)
    if (Term::dominated(t, s)) return true;
  std::set<AtomId> atom_set;
  for (const auto& [a, c] : t.coeffs) atom_set.insert(a);
  for (const Term& s : others)
    for (const auto& [a, c] : s.coeffs) atom_set.insert(a);
  std::vector<AtomId> atoms(atom_set.begin(), atom_set.end());
  auto coeff = [&](const Term& tm, AtomId a) {
    auto it = std::lower_bound(tm.coeffs.begin(), tm.coeffs.end(), a,
                               [](const auto& p, AtomId x) { return p.first < x; });
    return it != tm.coeffs.end() && it->first == a ? it->second : Rat(0);
  };
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  for (const Term& s : others) {
    std::vector<Rat> row;
    row.reserve(atoms.size() + 1);
    for (AtomId a : atoms) row.push_back(coeff(t, a) - coeff(s, a));
    row.push_back(t.k - s.k);  // w column
    A.push_back(std::move(row));
    b.push_back(Rat(1));
  }
  {
    std::vector<Rat> row(atoms.size(), Rat(0));
    row.push_back(Rat(1));
    A.push_back(std::move(row));
    b.push_back(Rat(1));  // w >= 1
  }
  return !feasible_geq(A, b);
}

}  // namespace detail

inline NormalForm nf_add(const NormalForm& a, const NormalForm& b) {
  NormalForm r;
  r.terms.reserve(a.terms.size() * b.terms.size());
  for (const Term& ta : a.terms)
    for (const Term& tb : b.terms) r.terms.push_back(detail::term_add(ta, tb));
  detail::reduce_pointwise(r.terms);
  return r;
}

inline NormalForm nf_max(const NormalForm& a, const NormalForm& b) {
  NormalForm r;
  r.terms = a.terms;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  detail::reduce_pointwise(r.terms);
  return r;
}

inline NormalForm nf_scale(const Rat& k, const NormalForm& a) {
  if (k.sign() < 0) throw Error("scale factors must be nonnegative");
  if (k.is_zero()) return NormalForm::zero();
  NormalForm r;
  for (const Term& t : a.terms) {
    Term s;
    s.k = k * t.k;
    for (const auto& [at, c] : t.coeffs) s.coeffs.emplace_back(at, k * c);
    r.terms.push_back(std::move(s));
  }
  detail::reduce_pointwise(r.terms);
  return r;
}

/// Canonical minimal representation: drops every term that lies under the
/// upper hull of the others. Two Sub-free expressions equal under all
/// nonnegative assignments canonicalize identically.
inline NormalForm canonical(NormalForm nf) {
  detail::reduce_pointwise(nf.terms);
  if (nf.terms.size() <= 1) return nf;
  for (size_t i = 0; i < nf.terms.size();) {
    std::vector<Term> others;
    for (size_t j = 0; j < nf.terms.size(); ++j)
      if (j != i) others.push_back(nf.terms[j]);
    if (detail::term_under_hull(nf.terms[i], others)) {
      nf.terms.erase(nf.terms.begin() + static_cast<long>(i));
      if (nf.terms.empty()) return NormalForm::zero();
    } else {
      ++i;
    }
  }
  return nf;
}

/// Rewrites e into canonical max-plus normal form. Exact: for every
/// nonnegative binding, evaluate(normalize(e)) == evaluate(e).
inline NormalForm normalize(const CostExpr& e) {
  switch (e.kind()) {
    case CostExpr::Kind::kConst: return NormalForm::constant(e.k());
    case CostExpr::Kind::kSize: {
      Term t;
      t.k = e.size().constant_part();
      for (const auto& [v, c] : e.size().coeffs())
        t.coeffs.emplace_back(intern(Atom::size_var(v)), c);
      std::sort(t.coeffs.begin(), t.coeffs.end());
      NormalForm nf;
      nf.terms.push_back(std::move(t));
      return nf;
    }
    case CostExpr::Kind::kVar: return NormalForm::atom(Atom::cost_var(e.name()));
    case CostExpr::Kind::kSend: return NormalForm::atom(send_atom(e.payload()));
    case CostExpr::Kind::kRecv: return NormalForm::atom(recv_atom(e.payload()));
    case CostExpr::Kind::kAdd: return canonical(nf_add(normalize(e.lhs()), normalize(e.rhs())));
    case CostExpr::Kind::kMax: return canonical(nf_max(normalize(e.lhs()), normalize(e.rhs())));
    case CostExpr::Kind::kScale: return canonical(nf_scale(e.k(), normalize(e.lhs())));
    case CostExpr::Kind::kSub: throw Error("normalize: subtraction has no normal form");
  }
  throw Error("unreachable");
}

/// Canonical expression tree of a normal form (max of sums).
inline CostExpr denormalize(const NormalForm& nf) {
  std::optional<CostExpr> acc;
  for (const Term& t : nf.terms) {
    std::optional<CostExpr> sum;
    if (!t.k.is_zero() || t.coeffs.empty()) sum = CostExpr::constant(t.k);
    for (const auto& [id, c] : t.coeffs) {
      const Atom& a = AtomTable::get().atom(id);
      CostExpr leaf = [&] {
        switch (a.kind) {
          case Atom::Kind::kSizeVar: return CostExpr::size_of(SizeExpr::var(a.name));
          case Atom::Kind::kCostVar: return CostExpr::var(a.name);
          case Atom::Kind::kSend: return CostExpr::send(SizedType{a.name, a.size, {}});
          case Atom::Kind::kRecv: return CostExpr::recv(SizedType{a.name, a.size, {}});
        }
        throw Error("unreachable");
      }();
      if (c != Rat(1)) leaf = CostExpr::scale(c, leaf);
      sum = sum ? *sum + leaf : leaf;
    }
    acc = acc ? CostExpr::max(*acc, *sum) : *sum;
  }
  return acc ? *acc : CostExpr::constant(0);
}

inline Rat evaluate(const NormalForm& nf, const Binding& b) {
  std::optional<Rat> best;
  for (const Term& t : nf.terms) {
    Rat v = t.k;
    for (const auto& [id, c] : t.coeffs) {
      const Atom& a = AtomTable::get().atom(id);
      switch (a.kind) {
        case Atom::Kind::kSizeVar: v += c * b.size_value(a.name); break;
        case Atom::Kind::kCostVar: v += c * b.var_value(a.name); break;
        case Atom::Kind::kSend:
          v += c * b.comm_value(true, SizedType{a.name, a.size, {}});
          break;
        case Atom::Kind::kRecv:
          v += c * b.comm_value(false, SizedType{a.name, a.size, {}});
          break;
      }
    }
    best = best ? max(*best, v) : v;
  }
  return best ? *best : Rat(0);
}

inline void collect_atoms(const NormalForm& nf, std::set<Atom>& out) {
  for (const Term& t : nf.terms) {
    for (const auto& [id, c] : t.coeffs) {
      const Atom& a = AtomTable::get().atom(id);
      out.insert(a);
      if (a.kind == Atom::Kind::kSend || a.kind == Atom::Kind::kRecv) {
        std::set<std::string> vars;
        a.size.collect_vars(vars);
        for (const auto& v : vars) out.insert(Atom::size_var(v));
      }
    }
  }
}

/// Exact symbolic comparison: a <= b for every nonnegative assignment.
inline bool nf_leq_proved(const NormalForm& a, const NormalForm& b) {
  for (const Term& t : a.terms)
    if (!detail::term_under_hull(t, b.terms)) return false;
  return true;
}

/// Sound but incomplete shortcut: pointwise term domination only (no LP).
inline bool nf_leq_cheap(const NormalForm& a, const NormalForm& b) {
  for (const Term& t : a.terms) {
    bool dominated = false;
    for (const Term& s : b.terms)
      if (Term::dominated(t, s)) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cost environments

/// Per-participant accumulated time. Lookup of an absent role yields 0, and
/// updates never remove entries. Entries are kept in (reduced) normal form.
class CostEnv {
 public:
  CostEnv() = default;

  NormalForm get(Role r) const {
    auto it = m_.find(r.id);
    return it == m_.end() ? NormalForm::zero() : it->second;
  }

  void set(Role r, NormalForm nf) { m_[r.id] = std::move(nf); }

  bool has(Role r) const { return m_.count(r.id) != 0; }
  const std::map<std::uint32_t, NormalForm>& entries() const { return m_; }

  std::set<Role> domain() const {
    std::set<Role> out;
    for (const auto& [id, nf] : m_) out.insert(Role{id});
    return out;
  }

  CostEnv canonicalized() const {
    CostEnv r;
    for (const auto& [id, nf] : m_) r.m_[id] = canonical(nf);
    return r;
  }

  std::string str() const {
    std::ostringstream os;
    for (const auto& [id, nf] : m_) os << "r" << id << " -> " << nf.str() << "; ";
    return os.str();
  }

  friend bool operator==(const CostEnv& a, const CostEnv& b) { return a.m_ == b.m_; }
  friend bool operator<(const CostEnv& a, const CostEnv& b) { return a.m_ < b.m_; }

 private:
  std::map<std::uint32_t, NormalForm> m_;
};

/// Pointwise maximum over the union of domains (absent role counts as 0).
inline CostEnv env_max(const CostEnv& a, const CostEnv& b) {
  CostEnv r = a;
  for (const auto& [id, nf] : b.entries()) r.set(Role{id}, nf_max(r.get(Role{id}), nf));
  for (const auto& [id, nf] : a.entries())
    if (!b.has(Role{id})) r.set(Role{id}, nf);
  return r;
}

/// In-place flavor of the gated update, for the exploration hot paths.
inline void env_add_after_inplace(CostEnv& t, const NormalForm& gate, Role r,
                                  const NormalForm& c) {
  t.set(r, nf_add(nf_max(t.get(r), gate), c));
}

/// The paper's gated update: t[r -> max(t(r), gate) + c].
inline CostEnv env_add_after(const CostEnv& t, const NormalForm& gate, Role r,
                             const NormalForm& c) {
  CostEnv out = t;
  env_add_after_inplace(out, gate, r, c);
  return out;
}

inline CostEnv env_add_after(const CostEnv& t, const CostExpr& gate, Role r, const CostExpr& c) {
  return env_add_after(t, normalize(gate), r, normalize(c));
}

/// t[r' | r (+) c] with gate t(r').
inline CostEnv env_add_after(const CostEnv& t, Role gate_role, Role r, const NormalForm& c) {
  return env_add_after(t, t.get(gate_role), r, c);
}

/// t[r (+) c] with gate 0.
inline CostEnv env_add(const CostEnv& t, Role r, const NormalForm& c) {
  return env_add_after(t, NormalForm::zero(), r, c);
}

inline void collect_atoms(const CostEnv& env, std::set<Atom>& out) {
  for (const auto& [id, nf] : env.entries()) collect_atoms(nf, out);
}

struct LeqViolation {
  Role role;
  std::size_t binding_index = 0;
  Rat lhs, rhs;
};

struct LeqResult {
  bool ok = true;
  bool proved = false;  // decided symbolically, not only on samples
  std::optional<LeqViolation> violation;

  explicit operator bool() const { return ok; }
};

enum class LeqEffort {
  kCheap,  // pointwise domination shortcut, then samples
  kExact,  // full hull test (LP) for the proved verdict
};

/// Per-role comparison of two environments. Tries the symbolic route first
/// (pointwise domination, optionally the exact hull test); always validates
/// the sampled bindings so the reported result is meaningful even where the
/// symbolic route cannot apply.
inline LeqResult env_leq(const CostEnv& a, const CostEnv& b, const std::vector<Binding>& samples,
                         LeqEffort effort = LeqEffort::kExact) {
  LeqResult res;
  std::set<Role> roles = a.domain();
  for (Role r : b.domain()) roles.insert(r);
  res.proved = true;
  for (Role r : roles) {
    NormalForm na = a.get(r), nb = b.get(r);
    if (nf_leq_cheap(na, nb)) continue;
    if (effort == LeqEffort::kExact && nf_leq_proved(na, nb)) continue;
    res.proved = false;
    break;
  }
  if (res.proved) return res;
  for (Role r : roles) {
    NormalForm na = a.get(r), nb = b.get(r);
    for (size_t i = 0; i < samples.size(); ++i) {
      Rat va = evaluate(na, samples[i]);
      Rat vb = evaluate(nb, samples[i]);
      if (va > vb) {
        res.ok = false;
        res.proved = false;
        res.violation = LeqViolation{r, i, va, vb};
        return res;
      }
    }
  }
  return res;
}

/// Samples shared by a comparison: atoms of both sides, one seeded stream.
inline std::vector<Binding> sample_bindings(const std::set<Atom>& atoms, std::size_t count,
                                            std::uint64_t seed, long hi = 1000,
                                            bool zero_send = false) {
  Prng rng(seed);
  std::vector<Binding> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(random_binding(atoms, rng, hi, zero_send));
  return out;
}

}  // namespace campa

#endif  // CAMPA_ALGEBRA_HPP_
