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

// Protocol and cost ASTs shared by every analysis: sized payload types,
// symbolic cost expressions, global and local session types (including the
// runtime-extended and split send/receive forms), plus the syntactic
// helpers roles_of / guarded / broadcast.

#ifndef CAMPA_CORE_HPP_
#define CAMPA_CORE_HPP_

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "campa/rational.hpp"

namespace campa {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Roles and labels

/// Participant identifier. Ids are natural numbers unique within a protocol;
/// they induce the total order used by the optimizer's normal forms. Display
/// names live in a RoleTable next to the protocol, not in the AST.
struct Role {
  std::uint32_t id = 0;

  friend bool operator==(Role a, Role b) { return a.id == b.id; }
  friend bool operator!=(Role a, Role b) { return a.id != b.id; }
  friend bool operator<(Role a, Role b) { return a.id < b.id; }
};

struct Label {
  std::string name;

  friend bool operator==(const Label& a, const Label& b) { return a.name == b.name; }
  friend bool operator<(const Label& a, const Label& b) { return a.name < b.name; }
};

/// Declaration-order table of role display names; index == Role::id.
class RoleTable {
 public:
  Role declare(const std::string& name) {
    for (const auto& n : names_)
      if (n == name) throw Error("duplicate role name: " + name);
    names_.push_back(name);
    return Role{static_cast<std::uint32_t>(names_.size() - 1)};
  }

  const std::string& name(Role r) const {
    if (r.id >= names_.size()) throw Error("unknown role id");
    return names_[r.id];
  }

  std::optional<Role> find(const std::string& name) const {
    for (std::uint32_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return Role{i};
    return std::nullopt;
  }

  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Sizes and payload types

/// Size expression, kept in normalized linear form: constant + sum of
/// nonnegative rational coefficients over size variables. The surface
/// grammar (constants, variables, +, scalar *) always lands in this shape,
/// and keeping it canonical makes send/recv cost atoms comparable.
class SizeExpr {
 public:
  SizeExpr() = default;

  static SizeExpr constant(Rat k) {
    require_nonneg(k);
    SizeExpr e;
    e.k_ = std::move(k);
    return e;
  }

  static SizeExpr var(const std::string& name) {
    SizeExpr e;
    e.coeffs_.emplace_back(name, Rat(1));
    return e;
  }

  friend SizeExpr operator+(const SizeExpr& a, const SizeExpr& b) {
    SizeExpr r = a;
    r.k_ += b.k_;
    for (const auto& [v, c] : b.coeffs_) r.add_coeff(v, c);
    return r;
  }

  static SizeExpr scaled(const Rat& k, const SizeExpr& e) {
    require_nonneg(k);
    SizeExpr r;
    if (k.is_zero()) return constant(0);
    r.k_ = k * e.k_;
    for (const auto& [v, c] : e.coeffs_) r.coeffs_.emplace_back(v, k * c);
    return r;
  }

  const Rat& constant_part() const { return k_; }
  const std::vector<std::pair<std::string, Rat>>& coeffs() const { return coeffs_; }
  bool is_constant() const { return coeffs_.empty(); }

  Rat evaluate(const std::map<std::string, Rat>& sizes) const {
    Rat v = k_;
    for (const auto& [name, c] : coeffs_) {
      auto it = sizes.find(name);
      if (it == sizes.end()) throw Error("unbound size variable: " + name);
      v += c * it->second;
    }
    return v;
  }

  void collect_vars(std::set<std::string>& out) const {
    for (const auto& [name, c] : coeffs_) out.insert(name);
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : coeffs_) {
      if (!first) os << "+";
      if (c != Rat(1)) os << c.str() << "*";
      os << v;
      first = false;
    }
    if (first || !k_.is_zero()) {
      if (!first) os << "+";
      os << k_.str();
    }
    return os.str();
  }

  friend bool operator==(const SizeExpr& a, const SizeExpr& b) {
    return a.k_ == b.k_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const SizeExpr& a, const SizeExpr& b) {
    if (a.k_ != b.k_) return a.k_ < b.k_;
    return a.coeffs_ < b.coeffs_;
  }

 private:
  static void require_nonneg(const Rat& k) {
    if (k.sign() < 0) throw Error("size constants must be nonnegative");
  }

  void add_coeff(const std::string& v, const Rat& c) {
    auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), v,
                               [](const auto& p, const std::string& s) { return p.first < s; });
    if (it != coeffs_.end() && it->first == v)
      it->second += c;
    else
      coeffs_.insert(it, {v, c});
  }

  Rat k_;
  std::vector<std::pair<std::string, Rat>> coeffs_;  // sorted by variable
};

/// Payload type: a base-type name (or constructor name with argument types)
/// with a size annotation. No analysis looks inside constructor arguments
/// beyond the size annotation.
struct SizedType {
  std::string base;
  SizeExpr size;
  std::vector<SizedType> args;

  friend bool operator==(const SizedType& a, const SizedType& b) {
    return a.base == b.base && a.size == b.size && a.args == b.args;
  }

  std::string str() const {
    std::string s = base;
    if (!args.empty()) {
      s += "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i].str();
      }
      s += ")";
    }
    return s + "^" + size.str();
  }
};

/// Labels travel as payloads of the unit type with size 1.
inline SizedType unit_type() { return SizedType{"unit", SizeExpr::constant(1), {}}; }

// ---------------------------------------------------------------------------
// Cost expressions

/// Symbolic nonnegative cost expression. Send/Recv are uninterpreted symbols
/// until instantiated by a cost model. Sub never leaves the latency module's
/// internals: it exists so difference equations can be formed transiently.
class CostExpr {
 public:
  enum class Kind { kConst, kSize, kVar, kSend, kRecv, kAdd, kMax, kScale, kSub };

  CostExpr() : CostExpr(constant(0)) {}

  static CostExpr constant(Rat k) {
    if (k.sign() < 0) throw Error("cost constants must be nonnegative");
    auto n = std::make_shared<Node>();
    n->kind = Kind::kConst;
    n->k = std::move(k);
    return CostExpr(std::move(n));
  }

  static CostExpr size_of(SizeExpr s) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kSize;
    n->size = std::move(s);
    return CostExpr(std::move(n));
  }

  static CostExpr var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kVar;
    n->name = std::move(name);
    return CostExpr(std::move(n));
  }

  static CostExpr send(SizedType payload) { return comm(Kind::kSend, std::move(payload)); }
  static CostExpr recv(SizedType payload) { return comm(Kind::kRecv, std::move(payload)); }

  friend CostExpr operator+(const CostExpr& a, const CostExpr& b) {
    return binary(Kind::kAdd, a, b);
  }

  static CostExpr max(const CostExpr& a, const CostExpr& b) {
    return binary(Kind::kMax, a, b);
  }

  static CostExpr scale(Rat k, const CostExpr& e) {
    if (k.sign() < 0) throw Error("scale factors must be nonnegative");
    auto n = std::make_shared<Node>();
    n->kind = Kind::kScale;
    n->k = std::move(k);
    n->a = e.n_;
    return CostExpr(std::move(n));
  }

  /// Internal to difference equations; rejected by normalization.
  static CostExpr sub(const CostExpr& a, const CostExpr& b) {
    return binary(Kind::kSub, a, b);
  }

  Kind kind() const { return n_->kind; }
  const Rat& k() const { return n_->k; }
  const SizeExpr& size() const { return n_->size; }
  const std::string& name() const { return n_->name; }
  const SizedType& payload() const { return n_->payload; }
  CostExpr lhs() const { return CostExpr(n_->a); }
  CostExpr rhs() const { return CostExpr(n_->b); }

  bool sub_free() const {
    if (n_->kind == Kind::kSub) return false;
    if (n_->a && !lhs().sub_free()) return false;
    if (n_->b && !rhs().sub_free()) return false;
    return true;
  }

  friend bool operator==(const CostExpr& a, const CostExpr& b) {
    return a.n_ == b.n_ || a.str() == b.str();
  }

  /// Unambiguous textual form, also used for hashing.
  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  void write(std::ostream& os) const {
    switch (n_->kind) {
      case Kind::kConst: os << n_->k.str(); break;
      case Kind::kSize: os << "size(" << n_->size.str() << ")"; break;
      case Kind::kVar: os << n_->name; break;
      case Kind::kSend: os << "csend(" << n_->payload.str() << ")"; break;
      case Kind::kRecv: os << "crecv(" << n_->payload.str() << ")"; break;
      case Kind::kAdd:
        os << "(";
        lhs().write(os);
        os << " + ";
        rhs().write(os);
        os << ")";
        break;
      case Kind::kMax:
        os << "max(";
        lhs().write(os);
        os << ", ";
        rhs().write(os);
        os << ")";
        break;
      case Kind::kScale:
        os << n_->k.str() << "*";
        lhs().write(os);
        break;
      case Kind::kSub:
        os << "(";
        lhs().write(os);
        os << " - ";
        rhs().write(os);
        os << ")";
        break;
    }
  }

 private:
  struct Node {
    Kind kind = Kind::kConst;
    Rat k;
    SizeExpr size;
    std::string name;
    SizedType payload;
    std::shared_ptr<const Node> a, b;
  };

  explicit CostExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static CostExpr comm(Kind kind, SizedType payload) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->payload = std::move(payload);
    return CostExpr(std::move(n));
  }

  static CostExpr binary(Kind kind, const CostExpr& a, const CostExpr& b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->a = a.n_;
    n->b = b.n_;
    return CostExpr(std::move(n));
  }

  std::shared_ptr<const Node> n_;
};

// ---------------------------------------------------------------------------
// Global types

/// Global session type. Besides the source constructors (Msg, Branch, Rec,
/// RecCall, End) this carries the runtime-extended forms produced by the
/// operational semantics (MsgT: sent but not received; BranchT: label sent;
/// Eval: pending local computation) and the split send/receive actions of the
/// asynchronous optimization extension (SendAct/RecvAct).
///
/// Recursion variables are binder-relative indices (de Bruijn); display
/// names are kept for printing only, so structural equality is
/// alpha-equality.
class GlobalType {
 public:
  enum class Kind {
    kMsg, kMsgT, kBranch, kBranchT, kEval, kRec, kRecCall, kEnd, kSendAct, kRecvAct
  };

  struct Arm;
  using Arms = std::vector<Arm>;

  GlobalType() : GlobalType(end()) {}

  static GlobalType end() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kEnd;
    return GlobalType(std::move(n));
  }

  static GlobalType msg(Role from, Role to, SizedType payload, CostExpr cost, GlobalType cont) {
    if (from == to) throw Error("self-messages are rejected");
    auto n = std::make_shared<Node>();
    n->kind = Kind::kMsg;
    n->from = from;
    n->to = to;
    n->payload = std::move(payload);
    n->cost = std::move(cost);
    n->a = cont.n_;
    return GlobalType(std::move(n));
  }

  static GlobalType msg_t(Role from, Role to, SizedType payload, CostExpr cost, GlobalType cont) {
    GlobalType g = msg(from, to, std::move(payload), std::move(cost), std::move(cont));
    const_cast<Node*>(g.n_.get())->kind = Kind::kMsgT;
    return g;
  }

  static GlobalType branch(Role from, Role to, Arms arms);
  static GlobalType branch_t(Role from, Role to, std::size_t chosen, Arms arms);

  static GlobalType eval(Role who, SizedType payload, CostExpr cost, GlobalType cont) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kEval;
    n->from = who;
    n->to = who;
    n->payload = std::move(payload);
    n->cost = std::move(cost);
    n->a = cont.n_;
    return GlobalType(std::move(n));
  }

  static GlobalType rec(std::string name, GlobalType body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kRec;
    n->name = std::move(name);
    n->a = body.n_;
    return GlobalType(std::move(n));
  }

  /// `index` counts binders outward: 0 is the innermost enclosing rec.
  static GlobalType rec_call(std::size_t index, std::string display_name = "") {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kRecCall;
    n->index = index;
    n->name = std::move(display_name);
    return GlobalType(std::move(n));
  }

  static GlobalType send_act(Role from, Role to, SizedType payload, GlobalType cont) {
    if (from == to) throw Error("self-messages are rejected");
    auto n = std::make_shared<Node>();
    n->kind = Kind::kSendAct;
    n->from = from;
    n->to = to;
    n->payload = std::move(payload);
    n->a = cont.n_;
    return GlobalType(std::move(n));
  }

  /// `to` is the receiving role (the action's subject), `from` the sender.
  static GlobalType recv_act(Role to, Role from, SizedType payload, CostExpr cost,
                             GlobalType cont) {
    if (from == to) throw Error("self-messages are rejected");
    auto n = std::make_shared<Node>();
    n->kind = Kind::kRecvAct;
    n->from = from;
    n->to = to;
    n->payload = std::move(payload);
    n->cost = std::move(cost);
    n->a = cont.n_;
    return GlobalType(std::move(n));
  }

  Kind kind() const { return n_->kind; }
  Role from() const { return n_->from; }
  Role to() const { return n_->to; }
  const SizedType& payload() const { return n_->payload; }
  const CostExpr& cost() const { return n_->cost; }
  GlobalType cont() const { return GlobalType(n_->a); }
  const Arms& arms() const { return n_->arms; }
  std::size_t chosen() const { return n_->index; }
  std::size_t rec_index() const { return n_->index; }
  const std::string& rec_name() const { return n_->name; }
  GlobalType body() const { return GlobalType(n_->a); }

  bool is_end() const { return n_->kind == Kind::kEnd; }

  GlobalType with_cont(const GlobalType& cont) const;
  GlobalType with_arms(Arms arms) const;

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  void write(std::ostream& os) const;

  friend bool operator==(const GlobalType& a, const GlobalType& b) {
    return a.n_ == b.n_ || a.str() == b.str();
  }
  friend bool operator!=(const GlobalType& a, const GlobalType& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind = Kind::kEnd;
    Role from, to;
    SizedType payload;
    CostExpr cost;
    std::string name;
    std::size_t index = 0;  // chosen arm for kBranchT, binder index for kRecCall
    std::shared_ptr<const Node> a;
    Arms arms;
  };

  explicit GlobalType(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  std::shared_ptr<const Node> n_;
};

struct GlobalType::Arm {
  Label label;
  GlobalType cont;
};

inline GlobalType GlobalType::branch(Role from, Role to, Arms arms) {
  if (from == to) throw Error("self-messages are rejected");
  if (arms.empty()) throw Error("branch needs at least one arm");
  for (size_t i = 0; i < arms.size(); ++i)
    for (size_t j = i + 1; j < arms.size(); ++j)
      if (arms[i].label == arms[j].label)
        throw Error("duplicate branch label: " + arms[i].label.name);
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBranch;
  n->from = from;
  n->to = to;
  n->arms = std::move(arms);
  return GlobalType(std::move(n));
}

inline GlobalType GlobalType::branch_t(Role from, Role to, std::size_t chosen, Arms arms) {
  GlobalType g = branch(from, to, std::move(arms));
  auto* raw = const_cast<Node*>(g.n_.get());
  raw->kind = Kind::kBranchT;
  raw->index = chosen;
  return g;
}

inline GlobalType GlobalType::with_cont(const GlobalType& cont) const {
  auto n = std::make_shared<Node>(*n_);
  n->a = cont.n_;
  return GlobalType(std::move(n));
}

inline GlobalType GlobalType::with_arms(Arms arms) const {
  auto n = std::make_shared<Node>(*n_);
  n->arms = std::move(arms);
  return GlobalType(std::move(n));
}

inline void GlobalType::write(std::ostream& os) const {
  switch (kind()) {
    case Kind::kEnd: os << "end"; break;
    case Kind::kMsg:
    case Kind::kMsgT:
      os << "r" << from().id << (kind() == Kind::kMsg ? "->" : "=>") << "r" << to().id << "<"
         << payload().str() << "@" << cost().str() << ">.";
      cont().write(os);
      break;
    case Kind::kBranch:
    case Kind::kBranchT:
      os << "r" << from().id << (kind() == Kind::kBranch ? "->" : "=>") << "r" << to().id;
      if (kind() == Kind::kBranchT) os << ":" << chosen();
      os << "{";
      for (size_t i = 0; i < arms().size(); ++i) {
        if (i) os << ", ";
        os << arms()[i].label.name << ". ";
        arms()[i].cont.write(os);
      }
      os << "}";
      break;
    case Kind::kEval:
      os << "r" << from().id << "@@(" << payload().str() << "@" << cost().str() << ").";
      cont().write(os);
      break;
    case Kind::kRec:
      os << "rec." << "(";
      body().write(os);
      os << ")";
      break;
    case Kind::kRecCall: os << "#" << rec_index(); break;
    case Kind::kSendAct:
      os << "r" << from().id << "~>r" << to().id << "!<" << payload().str() << ">.";
      cont().write(os);
      break;
    case Kind::kRecvAct:
      os << "r" << from().id << "~>r" << to().id << "?<" << payload().str() << "@"
         << cost().str() << ">.";
      cont().write(os);
      break;
  }
}

// ---------------------------------------------------------------------------
// Local types

class LocalType {
 public:
  enum class Kind { kSend, kRecv, kSelect, kBranch, kRec, kRecCall, kEnd, kPendingEval };

  struct Arm;
  using Arms = std::vector<Arm>;

  LocalType() : LocalType(end()) {}

  static LocalType end() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kEnd;
    return LocalType(std::move(n));
  }

  static LocalType send(Role to, SizedType payload, LocalType cont) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kSend;
    n->peer = to;
    n->payload = std::move(payload);
    n->a = cont.n_;
    return LocalType(std::move(n));
  }

  static LocalType recv(Role from, SizedType payload, CostExpr cost, LocalType cont) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kRecv;
    n->peer = from;
    n->payload = std::move(payload);
    n->cost = std::move(cost);
    n->a = cont.n_;
    return LocalType(std::move(n));
  }

  static LocalType select(Role to, Arms arms);
  static LocalType branch(Role from, Arms arms);

  static LocalType rec(std::string name, LocalType body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kRec;
    n->name = std::move(name);
    n->a = body.n_;
    return LocalType(std::move(n));
  }

  static LocalType rec_call(std::size_t index, std::string display_name = "") {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kRecCall;
    n->index = index;
    n->name = std::move(display_name);
    return LocalType(std::move(n));
  }

  static LocalType pending_eval(SizedType payload, CostExpr cost, LocalType cont) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kPendingEval;
    n->payload = std::move(payload);
    n->cost = std::move(cost);
    n->a = cont.n_;
    return LocalType(std::move(n));
  }

  Kind kind() const { return n_->kind; }
  Role peer() const { return n_->peer; }
  const SizedType& payload() const { return n_->payload; }
  const CostExpr& cost() const { return n_->cost; }
  LocalType cont() const { return LocalType(n_->a); }
  const Arms& arms() const { return n_->arms; }
  std::size_t rec_index() const { return n_->index; }
  const std::string& rec_name() const { return n_->name; }
  LocalType body() const { return LocalType(n_->a); }

  bool is_end() const { return n_->kind == Kind::kEnd; }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  void write(std::ostream& os) const;

  friend bool operator==(const LocalType& a, const LocalType& b) {
    return a.n_ == b.n_ || a.str() == b.str();
  }
  friend bool operator!=(const LocalType& a, const LocalType& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind = Kind::kEnd;
    Role peer;
    SizedType payload;
    CostExpr cost;
    std::string name;
    std::size_t index = 0;
    std::shared_ptr<const Node> a;
    Arms arms;
  };

  explicit LocalType(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  std::shared_ptr<const Node> n_;
};

struct LocalType::Arm {
  Label label;
  LocalType cont;
};

inline LocalType LocalType::select(Role to, Arms arms) {
  if (arms.empty()) throw Error("selection needs at least one arm");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSelect;
  n->peer = to;
  n->arms = std::move(arms);
  return LocalType(std::move(n));
}

inline LocalType LocalType::branch(Role from, Arms arms) {
  if (arms.empty()) throw Error("branching needs at least one arm");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBranch;
  n->peer = from;
  n->arms = std::move(arms);
  return LocalType(std::move(n));
}

inline void LocalType::write(std::ostream& os) const {
  switch (kind()) {
    case Kind::kEnd: os << "end"; break;
    case Kind::kSend:
      os << "r" << peer().id << "!<" << payload().str() << ">.";
      cont().write(os);
      break;
    case Kind::kRecv:
      os << "r" << peer().id << "?<" << payload().str() << "@" << cost().str() << ">.";
      cont().write(os);
      break;
    case Kind::kSelect:
    case Kind::kBranch:
      os << "r" << peer().id << (kind() == Kind::kSelect ? "(+)" : "(&)") << "{";
      for (size_t i = 0; i < arms().size(); ++i) {
        if (i) os << ", ";
        os << arms()[i].label.name << ". ";
        arms()[i].cont.write(os);
      }
      os << "}";
      break;
    case Kind::kRec:
      os << "rec.(";
      body().write(os);
      os << ")";
      break;
    case Kind::kRecCall: os << "#" << rec_index(); break;
    case Kind::kPendingEval:
      os << "(" << payload().str() << "@" << cost().str() << ").";
      cont().write(os);
      break;
  }
}

// ---------------------------------------------------------------------------
// Syntactic operations

/// Roles syntactically occurring in g.
inline void collect_roles(const GlobalType& g, std::set<Role>& out) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
    case GlobalType::Kind::kRecCall:
      return;
    case GlobalType::Kind::kRec:
      collect_roles(g.body(), out);
      return;
    case GlobalType::Kind::kMsg:
    case GlobalType::Kind::kMsgT:
    case GlobalType::Kind::kSendAct:
    case GlobalType::Kind::kRecvAct:
      out.insert(g.from());
      out.insert(g.to());
      collect_roles(g.cont(), out);
      return;
    case GlobalType::Kind::kEval:
      out.insert(g.from());
      collect_roles(g.cont(), out);
      return;
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT:
      out.insert(g.from());
      out.insert(g.to());
      for (const auto& arm : g.arms()) collect_roles(arm.cont, out);
      return;
  }
}

inline std::set<Role> roles_of(const GlobalType& g) {
  std::set<Role> out;
  collect_roles(g, out);
  return out;
}

inline void collect_roles(const LocalType& l, std::set<Role>& out) {
  switch (l.kind()) {
    case LocalType::Kind::kEnd:
    case LocalType::Kind::kRecCall:
      return;
    case LocalType::Kind::kRec:
      collect_roles(l.body(), out);
      return;
    case LocalType::Kind::kSend:
    case LocalType::Kind::kRecv:
      out.insert(l.peer());
      collect_roles(l.cont(), out);
      return;
    case LocalType::Kind::kPendingEval:
      collect_roles(l.cont(), out);
      return;
    case LocalType::Kind::kSelect:
    case LocalType::Kind::kBranch:
      out.insert(l.peer());
      for (const auto& arm : l.arms()) collect_roles(arm.cont, out);
      return;
  }
}

inline std::set<Role> roles_of(const LocalType& l) {
  std::set<Role> out;
  collect_roles(l, out);
  return out;
}

namespace detail {

/// True iff the variable bound `idx` binders out occurs in g.
inline bool occurs(const GlobalType& g, std::size_t idx) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
      return false;
    case GlobalType::Kind::kRecCall:
      return g.rec_index() == idx;
    case GlobalType::Kind::kRec:
      return occurs(g.body(), idx + 1);
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT:
      for (const auto& arm : g.arms())
        if (occurs(arm.cont, idx)) return true;
      return false;
    default:
      return occurs(g.cont(), idx);
  }
}

/// `pending` holds the binder depths not yet separated from their binder by
/// an interaction; reaching a RecCall that targets one of them is failure.
inline bool guarded_walk(const GlobalType& g, std::vector<bool>& pending) {
  switch (g.kind()) {
    case GlobalType::Kind::kEnd:
      return true;
    case GlobalType::Kind::kRecCall:
      return g.rec_index() >= pending.size() ||
             !pending[pending.size() - 1 - g.rec_index()];
    case GlobalType::Kind::kRec: {
      if (!occurs(g.body(), 0)) return false;  // vacuous binder
      pending.push_back(true);
      bool ok = guarded_walk(g.body(), pending);
      pending.pop_back();
      return ok;
    }
    case GlobalType::Kind::kMsg:
    case GlobalType::Kind::kMsgT:
    case GlobalType::Kind::kEval:
    case GlobalType::Kind::kSendAct:
    case GlobalType::Kind::kRecvAct: {
      std::vector<bool> cleared(pending.size(), false);
      return guarded_walk(g.cont(), cleared);
    }
    case GlobalType::Kind::kBranch:
    case GlobalType::Kind::kBranchT: {
      for (const auto& arm : g.arms()) {
        std::vector<bool> cleared(pending.size(), false);
        if (!guarded_walk(arm.cont, cleared)) return false;
      }
      return true;
    }
  }
  return true;
}

}  // namespace detail

/// True iff every recursion binder is used and every use is separated from
/// its binder by at least one interaction.
inline bool guarded(const GlobalType& g) {
  std::vector<bool> pending;
  return detail::guarded_walk(g, pending);
}

/// Expands the label-broadcasting macro p->{q1..qn}:{li.Gi} into the nested
/// chain of choices p->q1{li. p->q2{li. ... p->qn{li. Gi}}}.
inline GlobalType broadcast(Role from, const std::vector<Role>& to,
                            const GlobalType::Arms& arms) {
  if (to.empty()) throw Error("broadcast needs at least one receiver");
  for (size_t i = 0; i < to.size(); ++i) {
    if (to[i] == from) throw Error("broadcast sender cannot receive");
    for (size_t j = i + 1; j < to.size(); ++j)
      if (to[i] == to[j]) throw Error("duplicate broadcast receiver");
  }
  // Innermost level carries the real continuations; outer levels wrap each
  // label with the next receiver in the chain.
  auto level = [&](size_t idx, const auto& self, const GlobalType::Arm& arm) -> GlobalType {
    if (idx + 1 == to.size())
      return GlobalType::branch(from, to[idx], {arm});
    return GlobalType::branch(from, to[idx], {{arm.label, self(idx + 1, self, arm)}});
  };
  GlobalType::Arms top;
  for (const auto& arm : arms) {
    if (to.size() == 1) {
      top.push_back(arm);
    } else {
      top.push_back({arm.label, level(1, level, arm)});
    }
  }
  return GlobalType::branch(from, to[0], std::move(top));
}

/// A named protocol: role table plus body.
struct Protocol {
  std::string name;
  RoleTable roles;
  GlobalType body;
};

}  // namespace campa

#endif  // CAMPA_CORE_HPP_
