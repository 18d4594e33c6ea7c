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

// Canonical surface-syntax printing. parse(print(p)) == p structurally.
// Runtime-extended forms print with a "=>" marker for debugging and are
// deliberately not re-parseable.

#ifndef CAMPA_PRINTER_HPP_
#define CAMPA_PRINTER_HPP_

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "campa/core.hpp"

namespace campa {

namespace detail {

inline std::string print_size(const SizeExpr& e) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : e.coeffs()) {
    if (!first) os << " + ";
    if (c != Rat(1)) os << c.str() << "*";
    os << v;
    first = false;
  }
  if (first || !e.constant_part().is_zero()) {
    if (!first) os << " + ";
    os << e.constant_part().str();
  }
  return os.str();
}

inline std::string print_cost(const CostExpr& e) {
  switch (e.kind()) {
    case CostExpr::Kind::kConst:
      return e.k().str();
    case CostExpr::Kind::kSize:
      return "size(" + print_size(e.size()) + ")";
    case CostExpr::Kind::kVar:
      return e.name();
    case CostExpr::Kind::kAdd:
      return print_cost(e.lhs()) + " + " + print_cost(e.rhs());
    case CostExpr::Kind::kMax:
      return "max(" + print_cost(e.lhs()) + ", " + print_cost(e.rhs()) + ")";
    case CostExpr::Kind::kScale: {
      const CostExpr inner = e.lhs();
      bool atomic = inner.kind() == CostExpr::Kind::kConst ||
                    inner.kind() == CostExpr::Kind::kVar ||
                    inner.kind() == CostExpr::Kind::kMax ||
                    inner.kind() == CostExpr::Kind::kSize;
      return e.k().str() + "*" + (atomic ? print_cost(inner) : "(" + print_cost(inner) + ")");
    }
    case CostExpr::Kind::kSub:
      return "(" + print_cost(e.lhs()) + " - " + print_cost(e.rhs()) + ")";
    case CostExpr::Kind::kSend:
      return "csend(" + e.payload().str() + ")";
    case CostExpr::Kind::kRecv:
      return "crecv(" + e.payload().str() + ")";
  }
  return "";
}

inline std::string print_payload(const SizedType& t, const CostExpr& cost) {
  std::string s = "<" + t.base + "^" + print_size(t.size);
  if (!(cost == CostExpr::constant(0))) s += " @ " + print_cost(cost);
  return s + ">";
}

inline void print_global(const GlobalType& g, const RoleTable& roles, std::ostringstream& os,
                         int indent, std::vector<std::string>& rec_names) {
  auto pad = [&]() { os << std::string(static_cast<std::size_t>(indent) * 2, ' '); };
  using K = GlobalType::Kind;
  switch (g.kind()) {
    case K::kEnd:
      pad();
      os << "end";
      return;
    case K::kRecCall: {
      pad();
      std::size_t i = g.rec_index();
      os << "continue "
         << (i < rec_names.size() ? rec_names[rec_names.size() - 1 - i] : "?" + std::to_string(i));
      return;
    }
    case K::kRec: {
      std::string name = g.rec_name().empty() ? "X" + std::to_string(rec_names.size())
                                              : g.rec_name();
      // shadowed display names would re-parse to the wrong binder
      while (std::find(rec_names.begin(), rec_names.end(), name) != rec_names.end())
        name += "_";
      pad();
      os << "rec " << name << ".\n";
      rec_names.push_back(name);
      print_global(g.body(), roles, os, indent, rec_names);
      rec_names.pop_back();
      return;
    }
    case K::kMsg:
    case K::kMsgT:
      pad();
      os << roles.name(g.from()) << (g.kind() == K::kMsg ? " -> " : " => ") << roles.name(g.to())
         << ":" << print_payload(g.payload(), g.cost()) << ".\n";
      print_global(g.cont(), roles, os, indent, rec_names);
      return;
    case K::kBranch:
    case K::kBranchT: {
      pad();
      os << roles.name(g.from()) << (g.kind() == K::kBranch ? " -> " : " => ") << roles.name(g.to());
      if (g.kind() == K::kBranchT) os << " [sent " << g.arms()[g.chosen()].label.name << "]";
      os << " {\n";
      for (std::size_t i = 0; i < g.arms().size(); ++i) {
        std::string lead(static_cast<std::size_t>(indent + 1) * 2, ' ');
        os << lead << g.arms()[i].label.name << ".\n";
        print_global(g.arms()[i].cont, roles, os, indent + 2, rec_names);
        if (i + 1 < g.arms().size()) os << ",";
        os << "\n";
      }
      pad();
      os << "}";
      return;
    }
    case K::kEval:
      pad();
      os << roles.name(g.from()) << " => run(" << print_cost(g.cost()) << ").\n";
      print_global(g.cont(), roles, os, indent, rec_names);
      return;
    case K::kSendAct:
      pad();
      os << roles.name(g.from()) << " ~> " << roles.name(g.to()) << " !"
         << print_payload(g.payload(), CostExpr::constant(0)) << ".\n";
      print_global(g.cont(), roles, os, indent, rec_names);
      return;
    case K::kRecvAct:
      pad();
      os << roles.name(g.from()) << " ~> " << roles.name(g.to()) << " ?"
         << print_payload(g.payload(), g.cost()) << ".\n";
      print_global(g.cont(), roles, os, indent, rec_names);
      return;
  }
}

}  // namespace detail

/// Canonical .camp rendering of a protocol.
inline std::string print_protocol(const Protocol& p) {
  std::ostringstream os;
  os << "protocol " << p.name << " {\n  roles ";
  for (std::size_t i = 0; i < p.roles.size(); ++i) {
    if (i) os << ", ";
    os << p.roles.name(Role{static_cast<std::uint32_t>(i)});
  }
  os << ";\n";
  std::vector<std::string> rec_names;
  detail::print_global(p.body, p.roles, os, 1, rec_names);
  os << "\n}\n";
  return os.str();
}

/// Local types in the surface syntax of the paper's local grammar.
inline std::string print_local(const LocalType& l, const RoleTable& roles) {
  using K = LocalType::Kind;
  switch (l.kind()) {
    case K::kEnd:
      return "end";
    case K::kRecCall:
      return "continue " + (l.rec_name().empty() ? "#" + std::to_string(l.rec_index())
                                                 : l.rec_name());
    case K::kRec:
      return "rec " + (l.rec_name().empty() ? "X" : l.rec_name()) + ". " +
             print_local(l.body(), roles);
    case K::kSend:
      return roles.name(l.peer()) + "!" + detail::print_payload(l.payload(), CostExpr::constant(0)) +
             ". " + print_local(l.cont(), roles);
    case K::kRecv:
      return roles.name(l.peer()) + "?" + detail::print_payload(l.payload(), l.cost()) + ". " +
             print_local(l.cont(), roles);
    case K::kSelect:
    case K::kBranch: {
      std::string s = roles.name(l.peer()) + (l.kind() == K::kSelect ? "(+){" : "(&){");
      for (std::size_t i = 0; i < l.arms().size(); ++i) {
        if (i) s += ", ";
        s += l.arms()[i].label.name + ". " + print_local(l.arms()[i].cont, roles);
      }
      return s + "}";
    }
    case K::kPendingEval:
      return "(" + l.payload().str() + " @ " + detail::print_cost(l.cost()) + "). " +
             print_local(l.cont(), roles);
  }
  return "";
}

}  // namespace campa

#endif  // CAMPA_PRINTER_HPP_
