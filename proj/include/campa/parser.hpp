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

// Protocol surface syntax:
//
//   protocol ID { roles ID ("," ID)* ";" G }
//   G := ID "->" ID ":" payload "." G          message
//      | ID "->" ID "{" label "." G ("," label "." G)* "}"
//      | ID "~>" ID "!" payload "." G          split send half
//      | ID "~>" ID "?" payload "." G          split receive half
//      | "rec" ID "." G | "continue" ID | "end"
//   payload := "<" TYPE "^" sizeExpr ("@" costExpr)? ">"
//
// "a ~> b" is the message flow from a to b; "!" is the send half performed
// by a, "?" the receive half performed by b. Missing "@cost" defaults to 0.
// Comments run from "//" to end of line.

#ifndef CAMPA_PARSER_HPP_
#define CAMPA_PARSER_HPP_

#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "campa/core.hpp"

namespace campa {

struct SourcePos {
  std::size_t line = 1, column = 1;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

class ParseError : public Error {
 public:
  ParseError(const SourcePos& pos, const std::string& what)
      : Error(pos.str() + ": " + what), pos(pos) {}
  SourcePos pos;
};

namespace detail {

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) {}

  SourcePos pos() const { return pos_; }

  void skip_ws() {
    for (;;) {
      while (i_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[i_])) != 0))
        advance();
      if (i_ + 1 < text_.size() && text_[i_] == '/' && text_[i_ + 1] == '/') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
        continue;
      }
      break;
    }
  }

  bool eof() {
    skip_ws();
    return i_ >= text_.size();
  }

  bool peek_symbol(const std::string& sym) {
    skip_ws();
    return text_.compare(i_, sym.size(), sym) == 0;
  }

  bool try_symbol(const std::string& sym) {
    if (!peek_symbol(sym)) return false;
    for (size_t k = 0; k < sym.size(); ++k) advance();
    return true;
  }

  void expect_symbol(const std::string& sym) {
    skip_ws();
    if (!try_symbol(sym)) fail("expected '" + sym + "'");
  }

  bool peek_ident(std::string* out = nullptr) {
    skip_ws();
    size_t j = i_;
    if (j >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
      return false;
    size_t start = j;
    while (j < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
      ++j;
    if (out) *out = text_.substr(start, j - start);
    return true;
  }

  std::string ident() {
    std::string s;
    if (!peek_ident(&s)) fail("expected an identifier");
    for (size_t k = 0; k < s.size(); ++k) advance();
    return s;
  }

  bool peek_number() {
    skip_ws();
    return i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_])) != 0;
  }

  Rat number() {
    skip_ws();
    size_t j = i_;
    while (j < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[j])) ||
                                text_[j] == '.' || text_[j] == '/'))
      ++j;
    if (j == i_) fail("expected a number");
    std::string s = text_.substr(i_, j - i_);
    while (i_ < j) advance();
    try {
      return Rat::from_string(s);
    } catch (const std::exception& e) {
      fail(e.what());
    }
    return Rat(0);
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(pos_, what); }

 private:
  void advance() {
    if (i_ < text_.size()) {
      if (text_[i_] == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else {
        ++pos_.column;
      }
      ++i_;
    }
  }

  std::string text_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

class ProtocolParser {
 public:
  explicit ProtocolParser(std::string text) : lex_(std::move(text)) {}

  Protocol parse() {
    Protocol proto;
    lex_.expect_symbol("protocol");
    proto.name = lex_.ident();
    lex_.expect_symbol("{");
    lex_.expect_symbol("roles");
    for (;;) {
      std::string name = lex_.ident();
      try {
        proto.roles.declare(name);
      } catch (const Error& e) {
        lex_.fail(e.what());
      }
      if (!lex_.try_symbol(",")) break;
    }
    lex_.expect_symbol(";");
    roles_ = &proto.roles;
    proto.body = parse_type();
    lex_.expect_symbol("}");
    if (!lex_.eof()) lex_.fail("trailing input after protocol");
    if (!rec_stack_.empty()) lex_.fail("internal: unbalanced recursion stack");
    if (!guarded(proto.body)) lex_.fail("unguarded recursion");
    return proto;
  }

 private:
  Role role() {
    SourcePos at = lex_.pos();
    std::string name = lex_.ident();
    auto r = roles_->find(name);
    if (!r) throw ParseError(at, "undeclared role '" + name + "'");
    return *r;
  }

  GlobalType parse_type() {
    lex_.skip_ws();
    SourcePos at = lex_.pos();
    std::string head;
    if (!lex_.peek_ident(&head)) lex_.fail("expected a protocol term");
    if (head == "end") {
      lex_.ident();
      return GlobalType::end();
    }
    if (head == "rec") {
      lex_.ident();
      std::string var = lex_.ident();
      lex_.expect_symbol(".");
      rec_stack_.push_back(var);
      GlobalType body = parse_type();
      rec_stack_.pop_back();
      return GlobalType::rec(var, body);
    }
    if (head == "continue") {
      lex_.ident();
      SourcePos vat = lex_.pos();
      std::string var = lex_.ident();
      for (size_t i = 0; i < rec_stack_.size(); ++i) {
        if (rec_stack_[rec_stack_.size() - 1 - i] == var)
          return GlobalType::rec_call(i, var);
      }
      throw ParseError(vat, "unbound recursion variable '" + var + "'");
    }

    Role from = role();
    if (lex_.try_symbol("->")) {
      Role to = role();
      if (from == to) throw ParseError(at, "self-messages are rejected");
      if (lex_.try_symbol(":")) {
        auto [payload, cost] = parse_payload();
        lex_.expect_symbol(".");
        return GlobalType::msg(from, to, payload, cost, parse_type());
      }
      lex_.expect_symbol("{");
      GlobalType::Arms arms;
      for (;;) {
        Label l{lex_.ident()};
        lex_.expect_symbol(".");
        arms.push_back({l, parse_type()});
        if (!lex_.try_symbol(",")) break;
      }
      lex_.expect_symbol("}");
      try {
        return GlobalType::branch(from, to, std::move(arms));
      } catch (const Error& e) {
        throw ParseError(at, e.what());
      }
    }
    lex_.expect_symbol("~>");
    Role to = role();
    if (from == to) throw ParseError(at, "self-messages are rejected");
    if (lex_.try_symbol("!")) {
      auto [payload, cost] = parse_payload();
      if (!(cost == CostExpr::constant(0)))
        throw ParseError(at, "a send half carries no cost annotation");
      lex_.expect_symbol(".");
      return GlobalType::send_act(from, to, payload, parse_type());
    }
    lex_.expect_symbol("?");
    auto [payload, cost] = parse_payload();
    lex_.expect_symbol(".");
    return GlobalType::recv_act(to, from, payload, cost, parse_type());
  }

  std::pair<SizedType, CostExpr> parse_payload() {
    lex_.expect_symbol("<");
    std::string base = lex_.ident();
    lex_.expect_symbol("^");
    SizeExpr size = parse_size_expr();
    CostExpr cost = CostExpr::constant(0);
    if (lex_.try_symbol("@")) cost = parse_cost_expr();
    lex_.expect_symbol(">");
    return {SizedType{base, size, {}}, cost};
  }

  SizeExpr parse_size_expr() {
    SizeExpr acc = parse_size_term();
    while (lex_.try_symbol("+")) acc = acc + parse_size_term();
    return acc;
  }

  SizeExpr parse_size_term() {
    if (lex_.peek_number()) {
      Rat k = lex_.number();
      if (lex_.try_symbol("*")) return SizeExpr::scaled(k, parse_size_atom());
      return SizeExpr::constant(k);
    }
    return parse_size_atom();
  }

  SizeExpr parse_size_atom() {
    if (lex_.try_symbol("(")) {
      SizeExpr e = parse_size_expr();
      lex_.expect_symbol(")");
      return e;
    }
    return SizeExpr::var(lex_.ident());
  }

  CostExpr parse_cost_expr() {
    CostExpr acc = parse_cost_term();
    while (lex_.try_symbol("+")) acc = acc + parse_cost_term();
    return acc;
  }

  CostExpr parse_cost_term() {
    SourcePos at = lex_.pos();
    if (lex_.peek_number()) {
      Rat k = lex_.number();
      if (lex_.try_symbol("*")) return CostExpr::scale(k, parse_cost_term());
      return CostExpr::constant(k);
    }
    if (lex_.try_symbol("(")) {
      CostExpr e = parse_cost_expr();
      lex_.expect_symbol(")");
      return e;
    }
    std::string name;
    if (!lex_.peek_ident(&name)) lex_.fail("expected a cost term");
    if (name == "max") {
      lex_.ident();
      lex_.expect_symbol("(");
      CostExpr a = parse_cost_expr();
      lex_.expect_symbol(",");
      CostExpr b = parse_cost_expr();
      lex_.expect_symbol(")");
      return CostExpr::max(a, b);
    }
    if (name == "size") {
      lex_.ident();
      lex_.expect_symbol("(");
      SizeExpr e = parse_size_expr();
      lex_.expect_symbol(")");
      return CostExpr::size_of(e);
    }
    lex_.ident();
    (void)at;
    return CostExpr::var(name);
  }

  Lexer lex_;
  RoleTable* roles_ = nullptr;
  std::vector<std::string> rec_stack_;
};

}  // namespace detail

/// Parses a .camp document. Throws ParseError with a source position on
/// syntax errors, undeclared roles, unbound continues, self-messages, and
/// unguarded recursion.
inline Protocol parse_protocol(const std::string& text) {
  return detail::ProtocolParser(text).parse();
}

}  // namespace campa

#endif  // CAMPA_PARSER_HPP_
