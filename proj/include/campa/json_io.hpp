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

// JSON encodings: cost equations as prefix trees, binding files (sizes,
// variables, send/recv cost models), and architecture descriptions
// (nodes/cores, inter-node latency functions, role pinning, overheads).
// Rationals may be written as JSON numbers or as strings like "2/3".

#ifndef CAMPA_JSON_IO_HPP_
#define CAMPA_JSON_IO_HPP_

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "campa/algebra.hpp"
#include "campa/core.hpp"
#include "campa/deployment.hpp"
#include "campa/parser.hpp"

namespace campa {

using Json = nlohmann::ordered_json;

inline Rat rat_from_json(const Json& j) {
  if (j.is_string()) return Rat::from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_number()) return Rat::from_decimal(j.dump());
  throw Error("expected a number or a rational string, got: " + j.dump());
}

inline Json size_to_json(const SizeExpr& e) {
  Json j;
  j["const"] = e.constant_part().str();
  if (!e.coeffs().empty()) {
    Json terms = Json::object();
    for (const auto& [v, c] : e.coeffs()) terms[v] = c.str();
    j["vars"] = terms;
  }
  return j;
}

/// Prefix tree {op, args...} with ops const/var/size/send/recv/add/max/scale
/// (and sub, which only latency internals produce).
inline Json expr_to_json(const CostExpr& e) {
  Json j;
  switch (e.kind()) {
    case CostExpr::Kind::kConst:
      j["op"] = "const";
      j["value"] = e.k().str();
      return j;
    case CostExpr::Kind::kVar:
      j["op"] = "var";
      j["name"] = e.name();
      return j;
    case CostExpr::Kind::kSize:
      j["op"] = "size";
      j["size"] = size_to_json(e.size());
      return j;
    case CostExpr::Kind::kSend:
    case CostExpr::Kind::kRecv:
      j["op"] = e.kind() == CostExpr::Kind::kSend ? "send" : "recv";
      j["type"] = e.payload().base;
      j["size"] = size_to_json(e.payload().size);
      return j;
    case CostExpr::Kind::kAdd:
    case CostExpr::Kind::kMax:
    case CostExpr::Kind::kSub:
      j["op"] = e.kind() == CostExpr::Kind::kAdd ? "add"
                : e.kind() == CostExpr::Kind::kMax ? "max"
                                                   : "sub";
      j["args"] = Json::array({expr_to_json(e.lhs()), expr_to_json(e.rhs())});
      return j;
    case CostExpr::Kind::kScale:
      j["op"] = "scale";
      j["factor"] = e.k().str();
      j["args"] = Json::array({expr_to_json(e.lhs())});
      return j;
  }
  throw Error("unreachable");
}

/// Equations as [{role, expr}...], optionally instantiated against a
/// binding (adds exact rational and decimal renderings).
inline Json env_to_json(const CostEnv& env, const RoleTable& roles,
                        const Binding* binding = nullptr) {
  Json out = Json::array();
  for (const auto& [id, nf] : env.entries()) {
    Json entry;
    entry["role"] = roles.name(Role{id});
    entry["expr"] = expr_to_json(denormalize(canonical(nf)));
    if (binding) {
      Rat v = evaluate(nf, *binding);
      entry["rational"] = v.str();
      entry["decimal"] = v.to_double();
    }
    out.push_back(entry);
  }
  return out;
}

namespace detail {

/// One send/recv cost-model entry: matches payloads by base type (and
/// optionally by size expression) and maps the concrete size through an
/// affine function or a fitted curve.
struct CommEntry {
  std::string type;
  std::optional<SizeExpr> size_expr;
  std::optional<std::pair<Rat, Rat>> affine;
  std::optional<CubicSpline> table;

  bool matches(const SizedType& t) const {
    if (t.base != type) return false;
    if (size_expr && !(*size_expr == t.size)) return false;
    return true;
  }

  Rat value(const Rat& size) const {
    if (affine) return affine->first + affine->second * size;
    return (*table)(size);
  }
};

inline SizeExpr parse_size_text(const std::string& text) {
  // reuse the protocol grammar by wrapping the expression in a payload
  Protocol p = parse_protocol("protocol s { roles a, b; a->b:<t^" + text + ">. end }");
  return p.body.payload().size;
}

inline CommEntry comm_entry_from_json(const Json& j) {
  CommEntry e;
  e.type = j.at("type").get<std::string>();
  if (j.contains("size_expr")) e.size_expr = parse_size_text(j.at("size_expr").get<std::string>());
  if (j.contains("affine")) {
    e.affine = {rat_from_json(j.at("affine").at("base")),
                rat_from_json(j.at("affine").at("per_unit"))};
  } else if (j.contains("table")) {
    std::vector<std::pair<Rat, Rat>> samples;
    for (const auto& row : j.at("table"))
      samples.emplace_back(rat_from_json(row.at(0)), rat_from_json(row.at(1)));
    e.table = fit_cost_curve(std::move(samples));
  } else {
    throw Error("cost-model entry needs 'affine' or 'table'");
  }
  return e;
}

}  // namespace detail

/// Bindings file: { "sizes": {var: number}, "vars": {name: number},
/// "send": [entry...], "recv": [entry...] }.
inline Binding load_bindings(const Json& j) {
  Binding b;
  if (j.contains("sizes"))
    for (auto& [k, v] : j.at("sizes").items()) b.sizes[k] = rat_from_json(v);
  if (j.contains("vars"))
    for (auto& [k, v] : j.at("vars").items()) b.vars[k] = rat_from_json(v);
  auto entries = std::make_shared<std::pair<std::vector<detail::CommEntry>,
                                            std::vector<detail::CommEntry>>>();
  if (j.contains("send"))
    for (const auto& e : j.at("send")) entries->first.push_back(detail::comm_entry_from_json(e));
  if (j.contains("recv"))
    for (const auto& e : j.at("recv")) entries->second.push_back(detail::comm_entry_from_json(e));
  b.comm_model = [entries](bool is_send, const SizedType& t,
                           const Rat& size) -> std::optional<Rat> {
    const auto& list = is_send ? entries->first : entries->second;
    for (const auto& e : list)
      if (e.matches(t)) return e.value(size);
    return std::nullopt;
  };
  return b;
}

/// Serializes a hardware spec + mapping back to the architecture schema.
/// Tabulated latency functions are emitted as their knots.
inline Json architecture_to_json(const HardwareSpec& hw, const Mapping& m,
                                 const RoleTable& roles) {
  Json j;
  j["nodes"] = Json::object();
  for (const auto& [n, cores] : hw.nodes) j["nodes"][n] = cores;
  j["latency"] = Json::array();
  for (const auto& [pair, fn] : hw.latency) {
    Json entry;
    entry["from"] = pair.first;
    entry["to"] = pair.second;
    if (fn.affine) {
      entry["affine"] = {{"base", fn.affine->first.str()},
                         {"per_unit", fn.affine->second.str()}};
    } else if (fn.table) {
      Json rows = Json::array();
      for (const Rat& x : fn.table->knots()) rows.push_back(Json::array({x.str(), (*fn.table)(x).str()}));
      entry["table"] = rows;
    }
    j["latency"].push_back(entry);
  }
  j["mapping"] = Json::object();
  for (const auto& [rid, node] : m.pin) j["mapping"][roles.name(Role{rid})] = node;
  if (!hw.overhead.empty()) {
    j["overhead"] = Json::object();
    for (const auto& [n, f] : hw.overhead) j["overhead"][n] = f.str();
  }
  return j;
}

/// Architecture file: { "nodes": {name: cores}, "latency": [{from, to,
/// affine|table}...], "mapping": {role: node}, "overhead": {node: factor} }.
/// Returns the hardware description plus the role pinning resolved against
/// the protocol's role table. Validation reports every violation.
inline std::pair<HardwareSpec, Mapping> load_architecture(const Json& j, const RoleTable& roles) {
  HardwareSpec hw;
  Mapping m;
  std::vector<std::string> problems;

  if (!j.contains("nodes") || j.at("nodes").empty()) problems.push_back("no nodes declared");
  if (j.contains("nodes"))
    for (auto& [name, cores] : j.at("nodes").items()) {
      long n = cores.is_number_integer() ? cores.get<long>() : -1;
      if (n < 1)
        problems.push_back("node " + name + " must have a positive integer core count");
      else
        hw.nodes[name] = static_cast<std::size_t>(n);
    }

  if (j.contains("latency"))
    for (const auto& entry : j.at("latency")) {
      std::string from = entry.at("from").get<std::string>();
      std::string to = entry.at("to").get<std::string>();
      if (!hw.nodes.count(from)) problems.push_back("latency entry names unknown node " + from);
      if (!hw.nodes.count(to)) problems.push_back("latency entry names unknown node " + to);
      LatencyFn fn;
      if (entry.contains("affine")) {
        fn.affine = {rat_from_json(entry.at("affine").at("base")),
                     rat_from_json(entry.at("affine").at("per_unit"))};
      } else if (entry.contains("table")) {
        std::vector<std::pair<Rat, Rat>> samples;
        for (const auto& row : entry.at("table"))
          samples.emplace_back(rat_from_json(row.at(0)), rat_from_json(row.at(1)));
        fn.table = fit_cost_curve(std::move(samples));
      } else {
        problems.push_back("latency entry for " + from + "->" + to + " needs affine or table");
      }
      hw.latency[{from, to}] = std::move(fn);
    }

  if (j.contains("mapping")) {
    for (auto& [role_name, node] : j.at("mapping").items()) {
      auto r = roles.find(role_name);
      if (!r) {
        problems.push_back("mapping names unknown role " + role_name);
        continue;
      }
      std::string n = node.get<std::string>();
      if (!hw.nodes.count(n))
        problems.push_back("role " + role_name + " is mapped to unknown node " + n);
      m.pin[r->id] = n;
    }
  }
  for (std::size_t i = 0; i < roles.size(); ++i) {
    Role r{static_cast<std::uint32_t>(i)};
    if (!m.pin.count(r.id)) problems.push_back("role " + roles.name(r) + " is not mapped");
  }

  if (j.contains("overhead"))
    for (auto& [node, factor] : j.at("overhead").items()) {
      if (!hw.nodes.count(node)) problems.push_back("overhead names unknown node " + node);
      hw.overhead[node] = rat_from_json(factor);
    }

  if (!problems.empty()) {
    std::string all = "invalid architecture:";
    for (const auto& p : problems) all += "\n  - " + p;
    throw Error(all);
  }
  return {std::move(hw), std::move(m)};
}

}  // namespace campa

#endif  // CAMPA_JSON_IO_HPP_
