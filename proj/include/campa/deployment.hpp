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

// Resource-bounded cost: participants pinned to nodes with finitely many
// cores. Every interaction claims the least-loaded core of its node (lowest
// index on ties); the receiver additionally pays the inter-node latency and
// the local computation, gated on both the message's availability and its
// own program order. With one dedicated core per role and zero latencies
// this degrades exactly to the evaluated base cost model.

#ifndef CAMPA_DEPLOYMENT_HPP_
#define CAMPA_DEPLOYMENT_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "campa/algebra.hpp"
#include "campa/core.hpp"
#include "campa/cost.hpp"
#include "campa/spline.hpp"
#include "campa/unroll.hpp"

namespace campa {

using NodeId = std::string;

/// size -> transmission time; affine or tabulated (natural cubic spline).
struct LatencyFn {
  std::optional<std::pair<Rat, Rat>> affine;  // base, per_unit
  std::optional<CubicSpline> table;

  Rat operator()(const Rat& size) const {
    if (affine) return affine->first + affine->second * size;
    if (table) return (*table)(size);
    throw Error("latency function with no definition");
  }
};

struct HardwareSpec {
  std::map<NodeId, std::size_t> nodes;                       // node -> core count
  std::map<std::pair<NodeId, NodeId>, LatencyFn> latency;    // ordered pair -> fn
  std::map<NodeId, Rat> overhead;                            // local-computation factor

  const LatencyFn& latency_fn(const NodeId& a, const NodeId& b) const {
    auto it = latency.find({a, b});
    if (it == latency.end())
      throw Error("no latency entry for nodes " + a + " -> " + b);
    return it->second;
  }

  Rat overhead_of(const NodeId& n) const {
    auto it = overhead.find(n);
    return it == overhead.end() ? Rat(1) : it->second;
  }

  void validate() const {
    for (const auto& [n, cores] : nodes)
      if (cores < 1) throw Error("node " + n + " must have at least one core");
    for (const auto& [pair, fn] : latency) {
      if (!nodes.count(pair.first)) throw Error("latency references unknown node " + pair.first);
      if (!nodes.count(pair.second)) throw Error("latency references unknown node " + pair.second);
    }
  }
};

/// Total pinning of protocol roles to nodes.
struct Mapping {
  std::map<std::uint32_t, NodeId> pin;  // role id -> node

  const NodeId& node_of(Role r) const {
    auto it = pin.find(r.id);
    if (it == pin.end())
      throw Error("role r" + std::to_string(r.id) + " is not mapped to a node");
    return it->second;
  }
};

/// Per-core availability times (earliest instant a core is free again).
struct NodeState {
  std::map<NodeId, std::vector<Rat>> cores;

  static NodeState initial(const HardwareSpec& hw) {
    NodeState s;
    for (const auto& [n, count] : hw.nodes) s.cores[n].assign(count, Rat(0));
    return s;
  }

  /// Index of the least-loaded core; lowest index wins ties.
  std::size_t pick(const NodeId& n) const {
    const auto& v = cores.at(n);
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] < v[best]) best = i;
    return best;
  }

  static NodeState merge_max(const NodeState& a, const NodeState& b) {
    NodeState out = a;
    for (const auto& [n, v] : b.cores) {
      auto& dst = out.cores[n];
      for (std::size_t i = 0; i < v.size(); ++i) dst[i] = max(dst[i], v[i]);
    }
    return out;
  }
};

namespace detail {

struct ResourceState {
  std::map<std::uint32_t, Rat> role_time;  // accumulated time per role
  NodeState sys;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Rat>> avail;  // channel FIFO

  Rat time_of(Role r) const {
    auto it = role_time.find(r.id);
    return it == role_time.end() ? Rat(0) : it->second;
  }
};

class ResourceFold {
 public:
  ResourceFold(const HardwareSpec& hw, const Mapping& m, const Binding& b, CostOptions opt)
      : hw_(hw), map_(m), binding_(b), opt_(opt) {}

  ResourceState run(const GlobalType& g, ResourceState s) {
    using K = GlobalType::Kind;
    switch (g.kind()) {
      case K::kEnd:
        return s;
      case K::kMsg: {
        Rat avail = do_send(g.from(), send_cost(g.payload()), s);
        do_recv(g.from(), g.to(), avail, recv_cost(g.payload()), run_cost(g), g.payload(), s);
        return run(g.cont(), std::move(s));
      }
      case K::kBranch: {
        std::optional<ResourceState> acc;
        for (const auto& arm : g.arms()) {
          ResourceState t = s;
          Rat avail = do_send(g.from(), label_send(), t);
          do_recv(g.from(), g.to(), avail, label_recv(), Rat(0), unit_type(), t);
          ResourceState r = run(arm.cont, std::move(t));
          acc = acc ? merge(*acc, r) : r;
        }
        return *acc;
      }
      case K::kSendAct: {
        Rat avail = do_send(g.from(), send_cost(g.payload()), s);
        s.avail[{g.from().id, g.to().id}].push_back(avail);
        return run(g.cont(), std::move(s));
      }
      case K::kRecvAct: {
        auto& fifo = s.avail[{g.from().id, g.to().id}];
        if (fifo.empty()) throw Error("ill-ordered optimized type under resources");
        Rat avail = fifo.front();
        fifo.erase(fifo.begin());
        do_recv(g.from(), g.to(), avail, recv_cost(g.payload()), run_cost(g), g.payload(), s);
        return run(g.cont(), std::move(s));
      }
      case K::kEval: {
        // local computation claims a core of its own node
        NodeId n = map_.node_of(g.from());
        std::size_t c = s.sys.pick(n);
        Rat start = max(s.sys.cores.at(n)[c], s.time_of(g.from()));
        Rat done = start + hw_.overhead_of(n) * evaluate(g.cost(), binding_);
        s.sys.cores.at(n)[c] = done;
        s.role_time[g.from().id] = done;
        return run(g.cont(), std::move(s));
      }
      case K::kRec:
        throw Error("resource cost requires an unrolled type");
      default:
        throw Error("resource cost does not cover runtime-extended forms");
    }
  }

 private:
  Rat send_cost(const SizedType& t) { return binding_.comm_value(true, t); }
  Rat recv_cost(const SizedType& t) { return binding_.comm_value(false, t); }
  Rat label_send() { return opt_.zero_label_cost ? Rat(0) : binding_.comm_value(true, unit_type()); }
  Rat label_recv() { return opt_.zero_label_cost ? Rat(0) : binding_.comm_value(false, unit_type()); }
  Rat run_cost(const GlobalType& g) { return evaluate(g.cost(), binding_); }

  /// Sender claims a core: starts at max(core availability, own time).
  Rat do_send(Role p, const Rat& cost, ResourceState& s) {
    NodeId n = map_.node_of(p);
    std::size_t c = s.sys.pick(n);
    Rat start = max(s.sys.cores.at(n)[c], s.time_of(p));
    Rat done = start + cost;
    s.sys.cores.at(n)[c] = done;
    s.role_time[p.id] = done;
    return done;
  }

  /// Receiver claims a core gated on the message availability; pays
  /// crecv + latency + overhead-scaled local computation on that core.
  void do_recv(Role from, Role to, const Rat& avail, const Rat& rcost, const Rat& comp,
               const SizedType& payload, ResourceState& s) {
    NodeId n = map_.node_of(to);
    std::size_t c = s.sys.pick(n);
    Rat lat = hw_.latency_fn(map_.node_of(from), n)(payload.size.evaluate(binding_.sizes));
    Rat start = max(max(s.sys.cores.at(n)[c], s.time_of(to)), avail);
    Rat done = start + rcost + lat + hw_.overhead_of(n) * comp;
    s.sys.cores.at(n)[c] = done;
    s.role_time[to.id] = done;
  }

  ResourceState merge(const ResourceState& a, const ResourceState& b) {
    ResourceState out = a;
    for (const auto& [r, t] : b.role_time) {
      auto it = out.role_time.find(r);
      out.role_time[r] = it == out.role_time.end() ? t : max(it->second, t);
    }
    out.sys = NodeState::merge_max(a.sys, b.sys);
    if (!(a.avail == b.avail))
      throw Error("branch arms disagree on in-flight availability under resources");
    return out;
  }

  const HardwareSpec& hw_;
  const Mapping& map_;
  const Binding& binding_;
  CostOptions opt_;
};

}  // namespace detail

/// Fully-instantiated per-role completion times under a hardware spec and
/// participant pinning.
inline std::map<std::uint32_t, Rat> resource_cost(const GlobalType& g,
                                                  const std::vector<std::size_t>& ks,
                                                  const HardwareSpec& hw, const Mapping& m,
                                                  const Binding& b, const CostOptions& opt = {}) {
  hw.validate();
  for (Role r : roles_of(g)) {
    const NodeId& n = m.node_of(r);
    if (!hw.nodes.count(n))
      throw Error("role r" + std::to_string(r.id) + " mapped to unknown node " + n);
  }
  detail::ResourceFold fold(hw, m, b, opt);
  detail::ResourceState final_state =
      fold.run(unroll(g, ks), detail::ResourceState{{}, NodeState::initial(hw), {}});
  return final_state.role_time;
}

/// Natural cubic spline through profiled (size, time) samples.
inline CubicSpline fit_cost_curve(std::vector<std::pair<Rat, Rat>> samples) {
  return CubicSpline::fit(std::move(samples));
}

}  // namespace campa

#endif  // CAMPA_DEPLOYMENT_HPP_
