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

// Programmatic protocol construction: a small builder plus generators for
// the standard topologies (pipeline, ring, master-worker, butterfly).
// Parameterized topologies are plain functions producing concrete-size
// instances; well-formedness is checked on the instance.

#ifndef CAMPA_BUILDERS_HPP_
#define CAMPA_BUILDERS_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "campa/core.hpp"

namespace campa {

/// Accumulates roles and a reversed chain of interactions, closing with end
/// or a recursion. Mirrors writing the protocol top to bottom.
class ProtocolBuilder {
 public:
  explicit ProtocolBuilder(std::string name) { proto_.name = std::move(name); }

  Role mk_role(const std::string& name) { return proto_.roles.declare(name); }

  ProtocolBuilder& message(Role from, Role to, SizedType payload, CostExpr cost) {
    chain_.push_back([=](GlobalType cont) {
      return GlobalType::msg(from, to, std::move(payload), std::move(cost), std::move(cont));
    });
    return *this;
  }

  ProtocolBuilder& choice(Role from, Role to, GlobalType::Arms arms) {
    chain_.push_back([from, to, arms = std::move(arms)](GlobalType cont) {
      (void)cont;  // a choice closes its own continuations
      return GlobalType::branch(from, to, arms);
    });
    closed_ = true;
    return *this;
  }

  ProtocolBuilder& bcast(Role from, std::vector<Role> to, GlobalType::Arms arms) {
    chain_.push_back([from, to = std::move(to), arms = std::move(arms)](GlobalType cont) {
      (void)cont;
      return broadcast(from, to, arms);
    });
    closed_ = true;
    return *this;
  }

  /// Wraps everything built so far in this builder into rec NAME. ... with
  /// the chain tail continuing to the recursion variable.
  Protocol close_rec(const std::string& var) { return close(GlobalType::rec_call(0, var), var); }

  Protocol close_end() { return close(GlobalType::end(), ""); }

 private:
  Protocol close(GlobalType tail, const std::string& rec_var) {
    GlobalType body = closed_ && !chain_.empty() ? chain_.back()(GlobalType::end()) : tail;
    std::size_t start = closed_ && !chain_.empty() ? chain_.size() - 1 : chain_.size();
    for (std::size_t i = start; i > 0; --i) body = chain_[i - 1](body);
    proto_.body = rec_var.empty() ? body : GlobalType::rec(rec_var, body);
    if (!guarded(proto_.body)) throw Error("builder produced an unguarded protocol");
    return proto_;
  }

  Protocol proto_;
  std::vector<std::function<GlobalType(GlobalType)>> chain_;
  bool closed_ = false;
};

// ---------------------------------------------------------------------------
// Topology generators

/// rec X. p0 -> p1 <t1@c1>. p1 -> p2 <t2@c2>. ... X
inline Protocol pipe(const std::vector<std::pair<SizedType, CostExpr>>& stages) {
  if (stages.empty()) throw Error("pipe needs at least one stage");
  ProtocolBuilder b("pipe" + std::to_string(stages.size()));
  std::vector<Role> roles;
  for (std::size_t i = 0; i <= stages.size(); ++i) roles.push_back(b.mk_role("p" + std::to_string(i)));
  for (std::size_t i = 0; i < stages.size(); ++i)
    b.message(roles[i], roles[i + 1], stages[i].first, stages[i].second);
  return b.close_rec("X");
}

/// rec X. p0 -> p1 <t@c>. ... p(n-1) -> p0 <t@c>. X
inline Protocol ring(std::size_t n, const SizedType& payload, const CostExpr& cost) {
  if (n < 2) throw Error("ring needs at least two participants");
  ProtocolBuilder b("ring" + std::to_string(n));
  std::vector<Role> roles;
  for (std::size_t i = 0; i < n; ++i) roles.push_back(b.mk_role("p" + std::to_string(i)));
  for (std::size_t i = 0; i < n; ++i)
    b.message(roles[i], roles[(i + 1) % n], payload, cost);
  return b.close_rec("X");
}

/// Branch-free master-worker: m1 distributes n tasks, m2 collects in
/// reverse order.
inline Protocol master_worker(std::size_t n, const SizedType& task, const CostExpr& task_cost,
                              const SizedType& result, const CostExpr& result_cost) {
  if (n < 1) throw Error("master_worker needs at least one worker");
  ProtocolBuilder b("mw" + std::to_string(n));
  Role m1 = b.mk_role("m1");
  Role m2 = b.mk_role("m2");
  std::vector<Role> w;
  for (std::size_t i = 1; i <= n; ++i) w.push_back(b.mk_role("w" + std::to_string(i)));
  for (std::size_t i = 0; i < n; ++i) b.message(m1, w[i], task, task_cost);
  for (std::size_t i = n; i > 0; --i) b.message(w[i - 1], m2, result, result_cost);
  return b.close_rec("X");
}

/// Master-worker with the label broadcast: m1 -> {m2, w1..wn} {more. ...X,
/// done. end}.
inline Protocol master_worker_choice(std::size_t n, const SizedType& task,
                                     const CostExpr& task_cost, const SizedType& result,
                                     const CostExpr& result_cost) {
  if (n < 1) throw Error("master_worker needs at least one worker");
  ProtocolBuilder b("mwc" + std::to_string(n));
  Role m1 = b.mk_role("m1");
  Role m2 = b.mk_role("m2");
  std::vector<Role> w;
  std::vector<Role> receivers{m2};
  for (std::size_t i = 1; i <= n; ++i) {
    w.push_back(b.mk_role("w" + std::to_string(i)));
    receivers.push_back(w.back());
  }
  GlobalType more = GlobalType::rec_call(0, "X");
  for (std::size_t i = n; i > 0; --i)
    more = GlobalType::msg(w[i - 1], m2, result, result_cost, more);
  for (std::size_t i = n; i > 0; --i) more = GlobalType::msg(m1, w[i - 1], task, task_cost, more);
  Protocol out;
  out.name = "mwc" + std::to_string(n);
  out.roles.declare("m1");
  out.roles.declare("m2");
  for (std::size_t i = 1; i <= n; ++i) out.roles.declare("w" + std::to_string(i));
  out.body = GlobalType::rec(
      "X", broadcast(m1, receivers, {{Label{"more"}, more}, {Label{"done"}, GlobalType::end()}}));
  if (!guarded(out.body)) throw Error("builder produced an unguarded protocol");
  return out;
}

/// Butterfly exchange over 2^n participants: at level l, partners at offset
/// 2^(n-l-1) inside each block of size 2^(n-l) exchange values both ways.
inline Protocol butterfly(std::size_t n, const SizedType& payload, const CostExpr& cost) {
  std::size_t count = std::size_t{1} << n;
  if (n < 1) throw Error("butterfly needs at least two participants (n >= 1)");
  ProtocolBuilder b("butterfly" + std::to_string(count));
  std::vector<Role> roles;
  for (std::size_t i = 0; i < count; ++i) roles.push_back(b.mk_role("p" + std::to_string(i)));
  for (std::size_t level = 0; level < n; ++level) {
    std::size_t block = count >> level;     // 2^(n-l)
    std::size_t half = block >> 1;          // 2^(n-l-1)
    for (std::size_t i = 0; i < (std::size_t{1} << level); ++i) {
      for (std::size_t j = 0; j < half; ++j) {
        std::size_t a = i * block + j;
        std::size_t partner = a + half;
        b.message(roles[a], roles[partner], payload, cost);
        b.message(roles[partner], roles[a], payload, cost);
      }
    }
  }
  return b.close_end();
}

}  // namespace campa

#endif  // CAMPA_BUILDERS_HPP_
