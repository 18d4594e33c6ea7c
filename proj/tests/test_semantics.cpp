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

#include "campa/semantics.hpp"

#include <algorithm>
#include <set>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace campa;
using namespace campa::corpus;

TEST_CASE("global LTS first steps") {
  Role p{0}, q{1}, r{2};
  GlobalType msg = GlobalType::msg(p, q, tau1(), c1(), GlobalType::end());

  auto steps = global_steps(msg);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].first == Action::send(p, q, tau1()));
  CHECK(steps[0].second == GlobalType::msg_t(p, q, tau1(), c1(), GlobalType::end()));

  CHECK(global_steps(GlobalType::end()).empty());

  // independent senders: both first actions enabled
  GlobalType two = GlobalType::msg(p, r, tau1(), c1(),
                                   GlobalType::msg(q, r, tau2(), c2(), GlobalType::end()));
  auto steps2 = global_steps(two);
  std::set<std::string> names;
  for (auto& [a, s] : steps2) names.insert(a.str());
  CHECK(names == std::set<std::string>{"r0r2!t1^n", "r1r2!t2^m"});
}

TEST_CASE("global LTS chains through transit, eval, run") {
  Role p{0}, q{1};
  GlobalType g = GlobalType::msg(p, q, tau1(), c1(), GlobalType::end());
  auto s1 = global_steps(g);
  REQUIRE(s1.size() == 1);
  auto s2 = global_steps(s1[0].second);
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].first == Action::recv(p, q, tau1()));
  auto s3 = global_steps(s2[0].second);
  REQUIRE(s3.size() == 1);
  CHECK(s3[0].first == Action::run(q, c1()));
  CHECK(s3[0].second.is_end());
}

TEST_CASE("configuration LTS follows LR1..LR5") {
  Role p{0}, q{1};
  Configuration cfg;
  cfg.locals.emplace(p.id, LocalType::send(q, tau1(), LocalType::end()));
  cfg.locals.emplace(q.id, LocalType::recv(p, tau1(), c1(), LocalType::end()));

  auto s1 = config_steps(cfg);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].first == Action::send(p, q, tau1()));

  auto s2 = config_steps(s1[0].second);
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].first == Action::recv(p, q, tau1()));

  auto s3 = config_steps(s2[0].second);
  REQUIRE(s3.size() == 1);
  CHECK(s3[0].first == Action::run(q, c1()));
  CHECK(s3[0].second.all_end());
  CHECK(s3[0].second.queues_empty());
}

TEST_CASE("configuration branching pops the label in FIFO order") {
  Role p{0}, q{1};
  Configuration cfg;
  cfg.locals.emplace(p.id, LocalType::end());
  cfg.locals.emplace(
      q.id, LocalType::branch(p, {{Label{"l1"}, LocalType::end()},
                                  {Label{"l2"}, LocalType::send(p, tau1(), LocalType::end())}}));
  cfg.queues[{p.id, q.id}].push_back(QueueItem::tag(Label{"l2"}));

  auto steps = config_steps(cfg);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].first == Action::branch(p, q, Label{"l2"}));
  CHECK(steps[0].second.locals.at(q.id) == LocalType::send(p, tau1(), LocalType::end()));
}

TEST_CASE("enumerate_traces on the single message") {
  Role p{0}, q{1};
  GlobalType g = GlobalType::msg(p, q, tau1(), c1(), GlobalType::end());
  auto traces = enumerate_traces(g, {});
  REQUIRE(traces.size() == 1);
  REQUIRE(traces[0].size() == 3);
  CHECK(traces[0][0] == Action::send(p, q, tau1()));
  CHECK(traces[0][1] == Action::recv(p, q, tau1()));
  CHECK(traces[0][2] == Action::run(q, c1()));

  CHECK(enumerate_traces(GlobalType::end(), {}).size() == 1);
  CHECK(enumerate_traces(GlobalType::end(), {})[0].empty());
}

TEST_CASE("enumerate_traces covers the worked scatter/gather traces") {
  Protocol proto = scatter_gather();
  Role p = *proto.roles.find("p");
  Role q = *proto.roles.find("q");
  Role r = *proto.roles.find("r");
  Role s = *proto.roles.find("s");

  auto traces = enumerate_traces(proto.body, {});
  std::set<std::string> printed;
  for (const auto& t : traces) printed.insert(trace_str(t));

  Trace tr1{Action::send(p, q, tau1()), Action::recv(p, q, tau1()), Action::run(q, c1()),
            Action::send(q, s, tau2()), Action::recv(q, s, tau2()), Action::run(s, czero()),
            Action::send(p, r, tau1()), Action::recv(p, r, tau1()), Action::run(r, c1()),
            Action::send(r, s, tau2()), Action::recv(r, s, tau2()), Action::run(s, czero())};
  Trace tr2{Action::send(p, q, tau1()), Action::send(p, r, tau1()), Action::recv(p, r, tau1()),
            Action::run(r, c1()),       Action::recv(p, q, tau1()), Action::run(q, c1()),
            Action::send(q, s, tau2()), Action::send(r, s, tau2()), Action::recv(q, s, tau2()),
            Action::run(s, czero()),    Action::recv(r, s, tau2()), Action::run(s, czero())};
  CHECK(printed.count(trace_str(tr1)) == 1);
  CHECK(printed.count(trace_str(tr2)) == 1);
  CHECK(traces.size() > 2);
}

TEST_CASE("permutation soundness spot check") {
  Protocol proto = scatter_gather();
  auto traces = enumerate_traces(proto.body, {});
  std::set<std::string> printed;
  for (const auto& t : traces) printed.insert(trace_str(t));

  for (const auto& t : traces) {
    for (size_t i = 0; i + 1 < t.size(); ++i) {
      if (t[i].subject() == t[i + 1].subject()) continue;
      Trace swapped = t;
      std::swap(swapped[i], swapped[i + 1]);
      if (replay_trace(proto.body, {}, swapped))
        CHECK(printed.count(trace_str(swapped)) == 1);
    }
  }
}

TEST_CASE("deadlock freedom of well-formed corpus protocols") {
  for (auto& entry : standard_corpus()) {
    for (const auto& ks : entry.unrollings) {
      auto report = deadlock_free(entry.protocol.body, ks);
      INFO(entry.protocol.name);
      CHECK(report.ok);
      CHECK_FALSE(report.orphaned_messages);
    }
  }
}

TEST_CASE("the receive-first cyclic configuration deadlocks") {
  Role p{0}, q{1}, r{2};
  SizedType t = ty("t", "n");
  CostExpr c = CostExpr::var("c");
  // Lp' = rec X. r?t@c. q!t. X   (and cyclically for q, r)
  auto make = [&](Role from, Role to) {
    return LocalType::rec(
        "X", LocalType::recv(from, t, c,
                             LocalType::send(to, t, LocalType::rec_call(0, "X"))));
  };
  Configuration cfg;
  cfg.locals.emplace(p.id, make(r, q));
  cfg.locals.emplace(q.id, make(p, r));
  cfg.locals.emplace(r.id, make(q, p));

  auto report = explore_deadlock(cfg);
  CHECK_FALSE(report.ok);
  REQUIRE(report.counterexample.has_value());
  CHECK_FALSE(report.counterexample->all_end());

  // the all-end configuration is trivially deadlock-free
  Configuration done;
  done.locals.emplace(p.id, LocalType::end());
  CHECK(explore_deadlock(done).ok);
}

TEST_CASE("trace equivalence between global and configuration semantics") {
  Role p{0}, q{1};
  GlobalType single = GlobalType::msg(p, q, tau1(), c1(), GlobalType::end());
  CHECK(trace_equiv(single, {}, 3).ok);
  CHECK(trace_equiv(GlobalType::end(), {}, 5).ok);

  Protocol pp = ping_pong();
  CHECK(trace_equiv(pp.body, {1}, 6).ok);

  for (auto& entry : standard_corpus()) {
    for (const auto& ks : entry.unrollings) {
      INFO(entry.protocol.name);
      CHECK(trace_equiv(entry.protocol.body, ks, 14).ok);
    }
  }

  // recursion threaded through chained branches
  Protocol br = branching_rec();
  CHECK(trace_equiv(br.body, {1}, 14).ok);
  CHECK(trace_equiv(br.body, {2}, 14).ok);
  CHECK(deadlock_free(br.body, {2}).ok);
}

TEST_CASE("brute-force bounded trace sets agree with the synchronized walk") {
  // independent oracle for trace_equiv at small depth: literal set equality
  Protocol proto = scatter_gather();
  GlobalType start = proto.body;
  std::size_t depth = 6;

  std::set<std::string> global_set, config_set;
  auto walk_global = [&](const GlobalType& g, Trace& t, auto&& self) -> void {
    global_set.insert(trace_str(t));
    if (t.size() == depth) return;
    for (auto& [a, succ] : global_steps(g)) {
      t.push_back(a);
      self(succ, t, self);
      t.pop_back();
    }
  };
  auto walk_config = [&](const Configuration& c, Trace& t, auto&& self) -> void {
    config_set.insert(trace_str(t));
    if (t.size() == depth) return;
    for (auto& [a, succ] : config_steps(c)) {
      t.push_back(a);
      self(succ, t, self);
      t.pop_back();
    }
  };
  Trace t;
  walk_global(start, t, walk_global);
  walk_config(initial_configuration(start), t, walk_config);
  CHECK(global_set == config_set);
  CHECK(trace_equiv(start, {}, depth).ok);
}

TEST_CASE("budget guard reports instead of hanging") {
  Protocol big = mw(3);
  ExploreLimits limits;
  limits.state_cap = 10;
  CHECK_THROWS_AS(enumerate_traces(big.body, {2}, limits), BudgetExceeded);
}
