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

// Acceptance suite: end-to-end checks of the analysis pipeline against the
// published closed forms and theorems, with pinned tolerances (exact
// rational comparison throughout) and runtime budgets. Prints one line per
// criterion.

#include <chrono>
#include <iostream>

#include "campa/campa.hpp"
#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace campa;
using namespace campa::corpus;

namespace {

class Criterion {
 public:
  Criterion(int number, std::string what, double budget_seconds)
      : number_(number), what_(std::move(what)), budget_(budget_seconds),
        start_(std::chrono::steady_clock::now()) {}

  void finish(bool ok) {
    double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::cout << "criterion " << number_ << " (" << what_ << "): " << (ok ? "PASS" : "FAIL")
              << "  [" << took << " s, budget " << budget_ << " s]" << std::endl;
    CHECK(ok);
    CHECK(took < budget_);
  }

 private:
  int number_;
  std::string what_;
  double budget_;
  std::chrono::steady_clock::time_point start_;
};

CostExpr send(const SizedType& t) { return CostExpr::send(t); }
CostExpr recv(const SizedType& t) { return CostExpr::recv(t); }

bool env_entry_is(const CostEnv& env, Role r, const CostExpr& expect) {
  return canonical(env.get(r)) == normalize(expect);
}

struct NamedProtocol {
  Protocol protocol;
  std::vector<std::vector<std::size_t>> unrollings;
};

std::vector<NamedProtocol> acceptance_corpus() {
  std::vector<NamedProtocol> out;
  out.push_back({scatter_gather(), {{}}});
  out.push_back({pipeline(), {{1}, {2}}});
  out.push_back({ping_pong(), {{1}, {2}}});
  out.push_back({ring3(), {{1}, {2}}});
  out.push_back({mw(2), {{1}, {2}}});
  out.push_back({mw(3), {{1}, {2}}});
  out.push_back({mergesort2(), {{}}});
  out.push_back({dbuff(), {{1}, {2}}});
  return out;
}

}  // namespace

TEST_CASE("criterion 1: golden symbolic equations") {
  Criterion crit(1, "golden symbolic equations", 1.0);
  bool ok = true;

  {  // (a) scatter/gather, all four roles
    Protocol proto = scatter_gather();
    Role p = *proto.roles.find("p"), q = *proto.roles.find("q");
    Role r = *proto.roles.find("r"), s = *proto.roles.find("s");
    CostEnv env = global_cost(proto.body, {});
    ok = ok && env_entry_is(env, p, CostExpr::scale(Rat(2), send(tau1())));
    ok = ok && env_entry_is(env, q, send(tau1()) + recv(tau1()) + c1() + send(tau2()));
    ok = ok && env_entry_is(env, r, CostExpr::scale(Rat(2), send(tau1())) + recv(tau1()) + c1() +
                                        send(tau2()));
    ok = ok && env_entry_is(env, s, send(tau1()) + recv(tau1()) + c1() + send(tau2()) +
                                        CostExpr::max(recv(tau2()), send(tau1())) + recv(tau2()));
  }
  {  // (b) pipeline closed form over the k range
    Protocol proto = pipeline();
    Role p = *proto.roles.find("p0"), q = *proto.roles.find("p1"), r = *proto.roles.find("p2");
    CostExpr tp = send(tau1());
    CostExpr tq = recv(tau1()) + c1() + send(tau2());
    CostExpr tr_ = recv(tau2()) + c2();
    for (std::size_t k = 1; k <= 6; ++k) {
      CostEnv env = global_cost(proto.body, {k});
      Rat km1(static_cast<long>(k - 1));
      ok = ok && env_entry_is(env, p, CostExpr::scale(Rat(static_cast<long>(k)), tp));
      ok = ok && env_entry_is(env, q, tp + tq + CostExpr::scale(km1, CostExpr::max(tp, tq)));
      ok = ok && env_entry_is(env, r, tp + tq + tr_ + CostExpr::scale(
                                                          km1, CostExpr::max(CostExpr::max(tp, tq), tr_)));
    }
  }
  {  // (c) ping-pong closed form over the k range
    Protocol proto = ping_pong();
    Role p = *proto.roles.find("p"), q = *proto.roles.find("q");
    CostExpr tp = send(tau1()) + recv(tau2()) + c2();
    CostExpr tq = recv(tau1()) + c1() + send(tau2());
    for (std::size_t k = 1; k <= 6; ++k) {
      CostEnv env = global_cost(proto.body, {k});
      ok = ok && env_entry_is(env, p, CostExpr::scale(Rat(static_cast<long>(k)), tp + tq));
      ok = ok && env_entry_is(env, q, send(tau1()) + tq +
                                          CostExpr::scale(Rat(static_cast<long>(k - 1)), tp + tq));
    }
  }
  {  // (d) the worked str/int trace cost
    Protocol proto = strint();
    Role p = *proto.roles.find("p"), q = *proto.roles.find("q");
    SizedType str_n = ty("str", "n"), int_i = ty("int", "i");
    CostExpr run_q = CostExpr::scale(Rat(3), CostExpr::size_of(SizeExpr::var("n")));
    Trace tr{Action::send(p, q, str_n), Action::recv(p, q, str_n), Action::run(q, run_q),
             Action::send(q, p, int_i), Action::recv(q, p, int_i),
             Action::run(p, CostExpr::constant(6))};
    CostEnv env = trace_cost(tr);
    ok = ok && env_entry_is(env, p, send(str_n) + recv(str_n) + run_q + send(int_i) +
                                        recv(int_i) + CostExpr::constant(6));
    ok = ok && env_entry_is(env, q, send(str_n) + recv(str_n) + run_q + send(int_i));
  }
  crit.finish(ok);
}

TEST_CASE("criteria 2+3: bounded-cost soundness and stepwise lemmas") {
  Criterion crit2(2, "bounded-cost soundness, whole corpus, 100 bindings", 60.0);
  bool ok = true;
  std::size_t lemma_transitions = 0;
  std::size_t lemma_violations = 0;

  for (auto& entry : acceptance_corpus()) {
    for (const auto& ks : entry.unrollings) {
      SoundnessOptions opt;
      opt.samples = 100;
      opt.seed = 42;
      opt.check_lemmas = true;
      auto report = check_soundness(entry.protocol.body, ks, opt);
      if (!report.ok) {
        ok = false;
        std::cout << "  soundness violation in " << entry.protocol.name << ": "
                  << (report.violations.empty() ? "?" : report.violations[0].kind) << std::endl;
      }
      if (!report.via_configuration) {
        lemma_transitions += report.transitions;
        for (const auto& v : report.violations)
          if (v.kind != "trace-bound") ++lemma_violations;
      }
    }
  }
  crit2.finish(ok);

  Criterion crit3(3, "stepwise lemmas at every explored transition", 1.0);
  std::cout << "  transitions with lemma checks: " << lemma_transitions << std::endl;
  crit3.finish(lemma_transitions >= 10000 && lemma_violations == 0);
}

TEST_CASE("criterion 4: LTS correspondence and deadlock-freedom") {
  Criterion crit(4, "trace equivalence + deadlock-freedom", 60.0);
  bool ok = true;

  for (auto& entry : acceptance_corpus()) {
    if (contains_split(entry.protocol.body)) continue;  // split types have no global LTS
    for (const auto& ks : entry.unrollings) {
      auto eq = trace_equiv(entry.protocol.body, ks, 14);
      auto dl = deadlock_free(entry.protocol.body, ks);
      if (!eq.ok || !dl.ok) {
        ok = false;
        std::cout << "  " << entry.protocol.name << ": equiv=" << eq.ok << " deadlock_free="
                  << dl.ok << std::endl;
      }
    }
  }
  // split corpus entries still get the deadlock check via their configurations
  for (const auto& ks : {std::vector<std::size_t>{1}, std::vector<std::size_t>{2}}) {
    auto dl = deadlock_free(dbuff().body, ks);
    ok = ok && dl.ok;
  }

  // the receive-first cyclic configuration deadlocks
  {
    Role p{0}, q{1}, r{2};
    SizedType t = ty("t", "n");
    CostExpr c = CostExpr::var("c");
    auto make = [&](Role from, Role to) {
      return LocalType::rec(
          "X", LocalType::recv(from, t, c, LocalType::send(to, t, LocalType::rec_call(0, "X"))));
    };
    Configuration cfg;
    cfg.locals.emplace(p.id, make(r, q));
    cfg.locals.emplace(q.id, make(p, r));
    cfg.locals.emplace(r.id, make(q, p));
    auto report = explore_deadlock(cfg);
    ok = ok && !report.ok && report.counterexample.has_value();
  }
  crit.finish(ok);
}

TEST_CASE("criterion 5: latency theorems and closed forms") {
  Criterion crit(5, "latency stabilization, closed forms, theorems", 30.0);
  bool ok = true;

  // stabilization by n=4 on the single-mu corpus (dbuff included)
  for (Protocol proto : {pipeline(), ping_pong(), ring3(), mw(2), mw(3), dbuff()}) {
    LatencyResult lat = latency(proto.body);
    if (lat.numeric || lat.stabilized_at > 4) {
      ok = false;
      std::cout << "  " << proto.name << ": stabilized_at=" << lat.stabilized_at
                << " numeric=" << lat.numeric << std::endl;
    }
  }

  {  // pipeline latency, exactly as printed
    Protocol proto = pipeline();
    Role p = *proto.roles.find("p0"), q = *proto.roles.find("p1"), r = *proto.roles.find("p2");
    LatencyResult lat = latency(proto.body);
    CostExpr tp = send(tau1());
    CostExpr tq = CostExpr::max(tp, recv(tau1()) + c1() + send(tau2()));
    CostExpr tr_ = CostExpr::max(tq, recv(tau2()) + c2());
    ok = ok && env_entry_is(lat.env, p, tp) && env_entry_is(lat.env, q, tq) &&
         env_entry_is(lat.env, r, tr_);
  }
  {  // ping-pong latency: Tp + Tq for both roles
    Protocol proto = ping_pong();
    LatencyResult lat = latency(proto.body);
    CostExpr total = send(tau1()) + recv(tau2()) + c2() + recv(tau1()) + c1() + send(tau2());
    ok = ok && env_entry_is(lat.env, *proto.roles.find("p"), total) &&
         env_entry_is(lat.env, *proto.roles.find("q"), total);
  }
  // master-worker relative latency for n in {2, 3}
  for (std::size_t n : {2u, 3u}) {
    Protocol proto = mw(n);
    Role m1 = *proto.roles.find("m1"), m2 = *proto.roles.find("m2");
    LatencyResult rel = latency_rel(proto.body, m2);
    Rat inv(1, static_cast<long>(n));
    CostExpr t1 = send(tau1());
    CostExpr t_over_n = CostExpr::scale(inv, recv(tau1()) + c1() + send(tau2()));
    CostExpr t2 = recv(tau2()) + c2();
    ok = ok && env_entry_is(rel.env, m1, t1);
    for (std::size_t i = 1; i <= n; ++i)
      ok = ok && env_entry_is(rel.env, *proto.roles.find("w" + std::to_string(i)),
                              CostExpr::max(t1, t_over_n));
    ok = ok && env_entry_is(rel.env, m2, CostExpr::max(CostExpr::max(t1, t_over_n), t2));
  }
  // both theorem inequalities under 100 bindings for k <= 6
  for (Protocol proto : {pipeline(), ping_pong(), ring3(), mw(2), mw(3)}) {
    LatencyTheoremOptions topt;
    topt.k_max = 6;
    topt.trace_k_max = 2;
    topt.samples = 100;
    auto report = check_latency_theorems(proto.body, topt);
    if (!report.ok) {
      ok = false;
      std::cout << "  latency theorems failed for " << proto.name << std::endl;
    }
  }
  crit.finish(ok);
}

TEST_CASE("criterion 6: asynchronous optimization") {
  Criterion crit(6, "optimization relation, confluence, cost theorem", 30.0);
  bool ok = true;

  // the worked ring optimization and the two-send example are accepted
  ok = ok && optim_leq(ring2_opt().body, ring2().body);
  Role p{0}, q1{1}, q2{2}, r{3};
  SizedType t = ty("t", "n"), t2 = ty("u", "m");
  auto tail = [&]() {
    return GlobalType::recv_act(
        q1, p, t, CostExpr::var("c1"),
        GlobalType::recv_act(q2, p, t, CostExpr::var("c2"),
                             GlobalType::send_act(q2, r, t2,
                                                  GlobalType::recv_act(r, q2, t2, czero(),
                                                                       GlobalType::end()))));
  };
  GlobalType g1 = GlobalType::send_act(p, q1, t, GlobalType::send_act(p, q2, t, tail()));
  GlobalType g2 = GlobalType::send_act(p, q2, t, GlobalType::send_act(p, q1, t, tail()));
  ok = ok && optim_leq(g1, g2);

  // idempotence and order-independence over 50 seeded orders per protocol
  std::vector<GlobalType> protos = {ring2().body, ring2_opt().body, ring3().body,
                                    ring3_opt().body, dbuff().body, g1, g2,
                                    scatter_gather().body, branching_rec().body};
  for (const GlobalType& g : protos) {
    GlobalType reference = normal_form(g);
    if (!(normal_form(reference) == reference)) ok = false;
    for (std::uint64_t seed = 0; seed < 50 && ok; ++seed) {
      Prng rng(seed);
      if (!(normal_form_random(g, rng) == reference)) {
        ok = false;
        std::cout << "  order-dependent normal form at seed " << seed << std::endl;
      }
    }
  }

  // accepted pairs: with send costs forced to zero, cost(G1) <= cost(G2)
  std::vector<std::pair<GlobalType, GlobalType>> pairs = {
      {ring2_opt().body, ring2().body}, {ring3_opt().body, ring3().body}, {g1, g2}};
  for (auto& [a, b] : pairs) {
    std::vector<std::size_t> ks(binder_count(a), 2);
    auto report = check_opt_cost(a, b, ks, 100, 42);
    if (!report.ok()) {
      ok = false;
      std::cout << "  optimization cost bound failed" << std::endl;
    }
  }

  {  // the printed optimized-ring cost, exactly
    Protocol opt = ring2_opt();
    CostEnv env = global_cost_ext(opt.body, {});
    CostExpr gate = CostExpr::max(send(tau1()), send(tau2()));
    ok = ok && env_entry_is(env, *opt.roles.find("p"), gate + recv(tau2()) + c2());
    ok = ok && env_entry_is(env, *opt.roles.find("q"), gate + recv(tau1()) + c1());
  }
  crit.finish(ok);
}

TEST_CASE("criterion 7: deployment degradation and core monotonicity") {
  Criterion crit(7, "resource-bounded cost degradation", 10.0);
  bool ok = true;

  for (auto& entry : acceptance_corpus()) {
    const GlobalType& g = entry.protocol.body;
    if (contains_split(g)) continue;  // resource rule covers the source grammar
    HardwareSpec hw;
    Mapping m;
    std::vector<NodeId> nodes;
    for (Role role : roles_of(g)) {
      NodeId n = "node" + std::to_string(role.id);
      hw.nodes[n] = 1;
      m.pin[role.id] = n;
      nodes.push_back(n);
    }
    for (const NodeId& a : nodes)
      for (const NodeId& b : nodes) hw.latency[{a, b}] = LatencyFn{{{Rat(0), Rat(0)}}, {}};

    std::vector<std::size_t> ks(binder_count(g), 2);
    CostEnv symbolic = global_cost(g, ks);
    std::set<Atom> atoms;
    collect_atoms(symbolic, atoms);
    for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
      Prng rng(seed);
      Binding b = random_binding(atoms, rng, 50);
      auto concrete = resource_cost(g, ks, hw, m, b);
      for (Role role : roles_of(g)) {
        if (!(concrete.at(role.id) == evaluate(symbolic.get(role), b))) {
          ok = false;
          std::cout << "  degradation mismatch in " << entry.protocol.name << " role r"
                    << role.id << std::endl;
        }
      }
    }
  }

  {  // master-worker completion times never improve when cores are removed
    Protocol proto = mw(3);
    std::set<Atom> atoms;
    collect_atoms(global_cost(proto.body, {2}), atoms);
    Prng rng(5);
    Binding b = random_binding(atoms, rng, 50);
    Mapping m;
    m.pin[0] = "master";
    m.pin[1] = "master";
    for (std::size_t w = 0; w < 3; ++w) m.pin[2 + w] = "workers";
    std::map<std::uint32_t, Rat> previous;
    for (std::size_t cores = 1; cores <= 5; ++cores) {
      HardwareSpec hw;
      hw.nodes["master"] = 2;
      hw.nodes["workers"] = cores;
      for (const char* a : {"master", "workers"})
        for (const char* c : {"master", "workers"})
          hw.latency[{a, c}] = LatencyFn{{{Rat(0), Rat(0)}}, {}};
      auto cost = resource_cost(proto.body, {2}, hw, m, b);
      if (!previous.empty())
        for (auto& [id, t_cost] : cost)
          if (t_cost > previous.at(id)) ok = false;
      previous = cost;
    }
  }
  crit.finish(ok);
}

TEST_CASE("criterion 8: frontend round-trips and generator well-formedness") {
  Criterion crit(8, "parse/print identity + generators", 5.0);
  bool ok = true;

  std::vector<Protocol> protos = {scatter_gather(), pipeline(), ping_pong(), ring3(),
                                  ring3_opt(),      ring2(),    ring2_opt(), mw(2),
                                  mw(3),            mergesort2(), dbuff(),   branching_rec(),
                                  strint()};
  for (const Protocol& proto : protos) {
    Protocol round = parse_protocol(print_protocol(proto));
    if (!(round.body == proto.body)) {
      ok = false;
      std::cout << "  round-trip failed for " << proto.name << std::endl;
    }
  }

  SizedType t = tau1();
  CostExpr c = c1();
  for (std::size_t n = 2; n <= 8 && ok; ++n) {
    std::vector<std::pair<SizedType, CostExpr>> stages(n, {t, c});
    ok = ok && well_formed(pipe(stages).body).ok;
    ok = ok && well_formed(ring(n, t, c).body).ok;
    ok = ok && well_formed(master_worker(n, t, c, tau2(), c2()).body).ok;
    ok = ok && well_formed(master_worker_choice(n, t, c, tau2(), c2()).body).ok;
  }
  for (std::size_t n = 1; n <= 3; ++n) ok = ok && well_formed(butterfly(n, t, c).body).ok;
  crit.finish(ok);
}
