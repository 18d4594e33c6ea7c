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

// The protocol corpus shared by the unit and acceptance suites.

#ifndef CAMPA_TESTS_SUPPORT_HPP_
#define CAMPA_TESTS_SUPPORT_HPP_

#include <string>
#include <vector>

#include "campa/builders.hpp"
#include "campa/core.hpp"
#include "campa/prng.hpp"
#include "campa/projection.hpp"

namespace campa::corpus {

inline SizedType ty(const std::string& base, const std::string& size_var) {
  return SizedType{base, SizeExpr::var(size_var), {}};
}

inline SizedType ty1(const std::string& base) {
  return SizedType{base, SizeExpr::constant(1), {}};
}

inline SizedType tau1() { return ty("t1", "n"); }
inline SizedType tau2() { return ty("t2", "m"); }
inline CostExpr c1() { return CostExpr::var("c1"); }
inline CostExpr c2() { return CostExpr::var("c2"); }
inline CostExpr czero() { return CostExpr::constant(0); }

/// p scatters tau1 to q and r (computation c1), s gathers tau2.
inline Protocol scatter_gather() {
  Protocol p;
  p.name = "scatter_gather";
  Role rp = p.roles.declare("p");
  Role rq = p.roles.declare("q");
  Role rr = p.roles.declare("r");
  Role rs = p.roles.declare("s");
  p.body = GlobalType::msg(
      rp, rq, tau1(), c1(),
      GlobalType::msg(rp, rr, tau1(), c1(),
                      GlobalType::msg(rq, rs, tau2(), czero(),
                                      GlobalType::msg(rr, rs, tau2(), czero(), GlobalType::end()))));
  return p;
}

/// The overview's two-master scatter/gather (M1 scatters, M2 gathers).
inline Protocol overview_scatter_gather() {
  Protocol p;
  p.name = "overview_sg";
  Role m1 = p.roles.declare("M1");
  Role m2 = p.roles.declare("M2");
  Role w1 = p.roles.declare("W1");
  Role w2 = p.roles.declare("W2");
  p.body = GlobalType::msg(
      m1, w1, tau1(), c1(),
      GlobalType::msg(m1, w2, tau1(), c1(),
                      GlobalType::msg(w1, m2, tau2(), czero(),
                                      GlobalType::msg(w2, m2, tau2(), czero(), GlobalType::end()))));
  return p;
}

/// rec X. p -> q <t1@c1>. q -> r <t2@c2>. X
inline Protocol pipeline() { return pipe({{tau1(), c1()}, {tau2(), c2()}}); }

/// rec X. p -> q <t1@c1>. q -> p <t2@c2>. X
inline Protocol ping_pong() {
  Protocol p;
  p.name = "ping_pong";
  Role rp = p.roles.declare("p");
  Role rq = p.roles.declare("q");
  p.body = GlobalType::rec(
      "X", GlobalType::msg(rp, rq, tau1(), c1(),
                           GlobalType::msg(rq, rp, tau2(), c2(), GlobalType::rec_call(0, "X"))));
  return p;
}

inline Protocol ring3() { return ring(3, ty("t", "n"), CostExpr::var("c")); }

/// Ring of three with sends hoisted ahead of the receives.
inline Protocol ring3_opt() {
  Protocol p;
  p.name = "ring3_opt";
  Role p0 = p.roles.declare("p0");
  Role p1 = p.roles.declare("p1");
  Role p2 = p.roles.declare("p2");
  SizedType t = ty("t", "n");
  CostExpr c = CostExpr::var("c");
  p.body = GlobalType::rec(
      "X",
      GlobalType::send_act(
          p0, p1, t,
          GlobalType::send_act(
              p1, p2, t,
              GlobalType::send_act(
                  p2, p0, t,
                  GlobalType::recv_act(
                      p1, p0, t, c,
                      GlobalType::recv_act(
                          p2, p1, t, c,
                          GlobalType::recv_act(p0, p2, t, c, GlobalType::rec_call(0, "X"))))))));
  return p;
}

/// Receive-first ring: every stage waits before sending. Not an optimization
/// of the ring; its configuration deadlocks immediately.
inline Protocol ring3_bad() {
  Protocol p;
  p.name = "ring3_bad";
  Role p0 = p.roles.declare("p0");
  Role p1 = p.roles.declare("p1");
  Role p2 = p.roles.declare("p2");
  SizedType t = ty("t", "n");
  CostExpr c = CostExpr::var("c");
  p.body = GlobalType::rec(
      "X",
      GlobalType::recv_act(
          p0, p2, t, c,
          GlobalType::send_act(
              p0, p1, t,
              GlobalType::recv_act(
                  p1, p0, t, c,
                  GlobalType::send_act(
                      p1, p2, t,
                      GlobalType::recv_act(p2, p1, t, c,
                                           GlobalType::send_act(p2, p0, t,
                                                                GlobalType::rec_call(0, "X"))))))));
  return p;
}

/// One iteration of the two-party ring (message each way).
inline Protocol ring2() {
  Protocol p;
  p.name = "ring2";
  Role rp = p.roles.declare("p");
  Role rq = p.roles.declare("q");
  p.body = GlobalType::msg(rp, rq, tau1(), c1(),
                           GlobalType::msg(rq, rp, tau2(), c2(), GlobalType::end()));
  return p;
}

/// Its asynchronous optimization: both sends first, then both receives.
inline Protocol ring2_opt() {
  Protocol p;
  p.name = "ring2_opt";
  Role rp = p.roles.declare("p");
  Role rq = p.roles.declare("q");
  p.body = GlobalType::send_act(
      rp, rq, tau1(),
      GlobalType::send_act(
          rq, rp, tau2(),
          GlobalType::recv_act(rq, rp, tau1(), c1(),
                               GlobalType::recv_act(rp, rq, tau2(), c2(), GlobalType::end()))));
  return p;
}

inline Protocol mw(std::size_t n) {
  return master_worker(n, tau1(), c1(), tau2(), c2());
}

/// Divide and conquer mergesort at depth 2: seven nodes, split then merge.
inline Protocol mergesort2() {
  Protocol p;
  p.name = "mergesort2";
  std::vector<Role> n;
  for (int i = 0; i < 7; ++i) n.push_back(p.roles.declare("n" + std::to_string(i)));
  SizedType whole = ty("task", "n");
  SizedType half = ty("task", "h");
  SizedType part = ty("res", "h");
  SizedType full = ty("res", "n");
  CostExpr csort = CostExpr::var("csort");
  CostExpr cmerge = CostExpr::var("cmerge");
  GlobalType g = GlobalType::end();
  // merge phase (built back to front)
  g = GlobalType::msg(n[2], n[0], full, cmerge, g);
  g = GlobalType::msg(n[1], n[0], full, cmerge, g);
  g = GlobalType::msg(n[6], n[2], part, cmerge, g);
  g = GlobalType::msg(n[5], n[2], part, cmerge, g);
  g = GlobalType::msg(n[4], n[1], part, cmerge, g);
  g = GlobalType::msg(n[3], n[1], part, cmerge, g);
  // split phase; the leaves pay the sort cost on receipt
  g = GlobalType::msg(n[2], n[6], half, csort, g);
  g = GlobalType::msg(n[2], n[5], half, csort, g);
  g = GlobalType::msg(n[1], n[4], half, csort, g);
  g = GlobalType::msg(n[1], n[3], half, csort, g);
  g = GlobalType::msg(n[0], n[2], whole, czero(), g);
  g = GlobalType::msg(n[0], n[1], whole, czero(), g);
  p.body = g;
  return p;
}

/// Double buffering: source p, sink q, service r with buffers r1/r2.
inline Protocol dbuff() {
  Protocol p;
  p.name = "dbuff";
  Role rp = p.roles.declare("p");
  Role rq = p.roles.declare("q");
  Role rr = p.roles.declare("r");
  // the two buffers' signals share one type; FIFO order keeps them apart
  SizedType r1 = ty1("sig");
  SizedType r2 = ty1("sig");
  SizedType s1 = ty("buf", "n");
  SizedType s2 = ty("buf", "n");
  SizedType t1 = ty1("rdy");
  SizedType u1 = ty("out", "n");
  CostExpr copy = CostExpr::var("ccopy");
  CostExpr drain = CostExpr::var("cdrain");

  GlobalType body = GlobalType::rec_call(0, "X");
  body = GlobalType::send_act(rr, rp, r2, body);
  body = GlobalType::msg(rr, rq, u1, drain, body);
  body = GlobalType::msg(rq, rr, t1, czero(), body);
  body = GlobalType::msg(rp, rr, s2, copy, body);
  body = GlobalType::recv_act(rp, rr, r2, czero(), body);
  body = GlobalType::send_act(rr, rp, r1, body);
  body = GlobalType::msg(rr, rq, u1, drain, body);
  body = GlobalType::msg(rq, rr, t1, czero(), body);
  body = GlobalType::msg(rp, rr, s1, copy, body);
  body = GlobalType::recv_act(rp, rr, r1, czero(), body);
  p.body = GlobalType::send_act(rr, rp, r1,
                                GlobalType::send_act(rr, rp, r2, GlobalType::rec("X", body)));
  return p;
}

/// The synchronous source the double-buffering protocol optimizes: the
/// buffer-ready signals are sent in iteration order instead of ahead of
/// time. Relating it to dbuff() needs recursion unrolling, which the
/// optimization relation deliberately excludes.
inline Protocol dbuff_source() {
  Protocol p;
  p.name = "dbuff_source";
  Role rp = p.roles.declare("p");
  Role rq = p.roles.declare("q");
  Role rr = p.roles.declare("r");
  SizedType sig = ty1("sig");
  SizedType buf = ty("buf", "n");
  SizedType rdy = ty1("rdy");
  SizedType out = ty("out", "n");
  CostExpr copy = CostExpr::var("ccopy");
  CostExpr drain = CostExpr::var("cdrain");

  GlobalType body = GlobalType::rec_call(0, "X");
  body = GlobalType::msg(rr, rq, out, drain, body);
  body = GlobalType::msg(rq, rr, rdy, czero(), body);
  body = GlobalType::msg(rp, rr, buf, copy, body);
  body = GlobalType::msg(rr, rp, sig, czero(), body);
  body = GlobalType::msg(rr, rq, out, drain, body);
  body = GlobalType::msg(rq, rr, rdy, czero(), body);
  body = GlobalType::msg(rp, rr, buf, copy, body);
  body = GlobalType::msg(rr, rp, sig, czero(), body);
  p.body = GlobalType::rec("X", body);
  return p;
}

/// The branching recursion example used for projection: labels drive r's
/// merged view.
inline Protocol branching_rec() {
  Protocol proto;
  proto.name = "branching_rec";
  Role p = proto.roles.declare("p");
  Role q = proto.roles.declare("q");
  Role r = proto.roles.declare("r");
  GlobalType arm1 = GlobalType::branch(
      q, r, {{Label{"l2"}, GlobalType::branch(p, r, {{Label{"l3"}, GlobalType::rec_call(0, "X")}})}});
  GlobalType arm2 = GlobalType::branch(
      q, r, {{Label{"l5"}, GlobalType::branch(p, r, {{Label{"l6"}, GlobalType::end()}})}});
  proto.body =
      GlobalType::rec("X", GlobalType::branch(p, q, {{Label{"l1"}, arm1}, {Label{"l4"}, arm2}}));
  return proto;
}

/// str/int exchange with size-driven computation cost.
inline Protocol strint() {
  Protocol p;
  p.name = "strint";
  Role rp = p.roles.declare("p");
  Role rq = p.roles.declare("q");
  SizedType str_n = ty("str", "n");
  SizedType int_i = ty("int", "i");
  p.body = GlobalType::msg(
      rp, rq, str_n, CostExpr::scale(Rat(3), CostExpr::size_of(SizeExpr::var("n"))),
      GlobalType::msg(rq, rp, int_i, CostExpr::constant(6), GlobalType::end()));
  return p;
}

/// Random well-formed protocols for property tests: a few roles, messages,
/// choices, and at most one guarded recursion. Regenerates until projection
/// succeeds on every role.
inline Protocol random_protocol(Prng& rng, std::size_t max_depth = 5) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Protocol p;
    p.name = "random";
    std::size_t role_count = 2 + rng.below(3);
    for (std::size_t i = 0; i < role_count; ++i) p.roles.declare("r" + std::to_string(i));
    bool in_rec = false;
    int label_counter = 0;

    auto pick_pair = [&]() {
      std::uint32_t a = static_cast<std::uint32_t>(rng.below(role_count));
      std::uint32_t b = static_cast<std::uint32_t>(rng.below(role_count - 1));
      if (b >= a) ++b;
      return std::make_pair(Role{a}, Role{b});
    };
    auto payload = [&]() {
      return SizedType{"t" + std::to_string(rng.below(3)), SizeExpr::var("n"), {}};
    };
    auto cost = [&]() {
      switch (rng.below(3)) {
        case 0: return CostExpr::constant(static_cast<long>(rng.below(5)));
        case 1: return CostExpr::var("c" + std::to_string(rng.below(2)));
        default: return CostExpr::constant(0);
      }
    };

    auto gen = [&](std::size_t depth, bool guard_seen, const auto& self) -> GlobalType {
      if (depth >= max_depth) return in_rec && guard_seen && rng.below(2) == 0
                                         ? GlobalType::rec_call(0, "X")
                                         : GlobalType::end();
      switch (rng.below(6)) {
        case 0:
          if (depth > 0) return GlobalType::end();
          [[fallthrough]];
        case 1:
        case 2: {
          auto [a, b] = pick_pair();
          return GlobalType::msg(a, b, payload(), cost(), self(depth + 1, true, self));
        }
        case 3: {
          auto [a, b] = pick_pair();
          GlobalType::Arms arms;
          std::size_t n = 2 + rng.below(2);
          for (std::size_t i = 0; i < n; ++i)
            arms.push_back({Label{"l" + std::to_string(label_counter++)},
                            self(depth + 1, true, self)});
          return GlobalType::branch(a, b, std::move(arms));
        }
        case 4:
          if (!in_rec && depth + 2 < max_depth) {
            in_rec = true;
            auto [a, b] = pick_pair();
            GlobalType body =
                GlobalType::msg(a, b, payload(), cost(), self(depth + 2, true, self));
            in_rec = false;
            if (!detail::occurs(body, 0)) return body;  // vacuous binder: keep the body
            return GlobalType::rec("X", body);
          }
          [[fallthrough]];
        default: {
          if (in_rec && guard_seen && rng.below(3) == 0) return GlobalType::rec_call(0, "X");
          auto [a, b] = pick_pair();
          return GlobalType::msg(a, b, payload(), cost(), self(depth + 1, true, self));
        }
      }
    };
    p.body = gen(0, false, gen);
    if (!guarded(p.body)) continue;
    if (!well_formed(p.body).ok) continue;
    if (roles_of(p.body).empty()) continue;
    return p;
  }
  throw Error("could not generate a well-formed protocol");
}

/// Every standard (non-split) corpus protocol with its unrolling vectors.
struct CorpusEntry {
  Protocol protocol;
  std::vector<std::vector<std::size_t>> unrollings;
};

inline std::vector<CorpusEntry> standard_corpus() {
  std::vector<CorpusEntry> out;
  out.push_back({scatter_gather(), {{}}});
  out.push_back({pipeline(), {{1}, {2}}});
  out.push_back({ping_pong(), {{1}, {2}}});
  out.push_back({ring3(), {{1}, {2}}});
  out.push_back({mw(2), {{1}, {2}}});
  out.push_back({mw(3), {{1}, {2}}});
  out.push_back({mergesort2(), {{}}});
  return out;
}

}  // namespace campa::corpus

#endif  // CAMPA_TESTS_SUPPORT_HPP_
