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

#include "campa/algebra.hpp"

#include <vector>

#include "catch_amalgamated.hpp"

using namespace campa;

namespace {

SizedType ty(const std::string& base, const std::string& size_var) {
  return SizedType{base, SizeExpr::var(size_var), {}};
}

/// Small random Sub-free expressions over a fixed atom pool.
CostExpr random_expr(Prng& rng, int depth) {
  if (depth == 0 || rng.below(5) == 0) {
    switch (rng.below(5)) {
      case 0: return CostExpr::constant(rng.rat(9));
      case 1: return CostExpr::var("a");
      case 2: return CostExpr::var("b");
      case 3: return CostExpr::send(ty("str", "n"));
      default: return CostExpr::size_of(SizeExpr::var("n"));
    }
  }
  switch (rng.below(3)) {
    case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1: return CostExpr::max(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default: return CostExpr::scale(Rat(static_cast<long>(rng.below(4))), random_expr(rng, depth - 1));
  }
}

std::vector<Binding> bindings_for(const CostExpr& e, std::size_t count, std::uint64_t seed) {
  std::set<Atom> atoms;
  collect_atoms(e, atoms);
  return sample_bindings(atoms, count, seed);
}

}  // namespace

TEST_CASE("simplex feasibility basics") {
  // x >= 2 with x >= 0: feasible.
  CHECK(feasible_geq({{Rat(1)}}, {Rat(2)}));
  // x >= 2 and -x >= -1: infeasible.
  CHECK_FALSE(feasible_geq({{Rat(1)}, {Rat(-1)}}, {Rat(2), Rat(-1)}));
  // -x >= 1, x >= 0: infeasible.
  CHECK_FALSE(feasible_geq({{Rat(-1)}}, {Rat(1)}));
  // x + y >= 1, -x >= -10: feasible.
  CHECK(feasible_geq({{Rat(1), Rat(1)}, {Rat(-1), Rat(0)}}, {Rat(1), Rat(-10)}));
}

TEST_CASE("normalize drops dominated and distributes") {
  CostExpr c = CostExpr::var("c");
  // max(0, c) -> {c}: the zero term is dominated by the nonnegative atom.
  NormalForm nf = normalize(CostExpr::max(CostExpr::constant(0), c));
  CHECK(nf == normalize(c));

  // csend(t1) + max(crecv(t2), csend(t1)) == max(csend t1 + crecv t2, 2 csend t1)
  CostExpr s1 = CostExpr::send(ty("t1", "n"));
  CostExpr r2 = CostExpr::recv(ty("t2", "m"));
  CostExpr lhs = s1 + CostExpr::max(r2, s1);
  CostExpr rhs = CostExpr::max(s1 + r2, CostExpr::scale(Rat(2), s1));
  CHECK(normalize(lhs) == normalize(rhs));
  // and by evaluation at 20 random rational points
  auto bs = bindings_for(lhs, 20, 7);
  for (const auto& b : bs) CHECK(evaluate(lhs, b) == evaluate(rhs, b));

  // 2 * max(a, b) == max(2a, 2b)
  CostExpr a = CostExpr::var("a"), b = CostExpr::var("b");
  CHECK(normalize(CostExpr::scale(Rat(2), CostExpr::max(a, b))) ==
        normalize(CostExpr::max(CostExpr::scale(Rat(2), a), CostExpr::scale(Rat(2), b))));
}

TEST_CASE("normalize is canonical on hull-redundant terms") {
  CostExpr x = CostExpr::var("x"), y = CostExpr::var("y");
  // max(x,y) + max(x,y) distributes to {2x, x+y, 2y}; the middle term lies
  // under the hull of the outer two and must be gone.
  CostExpr m = CostExpr::max(x, y);
  NormalForm left = normalize(m + m);
  NormalForm right = normalize(CostExpr::scale(Rat(2), m));
  CHECK(left == right);
  CHECK(left.terms.size() == 2);
}

TEST_CASE("evaluate matches the worked trace-cost instantiation") {
  CHECK(evaluate(CostExpr::constant(5), Binding{}) == Rat(5));

  // q's entry of the str/int example: csend(str^n)+crecv(str^n)+n*3+csend(int^i)
  // with csend(str^n)=2, crecv(str^n)=1, n=4, csend(int^i)=1 gives 16.
  SizedType str_n = ty("str", "n"), int_i = ty("int", "i");
  CostExpr q = CostExpr::send(str_n) + CostExpr::recv(str_n) +
               CostExpr::scale(Rat(3), CostExpr::size_of(SizeExpr::var("n"))) +
               CostExpr::send(int_i);
  Binding b;
  b.sizes["n"] = Rat(4);
  b.sizes["i"] = Rat(7);
  b.comm[send_atom(str_n).key()] = Rat(2);
  b.comm[recv_atom(str_n).key()] = Rat(1);
  b.comm[send_atom(int_i).key()] = Rat(1);
  CHECK(evaluate(q, b) == Rat(16));

  CHECK(evaluate(CostExpr::max(CostExpr::constant(3), CostExpr::constant(2) + CostExpr::constant(2)),
                 Binding{}) == Rat(4));
}

TEST_CASE("normalize preserves evaluation on random expressions") {
  Prng rng(42);
  for (int i = 0; i < 40; ++i) {
    CostExpr e = random_expr(rng, 4);
    auto bs = bindings_for(e, 100, 1000 + static_cast<std::uint64_t>(i));
    NormalForm nf = normalize(e);
    for (const auto& b : bs) CHECK(evaluate(nf, b) == evaluate(e, b));
    // idempotence through denormalize
    CHECK(normalize(denormalize(nf)) == nf);
  }
}

TEST_CASE("env_max basics and properties") {
  Role p{0}, q{1};
  CostExpr c = CostExpr::var("c");

  CostEnv empty;
  CostEnv pc;
  pc.set(p, normalize(c));
  CostEnv m = env_max(empty, pc);
  CHECK(canonical(m.get(p)) == normalize(c));

  CostEnv pa, pb;
  pa.set(p, normalize(CostExpr::var("a")));
  pb.set(p, normalize(CostExpr::var("b")));
  CHECK(canonical(env_max(pa, pb).get(p)) ==
        normalize(CostExpr::max(CostExpr::var("a"), CostExpr::var("b"))));

  // idempotent / commutative / associative on random envs
  Prng rng(17);
  for (int i = 0; i < 10; ++i) {
    CostEnv e1, e2, e3;
    e1.set(p, normalize(random_expr(rng, 3)));
    e1.set(q, normalize(random_expr(rng, 3)));
    e2.set(p, normalize(random_expr(rng, 3)));
    e3.set(q, normalize(random_expr(rng, 3)));
    CHECK(env_max(e1, e1).canonicalized() == e1.canonicalized());
    CHECK(env_max(e1, e2).canonicalized() == env_max(e2, e1).canonicalized());
    CHECK(env_max(env_max(e1, e2), e3).canonicalized() ==
          env_max(e1, env_max(e2, e3)).canonicalized());
  }
}

TEST_CASE("env_add_after implements the gated update") {
  Role p{0};
  SizedType tau = ty("t", "n");

  CostEnv empty;
  CostEnv r1 = env_add_after(empty, CostExpr::constant(0), p, CostExpr::send(tau));
  CHECK(canonical(r1.get(p)) == normalize(CostExpr::send(tau)));

  CostEnv t5;
  t5.set(p, NormalForm::constant(5));
  CHECK(env_add_after(t5, CostExpr::constant(7), p, CostExpr::constant(1)).get(p) ==
        NormalForm::constant(8));

  CostEnv t9;
  t9.set(p, NormalForm::constant(9));
  CHECK(env_add_after(t9, CostExpr::constant(7), p, CostExpr::constant(1)).get(p) ==
        NormalForm::constant(10));

  // env_add_after(t, 0, r, 0) only materializes the entry
  Prng rng(3);
  CostEnv t;
  t.set(p, normalize(random_expr(rng, 3)));
  CostEnv u = env_add_after(t, CostExpr::constant(0), p, CostExpr::constant(0));
  CHECK(canonical(u.get(p)) == canonical(t.get(p)));
}

TEST_CASE("env_leq: sampled comparison with symbolic shortcut") {
  Role p{0};
  CostExpr a = CostExpr::var("a"), b = CostExpr::var("b");

  CostEnv ea, eab, emax;
  ea.set(p, normalize(a));
  eab.set(p, normalize(a + b));
  emax.set(p, normalize(CostExpr::max(a, b)));

  std::set<Atom> atoms;
  collect_atoms(eab, atoms);
  auto samples = sample_bindings(atoms, 100, 42);

  auto refl = env_leq(eab, eab, samples);
  CHECK(refl.ok);
  CHECK(refl.proved);

  auto grow = env_leq(ea, eab, samples);
  CHECK(grow.ok);
  CHECK(grow.proved);

  auto mx = env_leq(emax, eab, samples);
  CHECK(mx.ok);
  CHECK(mx.proved);

  auto back = env_leq(eab, emax, samples);
  CHECK_FALSE(back.ok);

  // preorder on fixed samples: reflexive + transitive spot check
  Prng rng(5);
  for (int i = 0; i < 10; ++i) {
    CostEnv x, y, z;
    CostExpr ex = random_expr(rng, 3);
    x.set(p, normalize(ex));
    y.set(p, normalize(ex + random_expr(rng, 2)));
    z.set(p, nf_add(y.get(p), normalize(random_expr(rng, 2))));
    std::set<Atom> at;
    collect_atoms(x, at);
    collect_atoms(y, at);
    collect_atoms(z, at);
    auto ss = sample_bindings(at, 50, 9 + static_cast<std::uint64_t>(i));
    CHECK(env_leq(x, x, ss).ok);
    if (env_leq(x, y, ss).ok && env_leq(y, z, ss).ok) CHECK(env_leq(x, z, ss).ok);
  }
}

TEST_CASE("nf_leq_proved is exact for max-plus") {
  CostExpr a = CostExpr::var("a"), b = CostExpr::var("b");
  CHECK(nf_leq_proved(normalize(CostExpr::max(a, b)), normalize(a + b)));
  CHECK_FALSE(nf_leq_proved(normalize(a + b), normalize(CostExpr::max(a, b))));
  // 0.5a + 0.5b <= max(a, b) needs the hull test, not pointwise domination
  CostExpr mid = CostExpr::scale(Rat(1, 2), a) + CostExpr::scale(Rat(1, 2), b);
  CHECK(nf_leq_proved(normalize(mid), normalize(CostExpr::max(a, b))));
}
