#include <doctest.h>

#include <bit>
#include <map>

#include "isynth/bdd.hpp"
#include "isynth/errors.hpp"
#include "isynth/parser.hpp"
#include "oracles.hpp"

using namespace isynth;
using bdd::Manager;
using bdd::Ref;
using bdd::Var;

namespace {

Ref build(Manager& m, const oracle::BoolExpr& e) {
  using Op = oracle::BoolExpr::Op;
  switch (e.op) {
    case Op::Const: return m.constant(e.value != 0);
    case Op::Var: return m.var(e.value);
    case Op::Not: return m.not_(build(m, e.kids[0]));
    case Op::And: return m.and_(build(m, e.kids[0]), build(m, e.kids[1]));
    case Op::Or: return m.or_(build(m, e.kids[0]), build(m, e.kids[1]));
    case Op::Xor: return m.xor_(build(m, e.kids[0]), build(m, e.kids[1]));
    case Op::Ite: return m.ite(build(m, e.kids[0]), build(m, e.kids[1]), build(m, e.kids[2]));
  }
  return m.zero();
}

// Structural invariants of the reachable node graph: reduced and ordered.
void check_reduced(Manager& m, Ref f) {
  if (f.is_const()) return;
  CHECK(m.low(f) != m.high(f));
  for (Ref c : {m.low(f), m.high(f)}) {
    if (!c.is_const()) CHECK(m.top_var(c) > m.top_var(f));
    check_reduced(m, c);
  }
}

}  // namespace

TEST_CASE("bdd: basic connectives") {
  Manager m;
  const Var a = 0, b = 1;
  CHECK(m.and_(m.var(a), m.not_(m.var(a))).is_false());
  CHECK(m.ite(m.var(a), m.one(), m.zero()) == m.var(a));
  CHECK(m.eval(m.or_(m.var(a), m.var(b)), Assignment{b}));
  CHECK_FALSE(m.eval(m.or_(m.var(a), m.var(b)), Assignment{}));
  CHECK(m.nvar(a) == m.not_(m.var(a)));
  CHECK(m.xor_(m.var(a), m.var(a)).is_false());
  CHECK(m.or_(m.var(b), m.var(a)) == m.or_(m.var(a), m.var(b)));
}

TEST_CASE("bdd: quantification") {
  Manager m;
  const Var a = 0, b = 1;
  const std::vector<Var> va{a};
  CHECK(m.exists(m.and_(m.var(a), m.var(b)), va) == m.var(b));
  CHECK(m.forall(m.or_(m.var(a), m.var(b)), va) == m.var(b));
  CHECK(m.forall(m.var(a), va).is_false());
  CHECK(m.exists(m.var(a), va).is_true());
  CHECK(m.restrict(m.and_(m.var(a), m.var(b)), a, true) == m.var(b));
  CHECK(m.restrict(m.and_(m.var(a), m.var(b)), a, false).is_false());
}

TEST_CASE("bdd: any_sat") {
  Manager m;
  const Var a = 0, b = 1, c = 2;
  CHECK_FALSE(m.any_sat(m.zero()).has_value());
  CHECK(m.any_sat(m.one()) == Assignment{});
  CHECK(m.any_sat(m.or_(m.var(b), m.var(a))) == Assignment{a});
  CHECK(m.any_sat(m.and_(m.var(c), m.nvar(a))) == Assignment{c});
  auto f = m.xor_(m.var(a), m.var(b));
  CHECK(m.any_sat(f) == m.any_sat(f));
}

TEST_CASE("bdd: from_prop") {
  Vocabulary v;
  ltlf::FormulaFactory ff;
  const auto a = v.intern("a"), b = v.intern("b");
  Manager m;
  auto f = m.from_prop(parse_goal("a & !b", v, ff));
  CHECK(m.eval(f, Assignment{a}));
  CHECK_FALSE(m.eval(f, Assignment{a, b}));
  CHECK(f == m.and_(m.var(a), m.nvar(b)));
  CHECK(m.from_prop(ff.top()).is_true());
  CHECK_THROWS_AS(m.from_prop(parse_goal("X a", v, ff)), NonPropositional);
  CHECK_THROWS_AS(m.from_prop(parse_goal("a U b", v, ff)), NonPropositional);
}

TEST_CASE("bdd: operands from different managers are rejected") {
  Manager m1, m2;
  CHECK_THROWS_AS(m1.and_(m1.var(0), m2.var(0)), ManagerMismatch);
  CHECK_THROWS_AS(m1.not_(m2.var(1)), ManagerMismatch);
}

TEST_CASE("bdd: support, cube, dag_size, cubes") {
  Manager m;
  auto f = m.and_(m.var(1), m.or_(m.var(3), m.nvar(0)));
  CHECK(m.support(f) == std::vector<Var>{0, 1, 3});
  const std::vector<Var> vars{0, 2};
  auto cube = m.cube(Assignment{2}, vars);
  CHECK(cube == m.and_(m.nvar(0), m.var(2)));
  CHECK(m.dag_size(m.one()) == 1);
  CHECK(m.dag_size(m.var(0)) == 3);
  const std::vector<Var> all{0, 1, 2, 3};
  auto cs = m.cubes(f, all);
  CHECK(!cs.empty());
  CHECK(m.cubes(m.zero(), all).empty());
}

TEST_CASE("property: truth-table equivalence, canonicity and reducedness") {
  Manager m;
  std::mt19937_64 rng(99);
  std::map<std::uint32_t, Ref> by_table;
  for (int i = 0; i < 5000; ++i) {
    auto e = oracle::BoolExpr::random(rng, 4, 4);
    Ref f = build(m, e);
    const auto tt = e.truth_table(4);
    for (std::uint32_t bits = 0; bits < 16; ++bits)
      REQUIRE(m.eval(f, oracle::bits_to_assignment(bits, 4)) == (tt >> bits & 1u));
    auto [it, fresh] = by_table.try_emplace(tt, f);
    REQUIRE(it->second == f);
    check_reduced(m, f);

    // any_sat returns the smallest model in the sorted-true-atoms order among
    // those with every don't-care variable false. Support read off the table.
    std::uint32_t support = 0;
    for (std::uint32_t v = 0; v < 4; ++v)
      for (std::uint32_t bits = 0; bits < 16; ++bits)
        if ((tt >> bits & 1u) != (tt >> (bits ^ (1u << v)) & 1u)) support |= 1u << v;
    REQUIRE(m.support(f).size() == static_cast<std::size_t>(std::popcount(support)));
    std::optional<Assignment> best;
    for (std::uint32_t bits = 0; bits < 16; ++bits) {
      if (!(tt >> bits & 1u) || (bits & ~support)) continue;
      auto w = oracle::bits_to_assignment(bits, 4);
      if (!best || w.atoms() < best->atoms()) best = w;
    }
    REQUIRE(m.any_sat(f) == best);

    const std::vector<Var> q{static_cast<Var>(rng() % 4), static_cast<Var>(rng() % 4)};
    REQUIRE(m.forall(f, q) == m.not_(m.exists(m.not_(f), q)));
  }
  CHECK(by_table.size() > 100);
}
