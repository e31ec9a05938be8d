#include <doctest.h>

#include "isynth/errors.hpp"
#include "isynth/parser.hpp"
#include "oracles.hpp"

using namespace isynth;
using namespace isynth::ltlf;
using RK = RawFormula::Kind;

namespace {

struct Fx {
  Vocabulary vocab;
  FormulaFactory ff;
  AtomId a = vocab.intern("a");
  AtomId b = vocab.intern("b");
  AtomId c = vocab.intern("c");
  AtomId p = vocab.intern("p");
  AtomId q = vocab.intern("q");

  RawFormula raw(std::string_view s) { return parse(s, vocab); }
  Formula nnf(std::string_view s) { return to_nnf(ff, raw(s)); }
};

RawFormula R(RK k, RawFormula x) { return RawFormula::unary(k, std::move(x)); }
RawFormula R(RK k, RawFormula x, RawFormula y) { return RawFormula::binary(k, std::move(x), std::move(y)); }
RawFormula A(AtomId a) { return RawFormula::atom_of(a); }

}  // namespace

TEST_CASE("parser: precedence and associativity") {
  Fx fx;
  CHECK(fx.raw("F (a & X b)") == R(RK::Eventually, R(RK::And, A(fx.a), R(RK::Next, A(fx.b)))));
  CHECK(fx.raw("a U b U c") == R(RK::Until, A(fx.a), R(RK::Until, A(fx.b), A(fx.c))));
  CHECK(fx.raw("a -> b -> c") == R(RK::Implies, A(fx.a), R(RK::Implies, A(fx.b), A(fx.c))));
  CHECK(fx.raw("a | b & c") == R(RK::Or, A(fx.a), R(RK::And, A(fx.b), A(fx.c))));
  CHECK(fx.raw("a & b U c") == R(RK::And, A(fx.a), R(RK::Until, A(fx.b), A(fx.c))));
  CHECK(fx.raw("!a U b") == R(RK::Until, R(RK::Not, A(fx.a)), A(fx.b)));
  CHECK(fx.raw("a <-> b -> c") == R(RK::Iff, A(fx.a), R(RK::Implies, A(fx.b), A(fx.c))));
  CHECK(fx.raw("N true # trailing comment") == R(RK::WeakNext, RawFormula::leaf(RK::True)));
}

TEST_CASE("parser: atoms get interned, strict mode rejects unknown ones") {
  Fx fx;
  const auto before = fx.vocab.size();
  fx.raw("fresh_atom1 & a");
  CHECK(fx.vocab.size() == before + 1);
  CHECK(fx.vocab.find("fresh_atom1").has_value());
  CHECK_THROWS_AS(parse("zzz", fx.vocab, AtomPolicy::Strict), UnknownAtom);
}

TEST_CASE("parser: errors carry line, column and expected tokens") {
  Fx fx;
  try {
    fx.raw("(a & b");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 7);
    CHECK(!e.expected().empty());
  }
  try {
    fx.raw("a &\n  & b");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(fx.raw(""), ParseError);
  CHECK_THROWS_AS(fx.raw("a b"), ParseError);
  CHECK_THROWS_AS(fx.raw("a $ b"), ParseError);
}

TEST_CASE("to_nnf: dualities") {
  Fx fx;
  auto& ff = fx.ff;
  CHECK(fx.nnf("!(a U b)") == ff.release(ff.not_prop(fx.a), ff.not_prop(fx.b)));
  CHECK(fx.nnf("!X a") == ff.weak_next(ff.not_prop(fx.a)));
  CHECK(fx.nnf("!(a -> b)") == ff.conj(ff.prop(fx.a), ff.not_prop(fx.b)));
  CHECK(fx.nnf("!N a") == ff.next(ff.not_prop(fx.a)));
  CHECK(fx.nnf("!F a") == ff.always(ff.not_prop(fx.a)));
  CHECK(fx.nnf("!!a") == ff.prop(fx.a));
  CHECK(fx.nnf("!true") == ff.bottom());
}

TEST_CASE("eval: satisfaction clauses") {
  Fx fx;
  auto& ff = fx.ff;
  const auto p = fx.p, q = fx.q;
  CHECK(eval(Trace{{p}}, ff.prop(p)));
  CHECK(eval(Trace{{p}}, ff.weak_next(ff.prop(q))));
  CHECK_FALSE(eval(Trace{{p}}, ff.next(ff.top())));
  CHECK(eval(Trace{{p}, {p}, {q}}, ff.until(ff.prop(p), ff.prop(q))));
  CHECK_FALSE(eval(Trace{{}, {q}}, ff.until(ff.prop(p), ff.prop(q))));
  CHECK_THROWS_AS(eval(Trace{}, ff.top()), EmptyTraceError);
}

TEST_CASE("eval_empty: end-of-trace markers") {
  Fx fx;
  auto& ff = fx.ff;
  CHECK_FALSE(eval_empty(ff.not_end()));
  CHECK(eval_empty(ff.end()));
  CHECK_FALSE(eval_empty(ff.conj(ff.weak_next(ff.bottom()), ff.prop(fx.a))));
  CHECK(eval_empty(ff.top()));
  CHECK_FALSE(eval_empty(ff.not_prop(fx.a)));
  CHECK_FALSE(eval_empty(ff.next(ff.top())));
  CHECK(eval_empty(ff.weak_next(ff.bottom())));
  CHECK(eval_empty(ff.release(ff.prop(fx.a), ff.prop(fx.b))));
  CHECK(eval_empty(ff.disj(ff.prop(fx.a), ff.end())));
}

TEST_CASE("prog_step: rule table") {
  Fx fx;
  auto& ff = fx.ff;
  const auto a = fx.a, b = fx.b;
  CHECK(prog_step(ff, ff.prop(a), Assignment{a}) == ff.top());
  CHECK(prog_step(ff, ff.prop(a), Assignment{}) == ff.bottom());
  CHECK(prog_step(ff, ff.not_prop(a), Assignment{}) == ff.top());
  CHECK(prog_step(ff, ff.next(ff.prop(a)), Assignment{a}) == ff.conj(ff.prop(a), ff.not_end()));
  CHECK(prog_step(ff, ff.weak_next(ff.prop(a)), Assignment{}) == ff.disj(ff.prop(a), ff.end()));
  const auto u = ff.until(ff.prop(a), ff.prop(b));
  CHECK(prog_step(ff, u, Assignment{a}) == ff.conj(u, ff.not_end()));
  CHECK(prog_step(ff, u, Assignment{b}) == ff.top());
  CHECK(prog_step(ff, u, Assignment{}) == ff.bottom());
  CHECK(prog_step(ff, ff.top(), Assignment{}) == ff.top());
  CHECK(prog_step(ff, ff.bottom(), Assignment{a}) == ff.bottom());
  // The raw until rule keeps the literal shape before simplification.
  const auto raw = prog_step_raw(ff, u, Assignment{a});
  CHECK(raw != prog_step(ff, u, Assignment{a}));
  CHECK(simplify(ff, raw) == ff.conj(u, ff.not_end()));
}

TEST_CASE("prog_trace: history extension") {
  Fx fx;
  auto& ff = fx.ff;
  const auto a = fx.a, b = fx.b;
  const auto phi = ff.until(ff.prop(a), ff.next(ff.prop(b)));
  CHECK(prog_trace(ff, phi, Trace{}) == phi);
  CHECK(prog_trace(ff, phi, Trace{}, false) == phi);

  const auto xa = ff.next(ff.prop(a));
  const Trace h{{b}, {a}};
  const auto r = prog_trace(ff, xa, h);
  CHECK(eval_empty(r));
  CHECK(eval(h, xa));

  const auto ga = ff.always(ff.prop(a));
  const auto r1 = prog_trace(ff, ga, Trace{{a}});
  CHECK(eval_empty(r1));
  CHECK_FALSE(eval_empty(prog_step(ff, r1, Assignment{})));
}

TEST_CASE("simplify: absorption, dedup, complementary literals") {
  Fx fx;
  auto& ff = fx.ff;
  const auto a = fx.a, b = fx.b;
  CHECK(simplify(ff, ff.conj({ff.prop(a), ff.top(), ff.prop(a)})) == ff.prop(a));
  CHECK(simplify(ff, ff.disj(ff.prop(a), ff.not_prop(a))) == ff.top());
  CHECK(simplify(ff, ff.conj(ff.bottom(), ff.until(ff.prop(a), ff.prop(b)))) == ff.bottom());
  CHECK(simplify(ff, ff.conj(ff.prop(a), ff.not_prop(a))) == ff.bottom());
  CHECK(simplify(ff, ff.disj(ff.bottom(), ff.prop(b))) == ff.prop(b));
  // Flattening: nested conjunctions collapse to one node.
  const auto nested = ff.conj(ff.prop(a), ff.conj(ff.prop(b), ff.next(ff.prop(a))));
  const auto flat = simplify(ff, nested);
  CHECK(flat.kind() == Kind::And);
  CHECK(flat.arity() == 3);
}

TEST_CASE("size, atoms_of, depth") {
  Fx fx;
  auto& ff = fx.ff;
  CHECK(size(ff.until(ff.prop(fx.a), ff.prop(fx.b))) == 3);
  CHECK(size(ff.top()) == 1);
  CHECK(atoms_of(fx.nnf("F (a & X b)")) == std::vector<AtomId>{fx.a, fx.b});
  CHECK(atoms_of(ff.top()).empty());
  CHECK(depth(ff.prop(fx.a)) == 1);
  CHECK(depth(ff.next(ff.next(ff.prop(fx.a)))) == 3);
}

TEST_CASE("hash-consing: AC-equal conjunctions share one node") {
  Fx fx;
  auto x = simplify(fx.ff, fx.nnf("(a & b) & X c"));
  auto y = simplify(fx.ff, fx.nnf("X c & (b & a)"));
  CHECK(x == y);
  CHECK(fx.nnf("a U b") == fx.nnf("a U b"));
  CHECK(fx.nnf("a U b") != fx.nnf("b U a"));
}

TEST_CASE("to_string round-trips through the parser") {
  Fx fx;
  oracle::RawGen gen({fx.a, fx.b, fx.c}, 7);
  for (int i = 0; i < 300; ++i) {
    auto f = to_nnf(fx.ff, gen(5));
    auto text = to_string(fx.vocab, f);
    CHECK(to_nnf(fx.ff, fx.raw(text)) == f);
  }
}

TEST_CASE("property: eval agrees with the raw-syntax oracle, NNF and simplify preserve semantics") {
  Fx fx;
  std::vector<AtomId> atoms{fx.a, fx.b, fx.c};
  oracle::RawGen gen(atoms, 11);
  auto traces = oracle::all_traces(atoms, 1, 3);
  for (int i = 0; i < 150; ++i) {
    auto raw = gen(5);
    auto f = to_nnf(fx.ff, raw);
    auto s = simplify(fx.ff, f);
    CHECK(simplify(fx.ff, s) == s);
    // Printing flattens n-ary nodes into binary chains; simplify restores them.
    CHECK(simplify(fx.ff, to_nnf(fx.ff, fx.raw(to_string(fx.vocab, s)))) == s);
    for (const auto& t : traces) {
      const bool expected = oracle::holds(raw, t);
      REQUIRE(eval(t, f) == expected);
      REQUIRE(eval(t, s) == expected);
    }
  }
}

TEST_CASE("property: progression soundness and one-step decomposition") {
  Fx fx;
  std::vector<AtomId> atoms{fx.a, fx.b, fx.c};
  oracle::RawGen gen(atoms, 23);
  std::mt19937_64 rng(5);
  int cases = 0;
  for (int i = 0; i < 400; ++i) {
    auto raw = gen(5);
    auto f = to_nnf(fx.ff, raw);
    for (int k = 0; k < 30; ++k, ++cases) {
      auto t = oracle::random_trace(atoms, 1 + rng() % 5, rng);
      const bool expected = oracle::holds(raw, t);
      REQUIRE(eval_empty(prog_trace(fx.ff, f, t)) == expected);
      REQUIRE(eval_empty(prog_trace(fx.ff, f, t, false)) == expected);
      auto head = prog_step(fx.ff, f, t.front());
      if (t.size() == 1) {
        REQUIRE(eval_empty(head) == expected);
      } else {
        REQUIRE(eval(std::span(t).subspan(1), head) == expected);
      }
    }
  }
  CHECK(cases >= 10000);
}

TEST_CASE("unfold, substitute and shift agree with one progression step") {
  // prog_step(φ, w) ≡ shift(unfold(φ)[atoms := w]) on every trace.
  Fx fx;
  std::vector<AtomId> atoms{fx.a, fx.b};
  oracle::RawGen gen(atoms, 31);
  auto traces = oracle::all_traces(atoms, 0, 3);
  auto letters = oracle::letters(atoms);
  for (int i = 0; i < 100; ++i) {
    auto f = to_nnf(fx.ff, gen(4));
    auto u = unfold(fx.ff, f);
    for (const auto& w : letters) {
      auto g = u;
      for (AtomId x : atoms) g = substitute(fx.ff, g, x, w.contains(x));
      CHECK_FALSE(current_atom(g).has_value());
      auto shifted = shift(fx.ff, g);
      auto progressed = prog_step(fx.ff, f, w);
      for (const auto& t : traces) {
        auto l = t.empty() ? eval_empty(shifted) : eval(t, shifted);
        auto r = t.empty() ? eval_empty(progressed) : eval(t, progressed);
        REQUIRE(l == r);
      }
    }
  }
}

TEST_CASE("vocabulary and assignment basics") {
  Vocabulary v;
  CHECK(v.intern("x") == 0);
  CHECK(v.intern("y") == 1);
  CHECK(v.intern("x") == 0);
  CHECK(v.at("y") == 1);
  CHECK_THROWS_AS(v.at("nope"), UnknownAtom);
  CHECK(Vocabulary::valid_name("alive_1"));
  CHECK_FALSE(Vocabulary::valid_name("1abc"));
  CHECK_FALSE(Vocabulary::valid_name("X"));
  CHECK_FALSE(Vocabulary::valid_name("true"));

  Assignment w{3, 1, 3};
  CHECK(w.atoms() == std::vector<AtomId>{1, 3});
  w.set(2, true);
  w.set(3, false);
  CHECK(w.atoms() == std::vector<AtomId>{1, 2});
  const std::vector<AtomId> keep{2, 5};
  CHECK(w.restricted_to(keep) == Assignment{2});
  CHECK(w.merged(Assignment{5}) == Assignment{1, 2, 5});
  CHECK(Assignment{} < Assignment{0});
}
