#pragma once

// Reference implementations used only by tests. None of them goes through
// the code under test: formulas are evaluated on the raw syntax tree straight
// from the trace semantics, games are explicit tables solved by minimax, and
// Boolean expressions are evaluated by truth table.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "isynth/context.hpp"
#include "isynth/dfa.hpp"
#include "isynth/parser.hpp"

namespace oracle {

using isynth::Assignment;
using isynth::AtomId;
using isynth::RawFormula;
using isynth::Trace;
using RK = RawFormula::Kind;

/// Satisfaction at position i of a non-empty trace, clause by clause.
inline bool holds(const RawFormula& f, std::span<const Assignment> t, std::size_t i) {
  const std::size_t n = t.size();
  switch (f.kind) {
    case RK::True: return true;
    case RK::False: return false;
    case RK::Atom: return t[i].contains(f.atom);
    case RK::Not: return !holds(f.children[0], t, i);
    case RK::And: return holds(f.children[0], t, i) && holds(f.children[1], t, i);
    case RK::Or: return holds(f.children[0], t, i) || holds(f.children[1], t, i);
    case RK::Implies: return !holds(f.children[0], t, i) || holds(f.children[1], t, i);
    case RK::Iff: return holds(f.children[0], t, i) == holds(f.children[1], t, i);
    case RK::Next: return i + 1 < n && holds(f.children[0], t, i + 1);
    case RK::WeakNext: return i + 1 >= n || holds(f.children[0], t, i + 1);
    case RK::Eventually:
      for (std::size_t j = i; j < n; ++j)
        if (holds(f.children[0], t, j)) return true;
      return false;
    case RK::Always:
      for (std::size_t j = i; j < n; ++j)
        if (!holds(f.children[0], t, j)) return false;
      return true;
    case RK::Until:
      for (std::size_t j = i; j < n; ++j) {
        if (holds(f.children[1], t, j)) return true;
        if (!holds(f.children[0], t, j)) return false;
      }
      return false;
    case RK::Release:
      // r holds until and including the first l, or forever.
      for (std::size_t j = i; j < n; ++j) {
        if (!holds(f.children[1], t, j)) return false;
        if (holds(f.children[0], t, j)) return true;
      }
      return true;
  }
  return false;
}

inline bool holds(const RawFormula& f, std::span<const Assignment> t) { return !t.empty() && holds(f, t, 0); }

/// Random surface formula over `atoms` with syntax-tree depth at most `depth`.
class RawGen {
 public:
  RawGen(std::vector<AtomId> atoms, std::uint64_t seed, bool full_syntax = true)
      : atoms_(std::move(atoms)), rng_(seed), full_(full_syntax) {}

  RawFormula operator()(int depth) {
    if (depth <= 1 || pick(5) == 0) return leaf();
    const int d = depth - 1;
    static const RK unary_full[] = {RK::Not, RK::Next, RK::WeakNext, RK::Eventually, RK::Always};
    static const RK binary_full[] = {RK::And, RK::Or, RK::Until, RK::Release, RK::Implies, RK::Iff};
    const std::size_t unary_n = full_ ? 5 : 4;
    const std::size_t binary_n = full_ ? 6 : 4;
    if (pick(2) == 0) {
      RK k = full_ ? unary_full[pick(unary_n)] : unary_full[1 + pick(unary_n)];
      return RawFormula::unary(k, (*this)(d));
    }
    return RawFormula::binary(binary_full[pick(binary_n)], (*this)(d), (*this)(d));
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  RawFormula leaf() {
    const std::size_t k = pick(atoms_.size() * 2 + 2);
    if (k == 0) return RawFormula::leaf(RK::True);
    if (k == 1) return RawFormula::leaf(RK::False);
    RawFormula a = RawFormula::atom_of(atoms_[(k - 2) / 2]);
    return (k % 2) ? RawFormula::unary(RK::Not, a) : a;
  }

  std::vector<AtomId> atoms_;
  std::mt19937_64 rng_;
  bool full_;
};

inline std::vector<Assignment> letters(const std::vector<AtomId>& atoms) {
  std::vector<Assignment> out;
  for (std::uint32_t m = 0; m < (1u << atoms.size()); ++m) {
    Assignment w;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (m >> i & 1u) w.set(atoms[i], true);
    out.push_back(w);
  }
  return out;
}

/// Every trace with min_len <= length <= max_len.
inline std::vector<Trace> all_traces(const std::vector<AtomId>& atoms, std::size_t min_len, std::size_t max_len) {
  const auto ls = letters(atoms);
  std::vector<Trace> out;
  std::vector<Trace> layer{Trace{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) out.insert(out.end(), layer.begin(), layer.end());
    std::vector<Trace> next;
    for (const auto& t : layer)
      for (const auto& w : ls) {
        auto u = t;
        u.push_back(w);
        next.push_back(std::move(u));
      }
    layer = std::move(next);
  }
  return out;
}

inline Trace random_trace(const std::vector<AtomId>& atoms, std::size_t len, std::mt19937_64& rng) {
  Trace t;
  for (std::size_t i = 0; i < len; ++i) {
    Assignment w;
    for (AtomId a : atoms)
      if (rng() & 1u) w.set(a, true);
    t.push_back(w);
  }
  return t;
}

/// Number of Myhill-Nerode classes of the language {τ : |τ| ≥ 1, member(τ)}
/// distinguishable with prefixes and suffixes up to the given lengths.
inline std::size_t nerode_classes(const std::vector<AtomId>& atoms, const std::function<bool(const Trace&)>& member,
                                  std::size_t prefix_len, std::size_t suffix_len) {
  auto prefixes = all_traces(atoms, 0, prefix_len);
  auto suffixes = all_traces(atoms, 0, suffix_len);
  std::set<std::vector<bool>> classes;
  for (const auto& u : prefixes) {
    std::vector<bool> sig;
    for (const auto& v : suffixes) {
      Trace uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      sig.push_back(!uv.empty() && member(uv));
    }
    classes.insert(sig);
  }
  return classes.size();
}

/// Explicit DFA game over one agent atom y and one environment atom x:
/// delta[s][2*y + x].
struct TableGame {
  std::vector<std::array<std::uint32_t, 4>> delta;
  std::vector<bool> accepting;
  std::uint32_t initial = 0;
  std::size_t size() const { return delta.size(); }
};

/// Agent forces a visit to an accepting state within `depth` steps (the
/// agent picks y first, then the environment answers with x).
inline bool agent_wins(const TableGame& g, std::uint32_t s, std::size_t depth) {
  if (g.accepting[s]) return true;
  if (depth == 0) return false;
  for (int y = 0; y < 2; ++y) {
    bool all = true;
    for (int x = 0; x < 2 && all; ++x) all = agent_wins(g, g.delta[s][2 * y + x], depth - 1);
    if (all) return true;
  }
  return false;
}

/// The environment keeps the play outside the accepting states forever:
/// greatest fixpoint of "not accepting and for every y some x stays inside".
inline std::vector<bool> env_avoids(const TableGame& g) {
  std::vector<bool> safe(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) safe[s] = !g.accepting[s];
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (!safe[s]) continue;
      bool ok = true;
      for (int y = 0; y < 2 && ok; ++y) ok = safe[g.delta[s][2 * y]] || safe[g.delta[s][2 * y + 1]];
      if (!ok) {
        safe[s] = false;
        changed = true;
      }
    }
  }
  return safe;
}

inline TableGame random_table_game(std::mt19937_64& rng, std::size_t max_states) {
  TableGame g;
  const std::size_t n = 1 + rng() % max_states;
  g.delta.resize(n);
  g.accepting.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (auto& t : g.delta[s]) t = static_cast<std::uint32_t>(rng() % n);
    g.accepting[s] = rng() % 4 == 0;
  }
  g.initial = static_cast<std::uint32_t>(rng() % n);
  return g;
}

/// Builds the semi-symbolic automaton of a table game over atoms {y, x}.
inline isynth::automata::Dfa to_dfa(const TableGame& g, isynth::Context& ctx, AtomId y, AtomId x) {
  auto& m = *ctx.bdd;
  isynth::automata::Dfa d(ctx.bdd, {y, x});
  for (std::size_t s = 0; s < g.size(); ++s) d.add_state(g.accepting[s]);
  for (std::size_t s = 0; s < g.size(); ++s) {
    std::map<std::uint32_t, isynth::bdd::Ref> guards;
    for (int l = 0; l < 4; ++l) {
      auto c = m.and_(l / 2 ? m.var(y) : m.nvar(y), l % 2 ? m.var(x) : m.nvar(x));
      auto [it, fresh] = guards.try_emplace(g.delta[s][l], c);
      if (!fresh) it->second = m.or_(it->second, c);
    }
    for (auto [t, guard] : guards) d.add_edge(static_cast<std::uint32_t>(s), guard, t);
  }
  d.set_initial(g.initial);
  return d;
}

/// Random Boolean expression over variables 0..vars-1 with a direct evaluator.
struct BoolExpr {
  enum class Op { Const, Var, Not, And, Or, Xor, Ite } op = Op::Const;
  std::uint32_t value = 0;  // constant value or variable index
  std::vector<BoolExpr> kids;

  bool eval(std::uint32_t bits) const {
    switch (op) {
      case Op::Const: return value != 0;
      case Op::Var: return bits >> value & 1u;
      case Op::Not: return !kids[0].eval(bits);
      case Op::And: return kids[0].eval(bits) && kids[1].eval(bits);
      case Op::Or: return kids[0].eval(bits) || kids[1].eval(bits);
      case Op::Xor: return kids[0].eval(bits) != kids[1].eval(bits);
      case Op::Ite: return kids[0].eval(bits) ? kids[1].eval(bits) : kids[2].eval(bits);
    }
    return false;
  }

  static BoolExpr random(std::mt19937_64& rng, std::uint32_t vars, int depth) {
    BoolExpr e;
    if (depth <= 1 || rng() % 4 == 0) {
      if (rng() % 6 == 0) {
        e.op = Op::Const;
        e.value = rng() % 2;
      } else {
        e.op = Op::Var;
        e.value = static_cast<std::uint32_t>(rng() % vars);
      }
      return e;
    }
    e.op = static_cast<Op>(2 + rng() % 5);
    const int arity = e.op == Op::Not ? 1 : e.op == Op::Ite ? 3 : 2;
    for (int i = 0; i < arity; ++i) e.kids.push_back(random(rng, vars, depth - 1));
    return e;
  }

  std::uint32_t truth_table(std::uint32_t vars) const {
    std::uint32_t tt = 0;
    for (std::uint32_t b = 0; b < (1u << vars); ++b)
      if (eval(b)) tt |= 1u << b;
    return tt;
  }
};

inline Assignment bits_to_assignment(std::uint32_t bits, std::uint32_t vars) {
  Assignment w;
  for (std::uint32_t v = 0; v < vars; ++v)
    if (bits >> v & 1u) w.set(v, true);
  return w;
}

}  // namespace oracle
