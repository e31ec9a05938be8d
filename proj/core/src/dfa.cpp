#include "isynth/dfa.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

#include "isynth/errors.hpp"

namespace isynth::automata {

using ltlf::Formula;
using ltlf::Kind;

Dfa::Dfa(std::shared_ptr<bdd::Manager> manager, std::vector<AtomId> atoms)
    : manager_(std::move(manager)), atoms_(std::move(atoms)) {}

StateId Dfa::add_state(bool accepting, std::optional<ltlf::Formula> label) {
  edges_.emplace_back();
  accepting_.push_back(accepting);
  labels_.push_back(label);
  return static_cast<StateId>(edges_.size() - 1);
}

void Dfa::add_edge(StateId from, bdd::Ref guard, StateId to) {
  if (guard.is_false()) return;
  edges_.at(from).push_back({guard, to});
}

std::size_t Dfa::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.size();
  return n;
}

namespace {

void check_deadline(const BuildOptions& options) {
  if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) throw Timeout();
}

// Canonical key of a residual: its Boolean structure over temporal leaves and
// literals, as a BDD in which every leaf is a free variable.
class ResidualKeys {
 public:
  bdd::Ref key(Formula f) {
    switch (f.kind()) {
      case Kind::True: return keys_.one();
      case Kind::False: return keys_.zero();
      case Kind::And:
      case Kind::Or: {
        if (auto it = memo_.find(f.node()); it != memo_.end()) return it->second;
        bool is_and = f.kind() == Kind::And;
        bdd::Ref r = keys_.constant(is_and);
        for (Formula c : f.children()) r = is_and ? keys_.and_(r, key(c)) : keys_.or_(r, key(c));
        memo_.emplace(f.node(), r);
        return r;
      }
      default: {
        auto [it, inserted] = leaves_.try_emplace(f.node(), static_cast<bdd::Var>(leaves_.size()));
        return keys_.var(it->second);
      }
    }
  }

 private:
  bdd::Manager keys_;
  std::unordered_map<const ltlf::Node*, bdd::Var> leaves_;
  std::unordered_map<const ltlf::Node*, bdd::Ref> memo_;
};

struct Successor {
  bdd::Ref guard;
  Formula residual;
};

// Shannon-splits an unfolded formula on its current-position atoms; each
// branch ends when no current atom is left and the remainder is shifted.
void split(ltlf::FormulaFactory& ff, bdd::Manager& m, Formula chi, bdd::Ref guard, std::vector<Successor>& out) {
  chi = ltlf::simplify(ff, chi);
  auto atom = ltlf::current_atom(chi);
  if (!atom) {
    out.push_back({guard, ltlf::simplify(ff, ltlf::shift(ff, chi))});
    return;
  }
  split(ff, m, ltlf::substitute(ff, chi, *atom, true), m.and_(guard, m.var(*atom)), out);
  split(ff, m, ltlf::substitute(ff, chi, *atom, false), m.and_(guard, m.nvar(*atom)), out);
}

}  // namespace

Dfa from_formula(Context& ctx, Formula phi, std::span<const AtomId> atoms, const BuildOptions& options) {
  for (AtomId a : ltlf::atoms_of(phi))
    if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) throw UnknownAtom(ctx.vocab.name(a));

  auto& ff = ctx.formulas;
  bdd::Manager& m = *ctx.bdd;
  Dfa dfa(ctx.bdd, std::vector<AtomId>(atoms.begin(), atoms.end()));
  ResidualKeys keys;
  std::unordered_map<std::uint32_t, StateId> by_key;
  std::vector<Formula> residual;

  const StateId start = dfa.add_state(false);
  residual.push_back(phi);

  auto state_for = [&](Formula r) -> StateId {
    auto k = keys.key(r).index();
    if (auto it = by_key.find(k); it != by_key.end()) return it->second;
    if (dfa.size() >= options.state_cap) throw DfaTooLarge(options.state_cap);
    StateId s = dfa.add_state(ltlf::eval_empty(r), r);
    residual.push_back(r);
    by_key.emplace(k, s);
    return s;
  };

  std::deque<StateId> frontier{start};
  std::vector<Successor> succ;
  while (!frontier.empty()) {
    check_deadline(options);
    StateId s = frontier.front();
    frontier.pop_front();
    succ.clear();
    split(ff, m, ltlf::unfold(ff, residual[s]), m.one(), succ);

    std::map<StateId, bdd::Ref> merged;
    for (const Successor& x : succ) {
      std::size_t before = dfa.size();
      StateId t = state_for(x.residual);
      if (dfa.size() > before) frontier.push_back(t);
      auto [it, inserted] = merged.try_emplace(t, x.guard);
      if (!inserted) it->second = m.or_(it->second, x.guard);
    }
    for (auto [t, g] : merged) dfa.add_edge(s, g, t);
  }
  dfa.set_initial(start);
  return dfa;
}

StateId step(const Dfa& a, StateId s, const Assignment& w) {
  for (const Edge& e : a.edges(s))
    if (a.manager().eval(e.guard, w)) return e.target;
  throw Error("automaton is not total at state " + std::to_string(s));
}

StateId run(const Dfa& a, StateId s, std::span<const Assignment> trace) {
  for (const Assignment& w : trace) s = step(a, s, w);
  return s;
}

bool accepts(const Dfa& a, std::span<const Assignment> trace) { return a.accepting(run(a, a.initial(), trace)); }

Dfa progress(const Dfa& a, std::span<const Assignment> h) {
  Dfa out = a;
  out.set_initial(run(a, a.initial(), h));
  return out;
}

Dfa trim(const Dfa& a) {
  std::vector<StateId> index(a.size(), static_cast<StateId>(-1));
  std::vector<StateId> order;
  std::deque<StateId> queue{a.initial()};
  index[a.initial()] = 0;
  order.push_back(a.initial());
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const Edge& e : a.edges(s)) {
      if (index[e.target] != static_cast<StateId>(-1)) continue;
      index[e.target] = static_cast<StateId>(order.size());
      order.push_back(e.target);
      queue.push_back(e.target);
    }
  }
  Dfa out(a.manager_ptr(), a.atoms());
  for (StateId s : order) out.add_state(a.accepting(s), a.label(s));
  for (StateId s : order)
    for (const Edge& e : a.edges(s)) out.add_edge(index[s], e.guard, index[e.target]);
  out.set_initial(0);
  return out;
}

Dfa minimize(const Dfa& input) {
  Dfa a = trim(input);
  bdd::Manager& m = a.manager();
  const std::size_t n = a.size();
  std::vector<std::uint32_t> block(n);
  std::size_t blocks = 0;
  {
    std::map<bool, std::uint32_t> ids;
    for (StateId s = 0; s < n; ++s) {
      auto [it, inserted] = ids.try_emplace(a.accepting(s), static_cast<std::uint32_t>(ids.size()));
      block[s] = it->second;
    }
    blocks = ids.size();
  }

  // Moore refinement: a state's signature is its block plus, per target
  // block, the union of the guards leading there.
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n);
    for (StateId s = 0; s < n; ++s) {
      std::map<std::uint32_t, bdd::Ref> by_block;
      for (const Edge& e : a.edges(s)) {
        auto [it, inserted] = by_block.try_emplace(block[e.target], e.guard);
        if (!inserted) it->second = m.or_(it->second, e.guard);
      }
      std::vector<std::uint32_t> sig{block[s]};
      for (auto [b, g] : by_block) {
        sig.push_back(b);
        sig.push_back(g.index());
      }
      auto [it, inserted] = ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(ids.size()));
      next[s] = it->second;
    }
    block = std::move(next);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }

  Dfa q(a.manager_ptr(), a.atoms());
  std::vector<StateId> rep(blocks, static_cast<StateId>(-1));
  for (StateId s = 0; s < n; ++s)
    if (rep[block[s]] == static_cast<StateId>(-1)) rep[block[s]] = s;
  for (std::size_t b = 0; b < blocks; ++b) q.add_state(a.accepting(rep[b]), a.label(rep[b]));
  for (std::size_t b = 0; b < blocks; ++b) {
    std::map<std::uint32_t, bdd::Ref> by_block;
    for (const Edge& e : a.edges(rep[b])) {
      auto [it, inserted] = by_block.try_emplace(block[e.target], e.guard);
      if (!inserted) it->second = m.or_(it->second, e.guard);
    }
    for (auto [t, g] : by_block) q.add_edge(static_cast<StateId>(b), g, t);
  }
  q.set_initial(block[a.initial()]);
  return trim(q);
}

Dfa product(std::span<const Dfa> operands, const BuildOptions& options) {
  if (operands.empty()) throw Error("product of an empty automaton list");
  const Dfa& first = operands.front();
  for (const Dfa& d : operands) {
    if (d.manager_ptr() != first.manager_ptr()) throw ManagerMismatch();
    if (d.atoms() != first.atoms()) throw Error("product operands must share the vocabulary");
  }
  bdd::Manager& m = first.manager();
  Dfa out(first.manager_ptr(), first.atoms());
  std::map<std::vector<StateId>, StateId> index;
  std::vector<std::vector<StateId>> tuples;
  std::deque<StateId> queue;

  auto state_for = [&](const std::vector<StateId>& t) -> StateId {
    if (auto it = index.find(t); it != index.end()) return it->second;
    if (out.size() >= options.state_cap) throw DfaTooLarge(options.state_cap);
    bool acc = true;
    for (std::size_t i = 0; i < operands.size(); ++i) acc = acc && operands[i].accepting(t[i]);
    StateId s = out.add_state(acc);
    index.emplace(t, s);
    tuples.push_back(t);
    queue.push_back(s);
    return s;
  };

  std::vector<StateId> init;
  for (const Dfa& d : operands) init.push_back(d.initial());
  out.set_initial(state_for(init));

  while (!queue.empty()) {
    check_deadline(options);
    StateId s = queue.front();
    queue.pop_front();
    std::vector<std::pair<bdd::Ref, std::vector<StateId>>> partial{{m.one(), {}}};
    const std::vector<StateId> tuple = tuples[s];
    for (std::size_t i = 0; i < operands.size(); ++i) {
      std::vector<std::pair<bdd::Ref, std::vector<StateId>>> extended;
      for (const auto& [g, targets] : partial) {
        for (const Edge& e : operands[i].edges(tuple[i])) {
          bdd::Ref h = m.and_(g, e.guard);
          if (h.is_false()) continue;
          auto t = targets;
          t.push_back(e.target);
          extended.emplace_back(h, std::move(t));
        }
      }
      partial = std::move(extended);
    }
    std::map<StateId, bdd::Ref> merged;
    for (const auto& [g, targets] : partial) {
      StateId t = state_for(targets);
      auto [it, inserted] = merged.try_emplace(t, g);
      if (!inserted) it->second = m.or_(it->second, g);
    }
    for (auto [t, g] : merged) out.add_edge(s, g, t);
  }
  return out;
}

namespace {

Dfa with_fresh_initial(const Dfa& a) {
  Dfa out = a;
  StateId s = out.add_state(false);
  for (const Edge& e : a.edges(a.initial())) out.add_edge(s, e.guard, e.target);
  out.set_initial(s);
  return out;
}

}  // namespace

bool lang_equiv(const Dfa& a, const Dfa& b) {
  if (a.manager_ptr() != b.manager_ptr()) throw ManagerMismatch();
  bdd::Manager& m = a.manager();
  std::unordered_map<std::uint64_t, bool> seen;
  std::deque<std::pair<StateId, StateId>> queue{{a.initial(), b.initial()}};
  auto key = [](StateId p, StateId q) { return (std::uint64_t{p} << 32) | q; };
  seen.emplace(key(a.initial(), b.initial()), true);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    if (a.accepting(p) != b.accepting(q)) return false;
    for (const Edge& e : a.edges(p)) {
      for (const Edge& f : b.edges(q)) {
        if (m.and_(e.guard, f.guard).is_false()) continue;
        if (seen.emplace(key(e.target, f.target), true).second) queue.emplace_back(e.target, f.target);
      }
    }
  }
  return true;
}

bool lang_equiv_nonempty(const Dfa& a, const Dfa& b) { return lang_equiv(with_fresh_initial(a), with_fresh_initial(b)); }

bool isomorphic(const Dfa& a, const Dfa& b) {
  if (a.manager_ptr() != b.manager_ptr()) return false;
  bdd::Manager& m = a.manager();
  auto merged = [&](const Dfa& d, StateId s) {
    std::map<StateId, bdd::Ref> by_target;
    for (const Edge& e : d.edges(s)) {
      auto [it, inserted] = by_target.try_emplace(e.target, e.guard);
      if (!inserted) it->second = m.or_(it->second, e.guard);
    }
    std::vector<std::pair<std::uint32_t, StateId>> out;
    for (auto [t, g] : by_target) out.emplace_back(g.index(), t);
    std::sort(out.begin(), out.end());
    return out;
  };
  constexpr StateId kNone = static_cast<StateId>(-1);
  std::vector<StateId> fwd(a.size(), kNone), bwd(b.size(), kNone);
  std::deque<StateId> queue{a.initial()};
  fwd[a.initial()] = b.initial();
  bwd[b.initial()] = a.initial();
  while (!queue.empty()) {
    StateId p = queue.front();
    queue.pop_front();
    StateId q = fwd[p];
    if (a.accepting(p) != b.accepting(q)) return false;
    auto ea = merged(a, p);
    auto eb = merged(b, q);
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (ea[i].first != eb[i].first) return false;
      StateId ta = ea[i].second, tb = eb[i].second;
      if (fwd[ta] == kNone && bwd[tb] == kNone) {
        fwd[ta] = tb;
        bwd[tb] = ta;
        queue.push_back(ta);
      } else if (fwd[ta] != tb || bwd[tb] != ta) {
        return false;
      }
    }
  }
  return true;
}

bool guards_partition(const Dfa& a) {
  bdd::Manager& m = a.manager();
  for (StateId s = 0; s < a.size(); ++s) {
    bdd::Ref all = m.zero();
    const auto& es = a.edges(s);
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (es[i].target >= a.size()) return false;
      for (std::size_t j = i + 1; j < es.size(); ++j)
        if (!m.and_(es[i].guard, es[j].guard).is_false()) return false;
      all = m.or_(all, es[i].guard);
    }
    if (!all.is_true()) return false;
  }
  return true;
}

bool is_empty(const Dfa& a) {
  Dfa t = trim(a);
  for (StateId s = 0; s < t.size(); ++s)
    if (t.accepting(s)) return false;
  return true;
}

}  // namespace isynth::automata
