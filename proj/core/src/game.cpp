#include "isynth/game.hpp"

#include <algorithm>

#include "isynth/errors.hpp"

namespace isynth::game {

std::vector<AtomId> AtomPartition::vocabulary() const {
  std::vector<AtomId> all = agent;
  all.insert(all.end(), env.begin(), env.end());
  return all;
}

void AtomPartition::validate() const {
  for (AtomId a : agent)
    if (std::find(env.begin(), env.end(), a) != env.end()) throw Error("atom is both agent- and environment-controlled");
}

std::size_t Solution::winning_count() const { return static_cast<std::size_t>(std::count(winning.begin(), winning.end(), true)); }

namespace {

// ∀X. (some edge from s lands in target)
bdd::Ref controllable(const DfaGame& g, StateId s, const std::vector<bool>& target) {
  bdd::Manager& m = g.dfa.manager();
  bdd::Ref into = m.zero();
  for (const automata::Edge& e : g.dfa.edges(s))
    if (target[e.target]) into = m.or_(into, e.guard);
  if (into.is_false()) return into;
  return m.forall(into, g.partition.env);
}

Assignment agent_witness(const DfaGame& g, bdd::Ref f) {
  auto sat = g.dfa.manager().any_sat(f);
  return sat->restricted_to(g.partition.agent);
}

}  // namespace

Cpre cpre(const DfaGame& g, const std::vector<bool>& target) {
  const std::size_t n = g.dfa.size();
  Cpre out{std::vector<bool>(n, false), std::vector<std::optional<Assignment>>(n)};
  for (StateId s = 0; s < n; ++s) {
    bdd::Ref f = controllable(g, s, target);
    if (f.is_false()) continue;
    out.states[s] = true;
    out.witness[s] = agent_witness(g, f);
  }
  return out;
}

Solution solve(const DfaGame& g) {
  const std::size_t n = g.dfa.size();
  Solution sol;
  sol.winning.assign(n, false);
  sol.strategy.assign(n, std::nullopt);
  sol.rank.assign(n, 0);
  for (StateId s = 0; s < n; ++s) sol.winning[s] = g.dfa.accepting(s);

  while (true) {
    std::vector<StateId> added;
    std::vector<Assignment> moves;
    for (StateId s = 0; s < n; ++s) {
      if (sol.winning[s]) continue;
      bdd::Ref f = controllable(g, s, sol.winning);
      if (f.is_false()) continue;
      added.push_back(s);
      moves.push_back(agent_witness(g, f));
    }
    if (added.empty()) break;
    ++sol.iterations;
    for (std::size_t i = 0; i < added.size(); ++i) {
      sol.winning[added[i]] = true;
      sol.strategy[added[i]] = moves[i];
      sol.rank[added[i]] = sol.iterations;
    }
  }

  for (StateId s = 0; s < n; ++s) {
    if (!g.dfa.accepting(s)) continue;
    bdd::Ref f = controllable(g, s, sol.winning);
    sol.strategy[s] = f.is_false() ? Assignment{} : agent_witness(g, f);
  }
  return sol;
}

bool is_realizable(const DfaGame& g, const Solution& s) { return s.winning[g.dfa.initial()]; }

Transducer::Transducer(std::shared_ptr<const DfaGame> game, std::shared_ptr<const Solution> solution)
    : game_(std::move(game)), solution_(std::move(solution)), current_(game_->dfa.initial()) {
  if (!solution_->winning[current_]) throw OutOfRegion();
}

Assignment Transducer::peek() const {
  // Past an accepting state the play may leave W; any move will do there.
  if (!in_region()) return {};
  return *solution_->strategy[current_];
}

Assignment Transducer::move() {
  if (pending_) throw AlternationError("agent move requested twice without an environment step");
  pending_ = peek();
  return *pending_;
}

StateId Transducer::step(const Assignment& env) {
  if (!pending_) throw AlternationError("environment step before the agent move");
  Assignment letter = pending_->merged(env.restricted_to(game_->partition.env));
  const StateId next = automata::step(game_->dfa, current_, letter);
  if (in_region() && !in_accepting() && !solution_->winning[next]) throw OutOfRegion();
  pending_.reset();
  current_ = next;
  return current_;
}

}  // namespace isynth::game
