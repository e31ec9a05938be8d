#include "isynth/engine.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "isynth/errors.hpp"
#include "isynth/parser.hpp"

namespace isynth::engine {

const char* to_string(Mode m) { return m == Mode::DP ? "dp" : "fp"; }

Mode parse_mode(std::string_view text) {
  if (text == "dp" || text == "DP") return Mode::DP;
  if (text == "fp" || text == "FP") return Mode::FP;
  throw Error("unknown engine '" + std::string(text) + "', expected dp or fp");
}

const char* to_string(Outcome o) { return o == Outcome::Realizable ? "Realizable" : "Unrealizable"; }

Session::Session(std::shared_ptr<Context> ctx, AtomPartition partition, Mode mode)
    : ctx_(std::move(ctx)), partition_(std::move(partition)), mode_(mode) {
  partition_.validate();
  atoms_ = partition_.vocabulary();
}

Verdict Session::add_goal(std::string_view text, const automata::BuildOptions& options) {
  return add_goal(parse_goal(text, ctx_->vocab, ctx_->formulas, AtomPolicy::Strict), options);
}

Verdict Session::add_goal(ltlf::Formula phi, const automata::BuildOptions& options) {
  if (pending_) throw AlternationError("goal added between the agent move and the environment step");
  const auto t0 = std::chrono::steady_clock::now();
  auto& ff = ctx_->formulas;
  phi = ltlf::simplify(ff, phi);
  for (AtomId a : ltlf::atoms_of(phi))
    if (std::find(atoms_.begin(), atoms_.end(), a) == atoms_.end()) throw UnknownAtom(ctx_->vocab.name(a));

  Verdict v;
  GoalRecord record{phi, clock(), false, nullptr, 0, phi};
  automata::Dfa arena_dfa(ctx_->bdd, atoms_);
  if (mode_ == Mode::DP) {
    auto fresh = std::make_shared<const automata::Dfa>(automata::minimize(automata::from_formula(*ctx_, phi, atoms_, options)));
    v.stats.new_dfa_states = fresh->size();
    std::vector<automata::Dfa> operands;
    operands.reserve(goals_.size() + 1);
    for (const GoalRecord& g : goals_) {
      operands.push_back(*g.dfa);
      operands.back().set_initial(g.current);
    }
    operands.push_back(*fresh);
    arena_dfa = automata::minimize(automata::trim(automata::product(operands, options)));
    record.dfa = fresh;
    record.current = fresh->initial();
  } else {
    std::vector<ltlf::Formula> parts;
    for (const GoalRecord& g : goals_) parts.push_back(g.residual);
    parts.push_back(phi);
    ltlf::Formula psi = ltlf::simplify(ff, ff.conj(parts));
    arena_dfa = automata::minimize(automata::from_formula(*ctx_, psi, atoms_, options));
    v.stats.new_dfa_states = arena_dfa.size();
  }
  v.stats.arena_states = arena_dfa.size();

  auto game = std::make_shared<const game::DfaGame>(game::DfaGame{std::move(arena_dfa), partition_});
  auto solution = std::make_shared<const game::Solution>(game::solve(*game));
  v.arena = game;
  v.solution = solution;
  if (game::is_realizable(*game, *solution)) {
    v.outcome = Outcome::Realizable;
    v.transducer.emplace(game, solution);
    goals_.push_back(std::move(record));
    active_ = v.transducer;
    arena_ = game;
  }
  v.stats.add_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

Assignment Session::peek_move() const {
  if (pending_) return *pending_;
  return active_ ? active_->peek() : Assignment{};
}

Assignment Session::agent_move() {
  if (pending_) throw AlternationError("agent move requested twice without an environment step");
  pending_ = active_ ? active_->move() : Assignment{};
  return *pending_;
}

void Session::env_move(const Assignment& x) {
  if (!pending_) throw AlternationError("environment step before the agent move");
  for (AtomId a : x.atoms())
    if (std::find(partition_.env.begin(), partition_.env.end(), a) == partition_.env.end())
      throw UnknownAtom(a < ctx_->vocab.size() ? ctx_->vocab.name(a) : std::to_string(a));

  const Assignment letter = pending_->merged(x);
  pending_.reset();
  history_.push_back(letter);
  for (GoalRecord& g : goals_) {
    if (mode_ == Mode::DP)
      g.current = automata::step(*g.dfa, g.current, letter);
    else
      g.residual = ltlf::prog_step(ctx_->formulas, g.residual, letter);
    g.satisfied_ever = g.satisfied_ever || satisfied_now(g);
  }
  if (active_) active_->step(x);
}

bool Session::satisfied_now(const GoalRecord& g) const {
  if (mode_ == Mode::DP) return g.dfa->accepting(g.current);
  // The residual's empty-trace value only speaks for non-empty slices.
  return clock() > g.arrival && ltlf::eval_empty(g.residual);
}

std::vector<GoalStatus> Session::goal_status() const {
  std::vector<GoalStatus> out;
  for (const GoalRecord& g : goals_) out.push_back({satisfied_now(g), g.satisfied_ever});
  return out;
}

bool Session::jointly_accepting() const {
  return std::all_of(goals_.begin(), goals_.end(), [&](const GoalRecord& g) { return satisfied_now(g); });
}

EnvPolicy random_policy(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const Session& s) {
    Assignment x;
    const auto& env = s.partition().env;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < env.size(); ++i) {
      if (i % 64 == 0) bits = (*rng)();
      x.set(env[i], (bits >> (i % 64)) & 1u);
    }
    return x;
  };
}

EnvPolicy passive_policy() {
  return [](const Session&) { return Assignment{}; };
}

EnvPolicy scripted_policy(std::vector<Assignment> script) {
  auto pos = std::make_shared<std::size_t>(0);
  auto moves = std::make_shared<const std::vector<Assignment>>(std::move(script));
  return [pos, moves](const Session&) { return *pos < moves->size() ? (*moves)[(*pos)++] : Assignment{}; };
}

EpisodeLog snapshot(const Session& s) {
  EpisodeLog log;
  log.trace = s.history();
  for (const GoalRecord& g : s.goals()) {
    log.goals.push_back(g.formula);
    log.arrivals.push_back(g.arrival);
  }
  for (const Assignment& w : s.history()) log.moves.push_back(w.restricted_to(s.partition().agent));
  return log;
}

EpisodeLog run_episode(Session& s, const EnvPolicy& env, std::optional<std::size_t> max_steps) {
  const std::size_t limit = max_steps ? *max_steps : 4 * (s.arena() ? s.arena()->dfa.size() : 1);
  std::size_t steps = 0;
  while (!s.goals().empty() && !s.jointly_accepting()) {
    if (steps >= limit) throw StepLimit(limit);
    if (!s.awaiting_env()) s.agent_move();
    s.env_move(env(s));
    ++steps;
  }
  EpisodeLog log = snapshot(s);
  log.steps = steps;
  return log;
}

namespace {

bool slice_holds(const EpisodeLog& log, std::size_t goal, std::size_t k) {
  std::span<const Assignment> all(log.trace);
  return ltlf::eval(all.subspan(log.arrivals[goal], k - log.arrivals[goal] + 1), log.goals[goal]);
}

}  // namespace

LogCheck verify_log(const EpisodeLog& log) {
  LogCheck out;
  const std::size_t n = log.trace.size();
  std::size_t last = 0;
  for (std::size_t g = 0; g < log.goals.size(); ++g) {
    last = std::max(last, log.arrivals[g]);
    bool any = false;
    for (std::size_t k = log.arrivals[g]; k < n && !any; ++k) any = slice_holds(log, g, k);
    out.literal_ok = out.literal_ok && any;
  }
  if (log.goals.empty()) return out;
  bool joint = false;
  for (std::size_t k = last; k < n && !joint; ++k) {
    bool all = true;
    for (std::size_t g = 0; g < log.goals.size() && all; ++g) all = slice_holds(log, g, k);
    joint = all;
  }
  out.joint_ok = joint;
  return out;
}

}  // namespace isynth::engine
