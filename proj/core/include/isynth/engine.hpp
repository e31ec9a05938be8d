#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "isynth/context.hpp"
#include "isynth/dfa.hpp"
#include "isynth/game.hpp"

namespace isynth::engine {

using automata::StateId;
using game::AtomPartition;

/// DP keeps one minimized automaton per adopted goal and progresses its
/// state; FP progresses the goal formulas and rebuilds the arena each time.
enum class Mode { DP, FP };

const char* to_string(Mode m);
/// Accepts "dp" or "fp"; throws Error otherwise.
Mode parse_mode(std::string_view text);

struct GoalRecord {
  ltlf::Formula formula;
  /// Step index at which the goal was adopted.
  std::size_t arrival = 0;
  bool satisfied_ever = false;
  // DP bookkeeping
  std::shared_ptr<const automata::Dfa> dfa;
  StateId current = 0;
  // FP bookkeeping: formula progressed through the history since arrival
  ltlf::Formula residual;
};

struct GoalStatus {
  bool satisfied_now = false;
  bool satisfied_ever = false;
};

enum class Outcome { Realizable, Unrealizable };

const char* to_string(Outcome o);

struct AddStats {
  double add_ms = 0;
  /// States of the automaton built from a formula during this addition:
  /// the new goal alone (DP) or the whole progressed conjunction (FP).
  std::size_t new_dfa_states = 0;
  std::size_t arena_states = 0;
};

struct Verdict {
  Outcome outcome = Outcome::Unrealizable;
  std::optional<game::Transducer> transducer;
  std::shared_ptr<const game::DfaGame> arena;
  std::shared_ptr<const game::Solution> solution;
  AddStats stats;

  bool realizable() const { return outcome == Outcome::Realizable; }
};

/// Incremental synthesis session. Copies share the Context but are otherwise
/// independent, which lets tests branch a session at every environment move.
class Session {
 public:
  Session(std::shared_ptr<Context> ctx, AtomPartition partition, Mode mode);

  /// Parses with the session vocabulary; unknown atoms are rejected.
  Verdict add_goal(std::string_view text, const automata::BuildOptions& options = {});
  Verdict add_goal(ltlf::Formula phi, const automata::BuildOptions& options = {});

  Assignment agent_move();
  /// The move agent_move() would return, without consuming it.
  Assignment peek_move() const;
  void env_move(const Assignment& x);

  std::vector<GoalStatus> goal_status() const;
  /// Every adopted goal is satisfied on its slice of the history.
  bool jointly_accepting() const;

  Mode mode() const { return mode_; }
  const AtomPartition& partition() const { return partition_; }
  const std::vector<AtomId>& atoms() const { return atoms_; }
  const std::vector<GoalRecord>& goals() const { return goals_; }
  const Trace& history() const { return history_; }
  std::size_t clock() const { return history_.size(); }
  Context& context() const { return *ctx_; }
  const std::shared_ptr<Context>& context_ptr() const { return ctx_; }
  const std::optional<game::Transducer>& active() const { return active_; }
  /// Arena of the last successful addition.
  const std::shared_ptr<const game::DfaGame>& arena() const { return arena_; }
  bool awaiting_env() const { return pending_.has_value(); }

 private:
  bool satisfied_now(const GoalRecord& g) const;

  std::shared_ptr<Context> ctx_;
  AtomPartition partition_;
  std::vector<AtomId> atoms_;
  Mode mode_;
  std::vector<GoalRecord> goals_;
  Trace history_;
  std::optional<game::Transducer> active_;
  std::shared_ptr<const game::DfaGame> arena_;
  std::optional<Assignment> pending_;
};

/// Environment behavior during execution; receives the session before the
/// environment's move and returns an assignment over the env atoms.
using EnvPolicy = std::function<Assignment(const Session&)>;

/// Uniform over 2^X, driven by a 64-bit Mersenne Twister seeded with `seed`.
EnvPolicy random_policy(std::uint64_t seed);
/// All environment atoms false.
EnvPolicy passive_policy();
/// Plays `script` in order, then behaves passively.
EnvPolicy scripted_policy(std::vector<Assignment> script);

struct EpisodeLog {
  Trace trace;
  std::vector<ltlf::Formula> goals;
  std::vector<std::size_t> arrivals;
  std::vector<Assignment> moves;
  /// Steps executed by run_episode itself (trace may hold earlier steps).
  std::size_t steps = 0;
};

/// Snapshot of the session's history and goals.
EpisodeLog snapshot(const Session& s);

/// Plays until every adopted goal is jointly accepting. `max_steps` defaults
/// to four times the active arena's state count. Throws StepLimit.
EpisodeLog run_episode(Session& s, const EnvPolicy& env, std::optional<std::size_t> max_steps = std::nullopt);

struct LogCheck {
  bool literal_ok = true;
  bool joint_ok = true;
};

/// Ground truth from the trace semantics only: literal_ok asks every goal to
/// be satisfied by some slice trace[arrival..k]; joint_ok asks for a single k
/// at or after the last arrival that works for all goals at once.
LogCheck verify_log(const EpisodeLog& log);

}  // namespace isynth::engine
