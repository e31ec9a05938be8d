#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "isynth/dfa.hpp"

namespace isynth::game {

using automata::Dfa;
using automata::StateId;

/// Agent atoms (outputs, Y) and environment atoms (inputs, X).
struct AtomPartition {
  std::vector<AtomId> agent;
  std::vector<AtomId> env;

  /// Agent atoms first, then environment atoms.
  std::vector<AtomId> vocabulary() const;
  /// Throws Error when the two sets overlap.
  void validate() const;
};

struct DfaGame {
  Dfa dfa;
  AtomPartition partition;
};

struct Solution {
  std::vector<bool> winning;
  /// Agent move per winning state.
  std::vector<std::optional<Assignment>> strategy;
  /// Fixpoint iteration at which each winning state entered W (0 for F).
  std::vector<std::size_t> rank;
  std::size_t iterations = 0;

  std::size_t winning_count() const;
};

struct Cpre {
  std::vector<bool> states;
  std::vector<std::optional<Assignment>> witness;
};

/// States from which some agent move forces every environment reply into `target`.
Cpre cpre(const DfaGame& g, const std::vector<bool>& target);

/// Least fixpoint W_0 = F, W_{i+1} = W_i ∪ cpre(W_i); the agent commits first.
Solution solve(const DfaGame& g);

bool is_realizable(const DfaGame& g, const Solution& s);

/// Executes a solved game: move() then step(x), strictly alternating.
/// OutOfRegion is raised if a step leaves W before F was reached.
class Transducer {
 public:
  Transducer(std::shared_ptr<const DfaGame> game, std::shared_ptr<const Solution> solution);

  Assignment move();
  /// Agent move for the current state without consuming it.
  Assignment peek() const;
  StateId step(const Assignment& env);

  StateId current() const { return current_; }
  bool in_accepting() const { return game_->dfa.accepting(current_); }
  /// False once the play has left W, which κ only allows after a visit to F.
  bool in_region() const { return solution_->winning[current_]; }
  const DfaGame& game() const { return *game_; }
  const Solution& solution() const { return *solution_; }

 private:
  std::shared_ptr<const DfaGame> game_;
  std::shared_ptr<const Solution> solution_;
  StateId current_;
  std::optional<Assignment> pending_;
};

}  // namespace isynth::game
