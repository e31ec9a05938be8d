#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isynth/bdd.hpp"
#include "isynth/context.hpp"
#include "isynth/ltlf.hpp"

namespace isynth::automata {

using StateId = std::uint32_t;

struct Edge {
  bdd::Ref guard;
  StateId target;
};

/// Semi-symbolic DFA: explicit states, transitions guarded by BDDs over the
/// vocabulary. Guards of a state are expected to partition the alphabet.
class Dfa {
 public:
  Dfa(std::shared_ptr<bdd::Manager> manager, std::vector<AtomId> atoms);

  StateId add_state(bool accepting, std::optional<ltlf::Formula> label = std::nullopt);
  void add_edge(StateId from, bdd::Ref guard, StateId to);
  void set_initial(StateId s) { initial_ = s; }
  void set_accepting(StateId s, bool value) { accepting_.at(s) = value; }

  std::size_t size() const { return edges_.size(); }
  std::size_t edge_count() const;
  StateId initial() const { return initial_; }
  bool accepting(StateId s) const { return accepting_[s]; }
  const std::vector<Edge>& edges(StateId s) const { return edges_[s]; }
  const std::optional<ltlf::Formula>& label(StateId s) const { return labels_[s]; }
  const std::vector<AtomId>& atoms() const { return atoms_; }
  bdd::Manager& manager() const { return *manager_; }
  const std::shared_ptr<bdd::Manager>& manager_ptr() const { return manager_; }

 private:
  std::shared_ptr<bdd::Manager> manager_;
  std::vector<AtomId> atoms_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<bool> accepting_;
  std::vector<std::optional<ltlf::Formula>> labels_;
  StateId initial_ = 0;
};

struct BuildOptions {
  static constexpr std::size_t kDefaultStateCap = 200000;

  std::size_t state_cap = kDefaultStateCap;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Builds the DFA of `phi` over `atoms` by progression. The start state is a
/// dedicated non-accepting state, so the empty trace is rejected; every
/// other state carries a residual formula and accepts iff eval_empty holds.
Dfa from_formula(Context& ctx, ltlf::Formula phi, std::span<const AtomId> atoms, const BuildOptions& options = {});

Dfa trim(const Dfa& a);
Dfa minimize(const Dfa& a);
Dfa product(std::span<const Dfa> operands, const BuildOptions& options = {});
/// Same automaton with the initial state moved along `h`.
Dfa progress(const Dfa& a, std::span<const Assignment> h);

StateId step(const Dfa& a, StateId s, const Assignment& w);
StateId run(const Dfa& a, StateId s, std::span<const Assignment> trace);
bool accepts(const Dfa& a, std::span<const Assignment> trace);

bool lang_equiv(const Dfa& a, const Dfa& b);
/// Language equality restricted to non-empty traces.
bool lang_equiv_nonempty(const Dfa& a, const Dfa& b);
/// Isomorphism of the reachable parts, comparing guards as BDD handles.
bool isomorphic(const Dfa& a, const Dfa& b);
/// Totality and determinism of every state's guards.
bool guards_partition(const Dfa& a);
bool is_empty(const Dfa& a);

std::string export_text(const Dfa& a, const Vocabulary& vocab);
std::string export_dot(const Dfa& a, const Vocabulary& vocab);
/// Reads the `dfa v1` text format; atoms are interned into `ctx`.
Dfa import_text(std::string_view text, Context& ctx);

/// Renders a guard as a disjunction of cubes over the automaton's atoms.
std::string guard_to_string(const Dfa& a, bdd::Ref guard, const Vocabulary& vocab);

}  // namespace isynth::automata
