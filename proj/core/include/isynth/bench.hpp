#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isynth/engine.hpp"

namespace isynth::bench {

enum class FamilyKind { Tireworld, Counter, Plants, Requests };

/// Family and its size parameters: ℓ (tireworld), k (counter), p (plants),
/// or i services with j actions each (requests, uses both fields).
struct FamilyParams {
  FamilyKind kind = FamilyKind::Plants;
  std::size_t first = 1;
  std::size_t second = 1;
};

/// "tireworld", "counter", "plants", "requests" plus a parameter string such
/// as "l=2", "3", or "i=1:j=2". Throws Error on bad input.
FamilyParams parse_family(std::string_view name, std::string_view params);
std::string family_name(FamilyKind k);
/// Canonical parameter string, e.g. "l=2" or "i=1:j=1".
std::string params_string(const FamilyParams& p);

struct Family {
  std::string name;
  std::string params;
  game::AtomPartition partition;
  /// Goal n, as formula text over the family's atoms.
  std::function<std::string(std::size_t)> goal_text;
  /// Warnings raised while generating goals (counter overflow).
  std::function<std::vector<std::string>(std::size_t)> warnings;

  /// Parsed and simplified goal n in `ctx`.
  ltlf::Formula goal(Context& ctx, std::size_t n) const;
};

/// Goal 0 is the original goal: the domain model conjoined with the n = 0
/// visiting sequence. Later goals are the bare visiting sequences.
Family gen_tireworld(Context& ctx, std::size_t locations);
/// Goal 0 carries the counter specification; targets wrap modulo 2^k.
Family gen_counter(Context& ctx, std::size_t bits);
Family gen_plants(Context& ctx, std::size_t plants);
Family gen_requests(Context& ctx, std::size_t services, std::size_t actions);
Family make_family(Context& ctx, const FamilyParams& p);

enum class PolicyKind { Random, Passive };

struct BenchSpec {
  FamilyParams family;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  double timeout_s = 60;
  engine::Mode mode = engine::Mode::DP;
  PolicyKind policy = PolicyKind::Random;
  std::uint64_t seed = 0;
  std::size_t steps_per_goal = 1;
  std::size_t state_cap = automata::BuildOptions::kDefaultStateCap;
  /// When false, add_ms is written as 0 so that CSVs are reproducible.
  bool record_times = true;
};

struct ResultRow {
  std::string family;
  std::string params;
  std::size_t goal_n = 0;
  std::string engine;
  /// realizable, unrealizable, timeout or state-cap
  std::string verdict;
  double add_ms = 0;
  std::size_t new_dfa_states = 0;
  std::size_t arena_states = 0;
  std::size_t episode_steps = 0;
  std::uint64_t seed = 0;
};

struct InstanceResult {
  std::vector<ResultRow> rows;
  /// Outcome of the closing episode, absent if it did not run.
  std::optional<engine::LogCheck> check;
  bool step_limit = false;
  std::vector<std::string> warnings;
};

/// Observer called after every addition with the goal index and verdict.
using AddHook = std::function<void(std::size_t, const engine::Session&, const engine::Verdict&)>;

/// Adds goals n_min..n_max in order, playing steps_per_goal steps after each
/// realizable addition, then runs an episode to joint acceptance and checks
/// it against the trace semantics.
InstanceResult run_instance(const BenchSpec& spec, const AddHook& hook = {});
InstanceResult run_instance(const BenchSpec& spec, const std::shared_ptr<Context>& ctx, const AddHook& hook = {});

/// Runs independent instances on up to `jobs` threads; result order follows
/// `specs`.
std::vector<InstanceResult> run_instances(const std::vector<BenchSpec>& specs, std::size_t jobs);

extern const char* const kCsvHeader;
std::string to_csv(const std::vector<ResultRow>& rows);
/// Throws IoError.
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace isynth::bench
