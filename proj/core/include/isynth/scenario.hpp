#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "isynth/context.hpp"
#include "isynth/game.hpp"

namespace isynth {

/// Atom names of a partition as they appear in a file, before interning.
struct PartitionNames {
  std::vector<std::string> inputs;   ///< environment atoms
  std::vector<std::string> outputs;  ///< agent atoms
};

/// Reads `.inputs: x1 x2` / `.outputs: y1 y2` (either order, `#` comments).
PartitionNames parse_partition_file(std::string_view text);

/// Interns outputs first, then inputs. Throws Error on overlap or bad names.
game::AtomPartition make_partition(Context& ctx, const PartitionNames& names);

struct Directive {
  enum class Kind { Goal, Step };
  Kind kind;
  std::string text;  ///< goal formula or raw env assignment
  std::size_t line = 0;
};

struct Scenario {
  PartitionNames names;
  std::vector<Directive> directives;
};

/// Line-oriented `scenario v1` format: `inputs ...`, `outputs ...`, then
/// `goal <formula>` and `step <atom=0|1 ...>` directives. Throws FormatError.
Scenario parse_scenario(std::string_view text);

/// `atom=0|1` pairs separated by whitespace, covering exactly `expected`.
/// Throws FormatError (line 0) on malformed or incomplete input.
Assignment parse_assignment(std::string_view text, const Vocabulary& vocab, std::span<const AtomId> expected);

/// A trace literal: either `{a,b},{},{c}` or `a=1 b=0;a=0 b=1`. In the
/// second form atoms left out of a step are false.
Trace parse_trace_literal(std::string_view text, Vocabulary& vocab);

}  // namespace isynth
