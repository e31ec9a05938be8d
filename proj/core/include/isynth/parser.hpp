#pragma once

#include <string_view>
#include <vector>

#include "isynth/ltlf.hpp"

namespace isynth {

/// Surface syntax tree as produced by the parser, before NNF conversion.
struct RawFormula {
  enum class Kind { True, False, Atom, Not, And, Or, Implies, Iff, Next, WeakNext, Until, Release, Eventually, Always };

  Kind kind = Kind::True;
  AtomId atom = 0;
  std::vector<RawFormula> children;

  static RawFormula leaf(Kind k) { return RawFormula{k, 0, {}}; }
  static RawFormula atom_of(AtomId a) { return RawFormula{Kind::Atom, a, {}}; }
  static RawFormula unary(Kind k, RawFormula c);
  static RawFormula binary(Kind k, RawFormula l, RawFormula r);

  bool operator==(const RawFormula&) const = default;
};

enum class AtomPolicy {
  Register,  ///< unseen atoms are added to the vocabulary
  Strict,    ///< unseen atoms raise UnknownAtom
};

/// Grammar, loosest to tightest: `<->` (right), `->` (right), `|`, `&`,
/// `U`/`R` (right), unary `! X N F G`. `#` starts a line comment.
RawFormula parse(std::string_view text, Vocabulary& vocab, AtomPolicy policy = AtomPolicy::Register);

ltlf::Formula to_nnf(ltlf::FormulaFactory& ff, const RawFormula& raw);

/// parse + to_nnf + simplify.
ltlf::Formula parse_goal(std::string_view text, Vocabulary& vocab, ltlf::FormulaFactory& ff,
                         AtomPolicy policy = AtomPolicy::Register);

}  // namespace isynth
