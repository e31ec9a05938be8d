#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace isynth {

using AtomId = std::uint32_t;

/// Interns atom names; ids are dense and follow registration order.
class Vocabulary {
 public:
  static bool valid_name(std::string_view name);

  AtomId intern(std::string_view name);
  std::optional<AtomId> find(std::string_view name) const;
  /// Like find() but throws UnknownAtom.
  AtomId at(std::string_view name) const;
  const std::string& name(AtomId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, AtomId> ids_;
};

/// A propositional interpretation: the set of atoms that are true.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<AtomId> atoms);
  explicit Assignment(std::vector<AtomId> atoms);

  bool contains(AtomId a) const;
  void set(AtomId a, bool value);
  bool empty() const { return atoms_.empty(); }
  const std::vector<AtomId>& atoms() const { return atoms_; }

  Assignment restricted_to(std::span<const AtomId> atoms) const;
  Assignment merged(const Assignment& other) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<AtomId> atoms_;  // sorted, unique
};

using Trace = std::vector<Assignment>;

namespace ltlf {

enum class Kind : std::uint8_t { True, False, Prop, NotProp, And, Or, Next, WeakNext, Until, Release };

struct Node {
  Kind kind;
  AtomId atom;
  std::uint32_t id;
  std::vector<const Node*> children;
};

/// Handle to a hash-consed NNF formula. Structurally equal formulas share one node,
/// so equality is pointer equality.
class Formula {
 public:
  Formula() = default;
  explicit Formula(const Node* node) : node_(node) {}

  Kind kind() const { return node_->kind; }
  AtomId atom() const { return node_->atom; }
  std::uint32_t id() const { return node_->id; }
  std::size_t arity() const { return node_->children.size(); }
  Formula child(std::size_t i = 0) const { return Formula(node_->children[i]); }
  Formula lhs() const { return child(0); }
  Formula rhs() const { return child(1); }
  std::vector<Formula> children() const;
  const Node* node() const { return node_; }
  explicit operator bool() const { return node_ != nullptr; }

  bool is_const() const { return kind() == Kind::True || kind() == Kind::False; }
  bool is_literal() const { return kind() == Kind::Prop || kind() == Kind::NotProp; }

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }

 private:
  const Node* node_ = nullptr;
};

struct FormulaHash {
  std::size_t operator()(Formula f) const noexcept { return std::hash<const Node*>{}(f.node()); }
};

/// Owns and hash-conses formula nodes. And/Or children are sorted by id and
/// deduplicated; a single-child And/Or collapses to its child.
class FormulaFactory {
 public:
  FormulaFactory();
  ~FormulaFactory();
  FormulaFactory(const FormulaFactory&) = delete;
  FormulaFactory& operator=(const FormulaFactory&) = delete;

  Formula top() const { return top_; }
  Formula bottom() const { return bottom_; }
  Formula prop(AtomId a);
  Formula not_prop(AtomId a);
  Formula literal(AtomId a, bool positive) { return positive ? prop(a) : not_prop(a); }
  Formula conj(std::vector<Formula> children);
  Formula disj(std::vector<Formula> children);
  Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{a, b}); }
  Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{a, b}); }
  Formula next(Formula f);
  Formula weak_next(Formula f);
  Formula until(Formula l, Formula r);
  Formula release(Formula l, Formula r);
  Formula eventually(Formula f) { return until(top_, f); }
  Formula always(Formula f) { return release(bottom_, f); }
  /// F(true): the trace does not end here.
  Formula not_end() { return eventually(top_); }
  /// G(false): the trace ends here.
  Formula end() { return always(bottom_); }

  /// Rebuilds `f` with the same kind/atom and new children.
  Formula rebuild(Formula f, std::vector<Formula> children);
  /// NNF negation (duals pushed to the atoms).
  Formula negate(Formula f);

  std::size_t node_count() const { return nodes_.size(); }

  struct Caches;
  Caches& caches() { return *caches_; }

 private:
  Formula make(Kind kind, AtomId atom, std::vector<const Node*> children);
  Formula make_nary(Kind kind, std::vector<Formula> children);

  struct Key {
    Kind kind;
    AtomId atom;
    std::vector<const Node*> children;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  std::deque<Node> nodes_;
  std::unordered_map<Key, const Node*, KeyHash> table_;
  Formula top_;
  Formula bottom_;
  std::unique_ptr<Caches> caches_;
};

/// Number of nodes of the abstract syntax tree (shared subtrees counted each time).
std::uint64_t size(Formula f);
/// Atoms occurring anywhere in `f`, ascending.
std::vector<AtomId> atoms_of(Formula f);
/// Depth of the syntax tree (a leaf has depth 1).
std::size_t depth(Formula f);

/// Satisfaction of `f` at position 0 of a non-empty trace.
bool eval(std::span<const Assignment> trace, Formula f);
/// Residual acceptance when the trace ends now.
bool eval_empty(Formula f);

Formula simplify(FormulaFactory& ff, Formula f);
/// One progression step following the rule table exactly, without simplification.
Formula prog_step_raw(FormulaFactory& ff, Formula f, const Assignment& w);
/// prog_step_raw followed by simplify.
Formula prog_step(FormulaFactory& ff, Formula f, const Assignment& w);
Formula prog_trace(FormulaFactory& ff, Formula f, std::span<const Assignment> h, bool simplified = true);

/// Unfolds Until/Release one step so that every atom occurring outside a
/// Next/WeakNext refers to the current position.
Formula unfold(FormulaFactory& ff, Formula f);
/// Fixes the current-position value of atom `a` in an unfolded formula.
Formula substitute(FormulaFactory& ff, Formula f, AtomId a, bool value);
/// Smallest atom occurring outside Next/WeakNext, if any.
std::optional<AtomId> current_atom(Formula f);
/// Replaces X c by c & F(true) and N c by c | G(false) in a formula with no current atoms.
Formula shift(FormulaFactory& ff, Formula f);

std::string to_string(const Vocabulary& vocab, Formula f);

}  // namespace ltlf
}  // namespace isynth
