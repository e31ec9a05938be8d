#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "isynth/ltlf.hpp"

namespace isynth::bdd {

/// Variable index; in a session manager this is the AtomId, so the variable
/// order is the atom registration order.
using Var = std::uint32_t;

/// Handle to a node of one manager. Within a manager, equal handles denote
/// equal Boolean functions.
class Ref {
 public:
  Ref() = default;

  std::uint32_t index() const { return index_; }
  bool is_false() const { return index_ == 0; }
  bool is_true() const { return index_ == 1; }
  bool is_const() const { return index_ < 2; }

  friend bool operator==(Ref, Ref) = default;

 private:
  friend class Manager;
  Ref(std::uint32_t tag, std::uint32_t index) : tag_(tag), index_(index) {}

  std::uint32_t tag_ = 0;
  std::uint32_t index_ = 0;
};

struct RefHash {
  std::size_t operator()(Ref r) const noexcept { return std::hash<std::uint32_t>{}(r.index()); }
};

/// Reduced ordered BDDs without complement edges. Nodes are never freed.
class Manager {
 public:
  Manager();
  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;

  Ref zero() const { return Ref(tag_, 0); }
  Ref one() const { return Ref(tag_, 1); }
  Ref constant(bool v) const { return v ? one() : zero(); }
  Ref var(Var v);
  Ref nvar(Var v);

  Ref not_(Ref f);
  Ref and_(Ref f, Ref g);
  Ref or_(Ref f, Ref g);
  Ref xor_(Ref f, Ref g);
  Ref ite(Ref c, Ref t, Ref e);
  Ref exists(Ref f, std::span<const Var> vars);
  Ref forall(Ref f, std::span<const Var> vars);
  Ref restrict(Ref f, Var v, bool value);
  Ref cube(const Assignment& w, std::span<const Var> vars);

  bool eval(Ref f, const Assignment& w) const;
  /// Smallest satisfying assignment over the support of `f` (unsupported
  /// variables false), ordering assignments by their sorted list of true
  /// variables; nullopt iff f is false.
  std::optional<Assignment> any_sat(Ref f);
  std::vector<Var> support(Ref f) const;
  /// Disjoint cubes covering `f`, each over `vars` as a string of 0/1/-.
  std::vector<std::string> cubes(Ref f, std::span<const Var> vars) const;
  std::size_t dag_size(Ref f) const;

  /// Converts a propositional formula; throws NonPropositional otherwise.
  Ref from_prop(ltlf::Formula f);

  std::size_t node_count() const { return nodes_.size(); }
  Var top_var(Ref f) const { return nodes_[f.index_].var; }
  Ref low(Ref f) const { return Ref(tag_, nodes_[f.index_].low); }
  Ref high(Ref f) const { return Ref(tag_, nodes_[f.index_].high); }

 private:
  struct NodeData {
    Var var;
    std::uint32_t low;
    std::uint32_t high;
  };
  struct TripleHash {
    std::size_t operator()(const std::array<std::uint32_t, 3>& t) const noexcept;
  };

  void check(Ref f) const;
  std::uint32_t mk(Var v, std::uint32_t low, std::uint32_t high);
  std::uint32_t ite_rec(std::uint32_t c, std::uint32_t t, std::uint32_t e);
  std::uint32_t quant_rec(std::uint32_t f, const std::vector<bool>& qvars, bool existential,
                          std::unordered_map<std::uint32_t, std::uint32_t>& memo);
  std::uint32_t restrict_rec(std::uint32_t f, Var v, bool value, std::unordered_map<std::uint32_t, std::uint32_t>& memo);
  Var level(std::uint32_t n) const { return nodes_[n].var; }

  static constexpr Var kTerminalVar = 0xffffffffu;

  std::uint32_t tag_;
  std::vector<NodeData> nodes_;
  std::unordered_map<std::array<std::uint32_t, 3>, std::uint32_t, TripleHash> unique_;
  std::unordered_map<std::array<std::uint32_t, 3>, std::uint32_t, TripleHash> ite_cache_;
};

}  // namespace isynth::bdd
