#include "isynth/ltlf.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <unordered_set>

#include "isynth/errors.hpp"

namespace isynth {

namespace {

bool is_keyword(std::string_view s) {
  return s == "true" || s == "false" || s == "X" || s == "N" || s == "U" || s == "R" || s == "F" || s == "G";
}

}  // namespace

bool Vocabulary::valid_name(std::string_view name) {
  if (name.empty() || is_keyword(name)) return false;
  auto head = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_' || u == '-';
  });
}

AtomId Vocabulary::intern(std::string_view name) {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  if (!valid_name(name)) throw Error("invalid atom name '" + std::string(name) + "'");
  auto id = static_cast<AtomId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  return id;
}

std::optional<AtomId> Vocabulary::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  return std::nullopt;
}

AtomId Vocabulary::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw UnknownAtom(std::string(name));
}

Assignment::Assignment(std::initializer_list<AtomId> atoms) : Assignment(std::vector<AtomId>(atoms)) {}

Assignment::Assignment(std::vector<AtomId> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool Assignment::contains(AtomId a) const { return std::binary_search(atoms_.begin(), atoms_.end(), a); }

void Assignment::set(AtomId a, bool value) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
  bool present = it != atoms_.end() && *it == a;
  if (value && !present) atoms_.insert(it, a);
  if (!value && present) atoms_.erase(it);
}

Assignment Assignment::restricted_to(std::span<const AtomId> atoms) const {
  std::vector<AtomId> kept;
  for (AtomId a : atoms_)
    if (std::find(atoms.begin(), atoms.end(), a) != atoms.end()) kept.push_back(a);
  return Assignment(std::move(kept));
}

Assignment Assignment::merged(const Assignment& other) const {
  std::vector<AtomId> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return Assignment(std::move(all));
}

namespace ltlf {

struct FormulaFactory::Caches {
  std::unordered_map<const Node*, Formula> simplify;
  std::unordered_map<const Node*, Formula> negate;
  std::unordered_map<const Node*, Formula> unfold;
};

std::vector<Formula> Formula::children() const {
  std::vector<Formula> out;
  out.reserve(node_->children.size());
  for (const Node* c : node_->children) out.emplace_back(c);
  return out;
}

std::size_t FormulaFactory::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ULL ^ (std::size_t{k.atom} << 7);
  for (const Node* c : k.children) h = (h ^ std::hash<const Node*>{}(c)) * 0x100000001b3ULL + 0x9e37;
  return h;
}

FormulaFactory::FormulaFactory() : caches_(std::make_unique<Caches>()) {
  top_ = make(Kind::True, 0, {});
  bottom_ = make(Kind::False, 0, {});
}

FormulaFactory::~FormulaFactory() = default;

Formula FormulaFactory::make(Kind kind, AtomId atom, std::vector<const Node*> children) {
  Key key{kind, atom, std::move(children)};
  if (auto it = table_.find(key); it != table_.end()) return Formula(it->second);
  nodes_.push_back(Node{kind, atom, static_cast<std::uint32_t>(nodes_.size()), key.children});
  const Node* n = &nodes_.back();
  table_.emplace(std::move(key), n);
  return Formula(n);
}

Formula FormulaFactory::make_nary(Kind kind, std::vector<Formula> children) {
  std::sort(children.begin(), children.end(), [](Formula a, Formula b) { return a.id() < b.id(); });
  children.erase(std::unique(children.begin(), children.end()), children.end());
  if (children.empty()) return kind == Kind::And ? top_ : bottom_;
  if (children.size() == 1) return children.front();
  std::vector<const Node*> raw;
  raw.reserve(children.size());
  for (Formula c : children) raw.push_back(c.node());
  return make(kind, 0, std::move(raw));
}

Formula FormulaFactory::prop(AtomId a) { return make(Kind::Prop, a, {}); }
Formula FormulaFactory::not_prop(AtomId a) { return make(Kind::NotProp, a, {}); }
Formula FormulaFactory::conj(std::vector<Formula> children) { return make_nary(Kind::And, std::move(children)); }
Formula FormulaFactory::disj(std::vector<Formula> children) { return make_nary(Kind::Or, std::move(children)); }
Formula FormulaFactory::next(Formula f) { return make(Kind::Next, 0, {f.node()}); }
Formula FormulaFactory::weak_next(Formula f) { return make(Kind::WeakNext, 0, {f.node()}); }
Formula FormulaFactory::until(Formula l, Formula r) { return make(Kind::Until, 0, {l.node(), r.node()}); }
Formula FormulaFactory::release(Formula l, Formula r) { return make(Kind::Release, 0, {l.node(), r.node()}); }

Formula FormulaFactory::rebuild(Formula f, std::vector<Formula> children) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
    case Kind::NotProp:
      return f;
    case Kind::And:
      return conj(std::move(children));
    case Kind::Or:
      return disj(std::move(children));
    case Kind::Next:
      return next(children[0]);
    case Kind::WeakNext:
      return weak_next(children[0]);
    case Kind::Until:
      return until(children[0], children[1]);
    case Kind::Release:
      return release(children[0], children[1]);
  }
  return f;
}

Formula FormulaFactory::negate(Formula f) {
  auto& cache = caches_->negate;
  if (auto it = cache.find(f.node()); it != cache.end()) return it->second;
  Formula out;
  switch (f.kind()) {
    case Kind::True: out = bottom_; break;
    case Kind::False: out = top_; break;
    case Kind::Prop: out = not_prop(f.atom()); break;
    case Kind::NotProp: out = prop(f.atom()); break;
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (Formula c : f.children()) kids.push_back(negate(c));
      out = f.kind() == Kind::And ? disj(std::move(kids)) : conj(std::move(kids));
      break;
    }
    case Kind::Next: out = weak_next(negate(f.child())); break;
    case Kind::WeakNext: out = next(negate(f.child())); break;
    case Kind::Until: out = release(negate(f.lhs()), negate(f.rhs())); break;
    case Kind::Release: out = until(negate(f.lhs()), negate(f.rhs())); break;
  }
  cache.emplace(f.node(), out);
  return out;
}

std::uint64_t size(Formula f) {
  std::unordered_map<const Node*, std::uint64_t> memo;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::function<std::uint64_t(Formula)> go = [&](Formula g) -> std::uint64_t {
    if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
    std::uint64_t total = 1;
    for (Formula c : g.children()) {
      std::uint64_t s = go(c);
      total = (kMax - total < s) ? kMax : total + s;
    }
    memo.emplace(g.node(), total);
    return total;
  };
  return go(f);
}

std::vector<AtomId> atoms_of(Formula f) {
  std::unordered_set<const Node*> seen;
  std::vector<AtomId> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g.node()).second) continue;
    if (g.is_literal()) out.push_back(g.atom());
    for (Formula c : g.children()) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t depth(Formula f) {
  std::unordered_map<const Node*, std::size_t> memo;
  std::function<std::size_t(Formula)> go = [&](Formula g) -> std::size_t {
    if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
    std::size_t d = 0;
    for (Formula c : g.children()) d = std::max(d, go(c));
    memo.emplace(g.node(), d + 1);
    return d + 1;
  };
  return go(f);
}

bool eval(std::span<const Assignment> trace, Formula f) {
  if (trace.empty()) throw EmptyTraceError();
  const std::size_t n = trace.size();
  std::unordered_map<std::uint64_t, bool> memo;
  std::function<bool(Formula, std::size_t)> sat = [&](Formula g, std::size_t i) -> bool {
    std::uint64_t key = (std::uint64_t{g.id()} << 20) | i;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool r = false;
    switch (g.kind()) {
      case Kind::True: r = true; break;
      case Kind::False: r = false; break;
      case Kind::Prop: r = trace[i].contains(g.atom()); break;
      case Kind::NotProp: r = !trace[i].contains(g.atom()); break;
      case Kind::And:
        r = true;
        for (Formula c : g.children())
          if (!sat(c, i)) { r = false; break; }
        break;
      case Kind::Or:
        for (Formula c : g.children())
          if (sat(c, i)) { r = true; break; }
        break;
      case Kind::Next: r = i + 1 < n && sat(g.child(), i + 1); break;
      case Kind::WeakNext: r = i + 1 >= n || sat(g.child(), i + 1); break;
      case Kind::Until:
        r = false;
        for (std::size_t j = i; j < n; ++j) {
          if (sat(g.rhs(), j)) { r = true; break; }
          if (!sat(g.lhs(), j)) break;
        }
        break;
      case Kind::Release:
        r = true;
        for (std::size_t j = i; j < n; ++j) {
          if (!sat(g.rhs(), j)) { r = false; break; }
          if (sat(g.lhs(), j)) break;
        }
        break;
    }
    memo.emplace(key, r);
    return r;
  };
  return sat(f, 0);
}

bool eval_empty(Formula f) {
  std::unordered_map<const Node*, bool> memo;
  std::function<bool(Formula)> go = [&](Formula g) -> bool {
    switch (g.kind()) {
      case Kind::True:
      case Kind::WeakNext:
      case Kind::Release:
        return true;
      case Kind::False:
      case Kind::Prop:
      case Kind::NotProp:
      case Kind::Next:
      case Kind::Until:
        return false;
      case Kind::And:
      case Kind::Or: {
        if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
        bool is_and = g.kind() == Kind::And;
        bool r = is_and;
        for (Formula c : g.children()) {
          if (go(c) != is_and) {
            r = !is_and;
            break;
          }
        }
        memo.emplace(g.node(), r);
        return r;
      }
    }
    return false;
  };
  return go(f);
}

Formula simplify(FormulaFactory& ff, Formula f) {
  auto& cache = ff.caches().simplify;
  if (auto it = cache.find(f.node()); it != cache.end()) return it->second;
  Formula out;
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
    case Kind::NotProp:
      out = f;
      break;
    case Kind::And:
    case Kind::Or: {
      const bool is_and = f.kind() == Kind::And;
      const Kind unit = is_and ? Kind::True : Kind::False;
      const Kind zero = is_and ? Kind::False : Kind::True;
      std::vector<Formula> kids;
      bool annihilated = false;
      auto push = [&](Formula c) {
        if (c.kind() == zero) annihilated = true;
        else if (c.kind() != unit) kids.push_back(c);
      };
      for (Formula c : f.children()) {
        Formula s = simplify(ff, c);
        if (s.kind() == f.kind()) {
          for (Formula g : s.children()) push(g);
        } else {
          push(s);
        }
      }
      if (!annihilated) {
        std::unordered_set<AtomId> pos, neg;
        for (Formula c : kids) {
          if (c.kind() == Kind::Prop) pos.insert(c.atom());
          if (c.kind() == Kind::NotProp) neg.insert(c.atom());
        }
        for (AtomId a : pos)
          if (neg.count(a)) annihilated = true;
      }
      if (annihilated) out = is_and ? ff.bottom() : ff.top();
      else out = is_and ? ff.conj(std::move(kids)) : ff.disj(std::move(kids));
      break;
    }
    default: {
      std::vector<Formula> kids;
      for (Formula c : f.children()) kids.push_back(simplify(ff, c));
      out = ff.rebuild(f, std::move(kids));
      break;
    }
  }
  cache.emplace(f.node(), out);
  return out;
}

Formula prog_step_raw(FormulaFactory& ff, Formula f, const Assignment& w) {
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(Formula)> prog = [&](Formula g) -> Formula {
    if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
    Formula out;
    switch (g.kind()) {
      case Kind::True: out = ff.top(); break;
      case Kind::False: out = ff.bottom(); break;
      case Kind::Prop: out = w.contains(g.atom()) ? ff.top() : ff.bottom(); break;
      case Kind::NotProp: out = w.contains(g.atom()) ? ff.bottom() : ff.top(); break;
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> kids;
        for (Formula c : g.children()) kids.push_back(prog(c));
        out = g.kind() == Kind::And ? ff.conj(std::move(kids)) : ff.disj(std::move(kids));
        break;
      }
      case Kind::Next: out = ff.conj(g.child(), ff.not_end()); break;
      case Kind::WeakNext: out = ff.disj(g.child(), ff.end()); break;
      case Kind::Until:
        out = ff.disj(prog(g.rhs()), ff.conj(prog(g.lhs()), ff.conj(g, ff.not_end())));
        break;
      case Kind::Release:
        out = ff.conj(prog(g.rhs()), ff.disj(prog(g.lhs()), ff.disj(g, ff.end())));
        break;
    }
    memo.emplace(g.node(), out);
    return out;
  };
  return prog(f);
}

Formula prog_step(FormulaFactory& ff, Formula f, const Assignment& w) {
  return simplify(ff, prog_step_raw(ff, f, w));
}

Formula prog_trace(FormulaFactory& ff, Formula f, std::span<const Assignment> h, bool simplified) {
  for (const Assignment& w : h) f = simplified ? prog_step(ff, f, w) : prog_step_raw(ff, f, w);
  return f;
}

Formula unfold(FormulaFactory& ff, Formula f) {
  auto& cache = ff.caches().unfold;
  if (auto it = cache.find(f.node()); it != cache.end()) return it->second;
  Formula out;
  switch (f.kind()) {
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (Formula c : f.children()) kids.push_back(unfold(ff, c));
      out = ff.rebuild(f, std::move(kids));
      break;
    }
    case Kind::Until:
      out = ff.disj(unfold(ff, f.rhs()), ff.conj(unfold(ff, f.lhs()), ff.next(f)));
      break;
    case Kind::Release:
      out = ff.conj(unfold(ff, f.rhs()), ff.disj(unfold(ff, f.lhs()), ff.weak_next(f)));
      break;
    default:
      out = f;
      break;
  }
  cache.emplace(f.node(), out);
  return out;
}

Formula substitute(FormulaFactory& ff, Formula f, AtomId a, bool value) {
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    switch (g.kind()) {
      case Kind::Prop:
        return g.atom() == a ? (value ? ff.top() : ff.bottom()) : g;
      case Kind::NotProp:
        return g.atom() == a ? (value ? ff.bottom() : ff.top()) : g;
      case Kind::And:
      case Kind::Or: {
        if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
        std::vector<Formula> kids;
        for (Formula c : g.children()) kids.push_back(go(c));
        Formula out = ff.rebuild(g, std::move(kids));
        memo.emplace(g.node(), out);
        return out;
      }
      default:
        return g;
    }
  };
  return go(f);
}

std::optional<AtomId> current_atom(Formula f) {
  std::optional<AtomId> best;
  std::unordered_set<const Node*> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.is_literal()) {
      if (!best || g.atom() < *best) best = g.atom();
    } else if (g.kind() == Kind::And || g.kind() == Kind::Or) {
      if (!seen.insert(g.node()).second) continue;
      for (Formula c : g.children()) stack.push_back(c);
    }
  }
  return best;
}

Formula shift(FormulaFactory& ff, Formula f) {
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    switch (g.kind()) {
      case Kind::Next: return ff.conj(g.child(), ff.not_end());
      case Kind::WeakNext: return ff.disj(g.child(), ff.end());
      case Kind::And:
      case Kind::Or: {
        if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
        std::vector<Formula> kids;
        for (Formula c : g.children()) kids.push_back(go(c));
        Formula out = ff.rebuild(g, std::move(kids));
        memo.emplace(g.node(), out);
        return out;
      }
      default:
        return g;
    }
  };
  return go(f);
}

namespace {

// Binding strength used by the printer; mirrors the parser's precedence.
int strength(Formula f) {
  switch (f.kind()) {
    case Kind::Or: return 1;
    case Kind::And: return 2;
    case Kind::Until:
    case Kind::Release:
      if (f.kind() == Kind::Until && f.lhs().kind() == Kind::True) return 4;
      if (f.kind() == Kind::Release && f.lhs().kind() == Kind::False) return 4;
      return 3;
    default: return 4;
  }
}

void print(const Vocabulary& vocab, Formula f, std::string& out);

void print_operand(const Vocabulary& vocab, Formula f, int min_strength, std::string& out) {
  if (strength(f) < min_strength) {
    out += '(';
    print(vocab, f, out);
    out += ')';
  } else {
    print(vocab, f, out);
  }
}

void print_unary(const Vocabulary& vocab, const char* op, Formula f, std::string& out) {
  out += op;
  out += '(';
  print(vocab, f, out);
  out += ')';
}

void print(const Vocabulary& vocab, Formula f, std::string& out) {
  switch (f.kind()) {
    case Kind::True: out += "true"; break;
    case Kind::False: out += "false"; break;
    case Kind::Prop: out += vocab.name(f.atom()); break;
    case Kind::NotProp:
      out += '!';
      out += vocab.name(f.atom());
      break;
    case Kind::And:
    case Kind::Or: {
      const char* sep = f.kind() == Kind::And ? " & " : " | ";
      int need = f.kind() == Kind::And ? 3 : 2;
      bool first = true;
      for (Formula c : f.children()) {
        if (!first) out += sep;
        first = false;
        print_operand(vocab, c, need, out);
      }
      break;
    }
    case Kind::Next: print_unary(vocab, "X", f.child(), out); break;
    case Kind::WeakNext: print_unary(vocab, "N", f.child(), out); break;
    case Kind::Until:
    case Kind::Release:
      if (strength(f) == 4) {
        print_unary(vocab, f.kind() == Kind::Until ? "F" : "G", f.rhs(), out);
      } else {
        // right-associative: the left operand must bind tighter
        print_operand(vocab, f.lhs(), 4, out);
        out += f.kind() == Kind::Until ? " U " : " R ";
        print_operand(vocab, f.rhs(), 3, out);
      }
      break;
  }
}

}  // namespace

std::string to_string(const Vocabulary& vocab, Formula f) {
  std::string out;
  print(vocab, f, out);
  return out;
}

}  // namespace ltlf
}  // namespace isynth
