#include "isynth/bdd.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <unordered_set>

#include "isynth/errors.hpp"

namespace isynth::bdd {

namespace {
std::atomic<std::uint32_t> next_tag{1};
}

std::size_t Manager::TripleHash::operator()(const std::array<std::uint32_t, 3>& t) const noexcept {
  std::uint64_t h = t[0];
  h = h * 0x9e3779b97f4a7c15ULL + t[1];
  h = h * 0x9e3779b97f4a7c15ULL + t[2];
  return static_cast<std::size_t>(h ^ (h >> 29));
}

Manager::Manager() : tag_(next_tag.fetch_add(1)) {
  nodes_.push_back({kTerminalVar, 0, 0});
  nodes_.push_back({kTerminalVar, 1, 1});
}

void Manager::check(Ref f) const {
  if (f.tag_ != tag_) throw ManagerMismatch();
}

std::uint32_t Manager::mk(Var v, std::uint32_t low, std::uint32_t high) {
  if (low == high) return low;
  std::array<std::uint32_t, 3> key{v, low, high};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({v, low, high});
  unique_.emplace(key, id);
  return id;
}

Ref Manager::var(Var v) { return Ref(tag_, mk(v, 0, 1)); }
Ref Manager::nvar(Var v) { return Ref(tag_, mk(v, 1, 0)); }

std::uint32_t Manager::ite_rec(std::uint32_t c, std::uint32_t t, std::uint32_t e) {
  if (c == 1) return t;
  if (c == 0) return e;
  if (t == e) return t;
  if (t == 1 && e == 0) return c;
  std::array<std::uint32_t, 3> key{c, t, e};
  if (auto it = ite_cache_.find(key); it != ite_cache_.end()) return it->second;
  Var v = std::min({level(c), level(t), level(e)});
  auto cof = [&](std::uint32_t n, bool hi) {
    if (level(n) != v) return n;
    return hi ? nodes_[n].high : nodes_[n].low;
  };
  std::uint32_t hi = ite_rec(cof(c, true), cof(t, true), cof(e, true));
  std::uint32_t lo = ite_rec(cof(c, false), cof(t, false), cof(e, false));
  std::uint32_t r = mk(v, lo, hi);
  ite_cache_.emplace(key, r);
  return r;
}

Ref Manager::ite(Ref c, Ref t, Ref e) {
  check(c);
  check(t);
  check(e);
  return Ref(tag_, ite_rec(c.index_, t.index_, e.index_));
}

Ref Manager::not_(Ref f) { return ite(f, zero(), one()); }
Ref Manager::and_(Ref f, Ref g) { return ite(f, g, zero()); }
Ref Manager::or_(Ref f, Ref g) { return ite(f, one(), g); }
Ref Manager::xor_(Ref f, Ref g) { return ite(f, not_(g), g); }

std::uint32_t Manager::quant_rec(std::uint32_t f, const std::vector<bool>& qvars, bool existential,
                                 std::unordered_map<std::uint32_t, std::uint32_t>& memo) {
  if (f < 2) return f;
  if (auto it = memo.find(f); it != memo.end()) return it->second;
  Var v = level(f);
  std::uint32_t lo = quant_rec(nodes_[f].low, qvars, existential, memo);
  std::uint32_t hi = quant_rec(nodes_[f].high, qvars, existential, memo);
  std::uint32_t r;
  if (v < qvars.size() && qvars[v]) {
    r = existential ? ite_rec(lo, 1, hi) : ite_rec(lo, hi, 0);
  } else {
    r = mk(v, lo, hi);
  }
  memo.emplace(f, r);
  return r;
}

Ref Manager::exists(Ref f, std::span<const Var> vars) {
  check(f);
  std::vector<bool> q;
  for (Var v : vars) {
    if (v >= q.size()) q.resize(v + 1, false);
    q[v] = true;
  }
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  return Ref(tag_, quant_rec(f.index_, q, true, memo));
}

Ref Manager::forall(Ref f, std::span<const Var> vars) {
  check(f);
  std::vector<bool> q;
  for (Var v : vars) {
    if (v >= q.size()) q.resize(v + 1, false);
    q[v] = true;
  }
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  return Ref(tag_, quant_rec(f.index_, q, false, memo));
}

std::uint32_t Manager::restrict_rec(std::uint32_t f, Var v, bool value,
                                    std::unordered_map<std::uint32_t, std::uint32_t>& memo) {
  if (f < 2 || level(f) > v) return f;
  if (level(f) == v) return value ? nodes_[f].high : nodes_[f].low;
  if (auto it = memo.find(f); it != memo.end()) return it->second;
  std::uint32_t r = mk(level(f), restrict_rec(nodes_[f].low, v, value, memo), restrict_rec(nodes_[f].high, v, value, memo));
  memo.emplace(f, r);
  return r;
}

Ref Manager::restrict(Ref f, Var v, bool value) {
  check(f);
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  return Ref(tag_, restrict_rec(f.index_, v, value, memo));
}

Ref Manager::cube(const Assignment& w, std::span<const Var> vars) {
  Ref r = one();
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) r = and_(r, w.contains(*it) ? var(*it) : nvar(*it));
  return r;
}

bool Manager::eval(Ref f, const Assignment& w) const {
  check(f);
  std::uint32_t n = f.index_;
  while (n >= 2) n = w.contains(nodes_[n].var) ? nodes_[n].high : nodes_[n].low;
  return n == 1;
}

std::vector<Var> Manager::support(Ref f) const {
  check(f);
  std::unordered_set<std::uint32_t> seen;
  std::vector<Var> vars;
  std::vector<std::uint32_t> stack{f.index_};
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (n < 2 || !seen.insert(n).second) continue;
    vars.push_back(nodes_[n].var);
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::optional<Assignment> Manager::any_sat(Ref f) {
  check(f);
  if (f.is_false()) return std::nullopt;
  std::vector<Var> rest = support(f);
  std::vector<AtomId> chosen;
  Ref g = f;
  // Greedy on the sorted list of true variables: stop as soon as the
  // remaining variables can all be false, otherwise take the smallest
  // variable that can be the next true one.
  auto all_false = [&](Ref h, std::size_t from) {
    for (std::size_t i = from; i < rest.size(); ++i) h = restrict(h, rest[i], false);
    return h;
  };
  std::size_t from = 0;
  while (!all_false(g, from).is_true()) {
    Ref prefix = g;
    for (std::size_t i = from; i < rest.size(); ++i) {
      Ref candidate = restrict(prefix, rest[i], true);
      if (!candidate.is_false()) {
        chosen.push_back(rest[i]);
        g = candidate;
        from = i + 1;
        break;
      }
      prefix = restrict(prefix, rest[i], false);
    }
  }
  return Assignment(std::move(chosen));
}

std::vector<std::string> Manager::cubes(Ref f, std::span<const Var> vars) const {
  check(f);
  std::vector<std::string> out;
  std::string cur(vars.size(), '-');
  auto pos_of = [&](Var v) -> std::size_t {
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) throw Error("BDD depends on a variable outside the cube vocabulary");
    return static_cast<std::size_t>(it - vars.begin());
  };
  std::function<void(std::uint32_t)> walk = [&](std::uint32_t n) {
    if (n == 0) return;
    if (n == 1) {
      out.push_back(cur);
      return;
    }
    std::size_t p = pos_of(nodes_[n].var);
    cur[p] = '0';
    walk(nodes_[n].low);
    cur[p] = '1';
    walk(nodes_[n].high);
    cur[p] = '-';
  };
  walk(f.index_);
  return out;
}

std::size_t Manager::dag_size(Ref f) const {
  check(f);
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{f.index_};
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second || n < 2) continue;
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  return seen.size();
}

Ref Manager::from_prop(ltlf::Formula f) {
  using ltlf::Kind;
  switch (f.kind()) {
    case Kind::True: return one();
    case Kind::False: return zero();
    case Kind::Prop: return var(f.atom());
    case Kind::NotProp: return nvar(f.atom());
    case Kind::And: {
      Ref r = one();
      for (auto c : f.children()) r = and_(r, from_prop(c));
      return r;
    }
    case Kind::Or: {
      Ref r = zero();
      for (auto c : f.children()) r = or_(r, from_prop(c));
      return r;
    }
    default:
      throw NonPropositional();
  }
}

}  // namespace isynth::bdd
