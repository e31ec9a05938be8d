#include <sstream>

#include "isynth/dfa.hpp"
#include "isynth/errors.hpp"

namespace isynth::automata {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t to_index(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw FormatError(line, "expected a state number, found '" + tok + "'");
  return std::stoul(tok);
}

std::string cube_literals(const std::string& cube, const Dfa& a, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < cube.size(); ++i) {
    if (cube[i] == '-') continue;
    if (!out.empty()) out += " & ";
    if (cube[i] == '0') out += '!';
    out += vocab.name(a.atoms()[i]);
  }
  return out.empty() ? "true" : out;
}

}  // namespace

std::string guard_to_string(const Dfa& a, bdd::Ref guard, const Vocabulary& vocab) {
  auto cubes = a.manager().cubes(guard, a.atoms());
  if (cubes.empty()) return "false";
  std::string out;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (i) out += " | ";
    out += cube_literals(cubes[i], a, vocab);
  }
  return out;
}

std::string export_text(const Dfa& a, const Vocabulary& vocab) {
  std::ostringstream os;
  os << "dfa v1\n";
  os << "atoms";
  for (AtomId id : a.atoms()) os << ' ' << vocab.name(id);
  os << "\nstates " << a.size() << "\ninitial " << a.initial() << "\naccepting";
  for (StateId s = 0; s < a.size(); ++s)
    if (a.accepting(s)) os << ' ' << s;
  os << '\n';
  for (StateId s = 0; s < a.size(); ++s) {
    for (const Edge& e : a.edges(s)) {
      os << "edge " << s << ' ' << e.target << ' ';
      auto cubes = a.manager().cubes(e.guard, a.atoms());
      for (std::size_t i = 0; i < cubes.size(); ++i) os << (i ? "," : "") << cubes[i];
      os << '\n';
    }
  }
  return os.str();
}

std::string export_dot(const Dfa& a, const Vocabulary& vocab) {
  std::ostringstream os;
  os << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n  init [shape=point];\n";
  os << "  init -> " << a.initial() << ";\n";
  for (StateId s = 0; s < a.size(); ++s)
    if (a.accepting(s)) os << "  " << s << " [shape=doublecircle];\n";
  for (StateId s = 0; s < a.size(); ++s)
    for (const Edge& e : a.edges(s))
      os << "  " << s << " -> " << e.target << " [label=\"" << guard_to_string(a, e.guard, vocab) << "\"];\n";
  os << "}\n";
  return os.str();
}

Dfa import_text(std::string_view text, Context& ctx) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](const char* what) -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++lineno;
      auto toks = split_ws(line);
      if (toks.empty() || toks[0][0] == '#') continue;
      return toks;
    }
    throw FormatError(lineno, std::string("unexpected end of input, expected ") + what);
  };

  auto header = next_line("header");
  if (header != std::vector<std::string>{"dfa", "v1"}) throw FormatError(lineno, "expected header 'dfa v1'");

  auto atoms_line = next_line("atoms");
  if (atoms_line[0] != "atoms") throw FormatError(lineno, "expected 'atoms'");
  std::vector<AtomId> atoms;
  for (std::size_t i = 1; i < atoms_line.size(); ++i) {
    if (!Vocabulary::valid_name(atoms_line[i])) throw FormatError(lineno, "invalid atom '" + atoms_line[i] + "'");
    atoms.push_back(ctx.vocab.intern(atoms_line[i]));
  }

  auto states_line = next_line("states");
  if (states_line.size() != 2 || states_line[0] != "states") throw FormatError(lineno, "expected 'states N'");
  std::size_t n = to_index(states_line[1], lineno);
  if (n == 0) throw FormatError(lineno, "automaton needs at least one state");

  auto init_line = next_line("initial");
  if (init_line.size() != 2 || init_line[0] != "initial") throw FormatError(lineno, "expected 'initial K'");
  std::size_t initial = to_index(init_line[1], lineno);
  if (initial >= n) throw FormatError(lineno, "initial state out of range");

  auto acc_line = next_line("accepting");
  if (acc_line[0] != "accepting") throw FormatError(lineno, "expected 'accepting'");
  std::vector<bool> accepting(n, false);
  for (std::size_t i = 1; i < acc_line.size(); ++i) {
    std::size_t s = to_index(acc_line[i], lineno);
    if (s >= n) throw FormatError(lineno, "accepting state out of range");
    accepting[s] = true;
  }

  bdd::Manager& m = *ctx.bdd;
  Dfa dfa(ctx.bdd, atoms);
  for (std::size_t s = 0; s < n; ++s) dfa.add_state(accepting[s]);
  dfa.set_initial(static_cast<StateId>(initial));

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] != "edge" || toks.size() < 3 || toks.size() > 4) throw FormatError(lineno, "expected 'edge SRC DST CUBES'");
    std::size_t src = to_index(toks[1], lineno), dst = to_index(toks[2], lineno);
    if (src >= n || dst >= n) throw FormatError(lineno, "edge endpoint out of range");
    std::vector<std::string> cubes = toks.size() == 4 ? split_on(toks[3], ',') : std::vector<std::string>{""};
    bdd::Ref guard = m.zero();
    for (const std::string& cube : cubes) {
      if (cube.size() != atoms.size()) throw FormatError(lineno, "cube '" + cube + "' does not match the atom count");
      bdd::Ref c = m.one();
      for (std::size_t i = 0; i < cube.size(); ++i) {
        if (cube[i] == '1') c = m.and_(c, m.var(atoms[i]));
        else if (cube[i] == '0') c = m.and_(c, m.nvar(atoms[i]));
        else if (cube[i] != '-') throw FormatError(lineno, "invalid cube character '" + std::string(1, cube[i]) + "'");
      }
      guard = m.or_(guard, c);
    }
    for (const Edge& e : dfa.edges(static_cast<StateId>(src)))
      if (!m.and_(e.guard, guard).is_false()) throw FormatError(lineno, "guard overlaps another edge of state " + toks[1]);
    dfa.add_edge(static_cast<StateId>(src), guard, static_cast<StateId>(dst));
  }
  for (StateId s = 0; s < n; ++s) {
    bdd::Ref all = m.zero();
    for (const Edge& e : dfa.edges(s)) all = m.or_(all, e.guard);
    if (!all.is_true()) throw FormatError(lineno, "guards of state " + std::to_string(s) + " are not total");
  }
  return dfa;
}

}  // namespace isynth::automata
