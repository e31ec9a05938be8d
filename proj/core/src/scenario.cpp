#include "isynth/scenario.hpp"

#include <algorithm>
#include <sstream>

#include "isynth/errors.hpp"

namespace isynth {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  auto pos = s.find('#');
  return trim(pos == std::string_view::npos ? s : s.substr(0, pos));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

void check_names(const std::vector<std::string>& names, std::size_t line) {
  for (const auto& n : names)
    if (!Vocabulary::valid_name(n)) throw FormatError(line, "invalid atom name '" + n + "'");
}

}  // namespace

PartitionNames parse_partition_file(std::string_view text) {
  PartitionNames out;
  bool seen_in = false, seen_out = false;
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = strip_comment(lines[i]);
    if (line.empty()) continue;
    const std::size_t no = i + 1;
    auto take = [&](std::string_view key, std::vector<std::string>& into, bool& seen) {
      if (line.substr(0, key.size()) != key) return false;
      if (seen) throw FormatError(no, "duplicate '" + std::string(key) + "' line");
      seen = true;
      into = words(line.substr(key.size()));
      check_names(into, no);
      return true;
    };
    if (!take(".inputs:", out.inputs, seen_in) && !take(".outputs:", out.outputs, seen_out))
      throw FormatError(no, "expected '.inputs:' or '.outputs:'");
  }
  if (!seen_in || !seen_out) throw FormatError(lines.size(), "partition needs both '.inputs:' and '.outputs:'");
  return out;
}

game::AtomPartition make_partition(Context& ctx, const PartitionNames& names) {
  for (const auto& n : names.inputs)
    if (std::find(names.outputs.begin(), names.outputs.end(), n) != names.outputs.end())
      throw Error("atom '" + n + "' is declared both as input and output");
  game::AtomPartition p;
  for (const auto& n : names.outputs) {
    AtomId a = ctx.vocab.intern(n);
    if (std::find(p.agent.begin(), p.agent.end(), a) == p.agent.end()) p.agent.push_back(a);
  }
  for (const auto& n : names.inputs) {
    AtomId a = ctx.vocab.intern(n);
    if (std::find(p.env.begin(), p.env.end(), a) == p.env.end()) p.env.push_back(a);
  }
  return p;
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  auto lines = lines_of(text);
  enum { Header, Inputs, Outputs, Body } stage = Header;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t no = i + 1;
    auto line = strip_comment(lines[i]);
    if (line.empty()) continue;
    auto sp = line.find_first_of(" \t");
    std::string_view key = line.substr(0, sp);
    std::string_view rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
    switch (stage) {
      case Header:
        if (line != "scenario v1") throw FormatError(no, "expected header 'scenario v1'");
        stage = Inputs;
        break;
      case Inputs:
        if (key != "inputs") throw FormatError(no, "expected 'inputs'");
        sc.names.inputs = words(rest);
        check_names(sc.names.inputs, no);
        stage = Outputs;
        break;
      case Outputs:
        if (key != "outputs") throw FormatError(no, "expected 'outputs'");
        sc.names.outputs = words(rest);
        check_names(sc.names.outputs, no);
        stage = Body;
        break;
      case Body:
        if (key == "goal") {
          if (rest.empty()) throw FormatError(no, "goal without a formula");
          sc.directives.push_back({Directive::Kind::Goal, std::string(rest), no});
        } else if (key == "step") {
          sc.directives.push_back({Directive::Kind::Step, std::string(rest), no});
        } else {
          throw FormatError(no, "expected 'goal' or 'step', found '" + std::string(key) + "'");
        }
        break;
    }
  }
  if (stage != Body) throw FormatError(lines.size(), "scenario ends before 'inputs' and 'outputs' are declared");
  return sc;
}

Assignment parse_assignment(std::string_view text, const Vocabulary& vocab, std::span<const AtomId> expected) {
  Assignment out;
  std::vector<AtomId> seen;
  for (const std::string& w : words(text)) {
    auto eq = w.find('=');
    if (eq == std::string::npos || eq + 2 != w.size() || (w[eq + 1] != '0' && w[eq + 1] != '1'))
      throw FormatError(0, "expected 'atom=0' or 'atom=1', found '" + w + "'");
    std::string name = w.substr(0, eq);
    auto id = vocab.find(name);
    if (!id || std::find(expected.begin(), expected.end(), *id) == expected.end())
      throw FormatError(0, "'" + name + "' is not an expected atom here");
    if (std::find(seen.begin(), seen.end(), *id) != seen.end()) throw FormatError(0, "atom '" + name + "' assigned twice");
    seen.push_back(*id);
    out.set(*id, w[eq + 1] == '1');
  }
  for (AtomId a : expected)
    if (std::find(seen.begin(), seen.end(), a) == seen.end())
      throw FormatError(0, "missing value for atom '" + vocab.name(a) + "'");
  return out;
}

Trace parse_trace_literal(std::string_view text, Vocabulary& vocab) {
  Trace out;
  text = trim(text);
  if (text.empty()) return out;
  auto atom = [&](std::string_view name) {
    name = trim(name);
    if (!Vocabulary::valid_name(name)) throw FormatError(0, "invalid atom '" + std::string(name) + "' in trace");
    return vocab.intern(name);
  };
  if (text.front() == '{') {
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] != '{') throw FormatError(0, "expected '{' in trace literal");
      auto close = text.find('}', i);
      if (close == std::string_view::npos) throw FormatError(0, "unterminated '{' in trace literal");
      Assignment w;
      std::string_view body = text.substr(i + 1, close - i - 1);
      if (!trim(body).empty()) {
        std::size_t s = 0;
        while (s <= body.size()) {
          auto comma = body.find(',', s);
          if (comma == std::string_view::npos) comma = body.size();
          w.set(atom(body.substr(s, comma - s)), true);
          s = comma + 1;
        }
      }
      out.push_back(w);
      i = close + 1;
      while (i < text.size() && (text[i] == ',' || text[i] == ' ')) ++i;
    }
    return out;
  }
  std::size_t s = 0;
  while (s <= text.size()) {
    auto semi = text.find(';', s);
    if (semi == std::string_view::npos) semi = text.size();
    Assignment w;
    for (const std::string& tok : words(text.substr(s, semi - s))) {
      auto eq = tok.find('=');
      if (eq == std::string::npos || eq + 2 != tok.size() || (tok[eq + 1] != '0' && tok[eq + 1] != '1'))
        throw FormatError(0, "expected 'atom=0' or 'atom=1', found '" + tok + "'");
      w.set(atom(std::string_view(tok).substr(0, eq)), tok[eq + 1] == '1');
    }
    out.push_back(w);
    s = semi + 1;
  }
  return out;
}

}  // namespace isynth
