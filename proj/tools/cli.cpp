#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "isynth/bench.hpp"
#include "isynth/dfa.hpp"
#include "isynth/engine.hpp"
#include "isynth/errors.hpp"
#include "isynth/game.hpp"
#include "isynth/parser.hpp"
#include "isynth/scenario.hpp"

namespace isynth::cli {

namespace {

struct Config {
  std::string formula;
  std::string part;
  std::string dump;
  std::string scenario;
  std::string engine = "dp";
  std::string family;
  std::string params;
  std::string out_path;
  std::string policy = "random";
  std::string trace;
  double timeout_s = 0;
  std::uint64_t seed = 0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t steps_per_goal = 1;
  std::size_t jobs = 1;
  std::size_t state_cap = 0;
  bool no_simplify = false;
  bool no_times = false;
  bool dot = false;
  bool text = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// A formula argument names a file when one exists at that path.
std::string formula_text(const std::string& arg) {
  std::error_code ec;
  if (!arg.empty() && std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

std::size_t state_cap(const Config& cfg) {
  if (cfg.state_cap) return cfg.state_cap;
  if (const char* env = std::getenv("ISYNTH_STATE_CAP")) {
    std::string_view v(env);
    std::size_t cap = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), cap);
    if (ec != std::errc{} || ptr != v.data() + v.size() || cap == 0)
      throw Error("ISYNTH_STATE_CAP must be a positive integer");
    return cap;
  }
  return automata::BuildOptions::kDefaultStateCap;
}

automata::BuildOptions build_options(const Config& cfg) {
  automata::BuildOptions opts;
  opts.state_cap = state_cap(cfg);
  if (cfg.timeout_s > 0)
    opts.deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                           std::chrono::duration<double>(cfg.timeout_s));
  return opts;
}

std::string show(const Vocabulary& vocab, const Assignment& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.atoms().size(); ++i) out += (i ? "," : "") + vocab.name(a.atoms()[i]);
  return out + "}";
}

std::string agent_cube(const game::AtomPartition& p, const Assignment& a) {
  std::string out;
  for (AtomId y : p.agent) out += a.contains(y) ? '1' : '0';
  return out.empty() ? "-" : out;
}

game::AtomPartition load_partition(Context& ctx, const std::string& path) {
  return make_partition(ctx, parse_partition_file(read_file(path)));
}

int cmd_synth(const Config& cfg, std::ostream& out) {
  auto ctx = std::make_shared<Context>();
  auto part = load_partition(*ctx, cfg.part);
  ltlf::Formula phi = parse_goal(formula_text(cfg.formula), ctx->vocab, ctx->formulas, AtomPolicy::Strict);
  auto atoms = part.vocabulary();
  auto g = std::make_shared<game::DfaGame>(
      game::DfaGame{automata::minimize(automata::from_formula(*ctx, phi, atoms, build_options(cfg))), part});
  game::Solution sol = game::solve(*g);
  const bool ok = game::is_realizable(*g, sol);
  out << (ok ? "REALIZABLE" : "UNREALIZABLE") << '\n';
  if (!cfg.dump.empty()) {
    std::ostringstream os;
    os << automata::export_text(g->dfa, ctx->vocab) << "strategy";
    for (AtomId y : part.agent) os << ' ' << ctx->vocab.name(y);
    os << '\n';
    for (automata::StateId s = 0; s < g->dfa.size(); ++s)
      if (sol.winning[s]) os << s << ' ' << agent_cube(part, *sol.strategy[s]) << '\n';
    std::ofstream f(cfg.dump, std::ios::binary | std::ios::trunc);
    if (!f || !(f << os.str())) throw IoError("cannot write '" + cfg.dump + "'");
  }
  return ok ? kOk : kUnrealizable;
}

void print_status(const engine::Session& s, std::ostream& out) {
  auto status = s.goal_status();
  for (std::size_t i = 0; i < status.size(); ++i)
    out << "status " << i << ": now=" << (status[i].satisfied_now ? "yes" : "no")
        << " ever=" << (status[i].satisfied_ever ? "yes" : "no") << "  "
        << ltlf::to_string(s.context().vocab, s.goals()[i].formula) << '\n';
}

int cmd_incr(const Config& cfg, std::ostream& out) {
  Scenario sc = parse_scenario(read_file(cfg.scenario));
  auto ctx = std::make_shared<Context>();
  engine::Session session(ctx, make_partition(*ctx, sc.names), engine::parse_mode(cfg.engine));
  bool all_ok = true;
  std::size_t goal_index = 0;
  for (const Directive& d : sc.directives) {
    if (d.kind == Directive::Kind::Goal) {
      engine::Verdict v;
      try {
        v = session.add_goal(d.text, build_options(cfg));
      } catch (const ParseError& e) {
        throw FormatError(d.line, e.what());
      } catch (const UnknownAtom& e) {
        throw FormatError(d.line, e.what());
      }
      out << "goal " << goal_index++ << " at step " << session.clock() << ": " << engine::to_string(v.outcome) << '\n';
      all_ok = all_ok && v.realizable();
    } else {
      Assignment x;
      try {
        x = parse_assignment(d.text, ctx->vocab, session.partition().env);
      } catch (const FormatError& e) {
        throw FormatError(d.line, e.what());
      }
      Assignment y = session.agent_move();
      session.env_move(x);
      out << "step " << session.clock() << ": agent " << show(ctx->vocab, y) << " env " << show(ctx->vocab, x) << '\n';
    }
  }
  print_status(session, out);
  return all_ok ? kOk : kUnrealizable;
}

int cmd_bench(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::vector<bench::BenchSpec> specs;
  std::vector<engine::Mode> modes;
  if (cfg.engine == "both")
    modes = {engine::Mode::DP, engine::Mode::FP};
  else
    modes = {engine::parse_mode(cfg.engine)};
  if (cfg.policy != "random" && cfg.policy != "passive") throw Error("policy must be random or passive");
  for (engine::Mode m : modes) {
    bench::BenchSpec spec;
    spec.family = bench::parse_family(cfg.family, cfg.params);
    spec.n_min = cfg.n_min;
    spec.n_max = cfg.n_max;
    spec.timeout_s = cfg.timeout_s > 0 ? cfg.timeout_s : 60;
    spec.mode = m;
    spec.policy = cfg.policy == "random" ? bench::PolicyKind::Random : bench::PolicyKind::Passive;
    spec.seed = cfg.seed;
    spec.steps_per_goal = cfg.steps_per_goal;
    spec.state_cap = state_cap(cfg);
    spec.record_times = !cfg.no_times;
    specs.push_back(spec);
  }
  auto results = bench::run_instances(specs, cfg.jobs);
  std::vector<bench::ResultRow> rows;
  int code = kOk;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    std::size_t realizable = 0;
    for (const auto& row : r.rows) {
      realizable += row.verdict == "realizable";
      if (row.verdict == "timeout" || row.verdict == "state-cap") code = kResourceLimit;
      else if (row.verdict == "unrealizable" && code == kOk) code = kUnrealizable;
    }
    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    out << bench::family_name(specs[i].family.kind) << ' ' << bench::params_string(specs[i].family) << ' '
        << engine::to_string(specs[i].mode) << ": " << realizable << '/' << r.rows.size() << " realizable";
    if (r.check) out << ", literal_ok=" << (r.check->literal_ok ? "yes" : "no") << " joint_ok=" << (r.check->joint_ok ? "yes" : "no");
    if (r.step_limit) out << ", episode hit the step limit";
    out << '\n';
  }
  if (cfg.out_path.empty() || cfg.out_path == "-")
    out << bench::to_csv(rows);
  else
    bench::write_csv(rows, cfg.out_path);
  return code;
}

int cmd_prog(const Config& cfg, std::ostream& out) {
  Context ctx;
  RawFormula raw = parse(formula_text(cfg.formula), ctx.vocab);
  ltlf::Formula phi = to_nnf(ctx.formulas, raw);
  if (!cfg.no_simplify) phi = ltlf::simplify(ctx.formulas, phi);
  Trace h = parse_trace_literal(cfg.trace, ctx.vocab);
  out << ltlf::to_string(ctx.vocab, ltlf::prog_trace(ctx.formulas, phi, h, !cfg.no_simplify)) << '\n';
  return kOk;
}

int cmd_dfa(const Config& cfg, std::ostream& out) {
  auto ctx = std::make_shared<Context>();
  std::vector<AtomId> atoms;
  AtomPolicy policy = AtomPolicy::Register;
  if (!cfg.part.empty()) {
    atoms = load_partition(*ctx, cfg.part).vocabulary();
    policy = AtomPolicy::Strict;
  }
  ltlf::Formula phi = parse_goal(formula_text(cfg.formula), ctx->vocab, ctx->formulas, policy);
  if (cfg.part.empty()) atoms = ltlf::atoms_of(phi);
  automata::Dfa d = automata::minimize(automata::from_formula(*ctx, phi, atoms, build_options(cfg)));
  out << (cfg.dot ? automata::export_dot(d, ctx->vocab) : automata::export_text(d, ctx->vocab));
  return kOk;
}

int cmd_repl(const Config& cfg, std::istream& in, std::ostream& out) {
  auto ctx = std::make_shared<Context>();
  engine::Session session(ctx, load_partition(*ctx, cfg.part), engine::parse_mode(cfg.engine));
  out << "engine " << engine::to_string(session.mode()) << ". Enter an environment assignment (atom=0|1 ...), "
      << "'goal <formula>', 'status' or 'quit'.\n";
  std::string line;
  while (true) {
    out << "agent " << show(ctx->vocab, session.peek_move()) << "\n> " << std::flush;
    if (!std::getline(in, line)) break;
    std::string_view cmd(line);
    while (!cmd.empty() && (cmd.front() == ' ' || cmd.front() == '\t')) cmd.remove_prefix(1);
    while (!cmd.empty() && (cmd.back() == ' ' || cmd.back() == '\r')) cmd.remove_suffix(1);
    if (cmd == "quit" || cmd == "exit") break;
    try {
      if (cmd == "status") {
        print_status(session, out);
      } else if (cmd.substr(0, 5) == "goal ") {
        auto v = session.add_goal(cmd.substr(5), build_options(cfg));
        out << engine::to_string(v.outcome) << '\n';
      } else if (!cmd.empty() || session.partition().env.empty()) {
        Assignment x = parse_assignment(cmd, ctx->vocab, session.partition().env);
        Assignment y = session.agent_move();
        session.env_move(x);
        out << "step " << session.clock() << ": " << show(ctx->vocab, y.merged(x)) << '\n';
        print_status(session, out);
      }
    } catch (const Error& e) {
      out << "error: " << e.what() << '\n';
    }
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incremental LTLf synthesis"};
  app.name("isynth");
  app.require_subcommand(1);
  Config cfg;

  auto add_formula = [&](CLI::App* sub) {
    auto* opt = sub->add_option("--formula,formula", cfg.formula, "Formula text or a file containing it");
    opt->required();
  };
  auto add_cap = [&](CLI::App* sub) {
    sub->add_option("--state-cap", cfg.state_cap, "DFA state cap (overrides ISYNTH_STATE_CAP)");
    sub->add_option("--timeout-s", cfg.timeout_s, "Wall-clock limit for automaton construction");
  };
  auto check_engine = CLI::IsMember({"dp", "fp"});

  auto* synth = app.add_subcommand("synth", "One-shot realizability check and strategy synthesis");
  add_formula(synth);
  synth->add_option("--part", cfg.part, "Partition file (.inputs/.outputs)")->required();
  synth->add_option("--dump", cfg.dump, "Write the arena and strategy to this file");
  add_cap(synth);

  auto* incr = app.add_subcommand("incr", "Replay an incremental scenario");
  incr->add_option("--scenario,scenario", cfg.scenario, "Scenario file")->required();
  incr->add_option("--engine", cfg.engine, "dp or fp")->check(check_engine);
  add_cap(incr);

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark family and write CSV rows");
  bench_cmd->add_option("--family", cfg.family, "tireworld, counter, plants or requests")->required();
  bench_cmd->add_option("--params", cfg.params, "Family parameters, e.g. l=2 or i=1:j=1")->required();
  bench_cmd->add_option("--engine", cfg.engine, "dp, fp or both")->check(CLI::IsMember({"dp", "fp", "both"}));
  bench_cmd->add_option("--n-min", cfg.n_min, "First goal index");
  bench_cmd->add_option("--n-max", cfg.n_max, "Last goal index");
  bench_cmd->add_option("--timeout-s", cfg.timeout_s, "Per-addition timeout (default 60)");
  bench_cmd->add_option("--seed", cfg.seed, "Seed of the random environment");
  bench_cmd->add_option("--policy", cfg.policy, "random or passive")->check(CLI::IsMember({"random", "passive"}));
  bench_cmd->add_option("--steps-per-goal", cfg.steps_per_goal, "Steps executed between additions");
  bench_cmd->add_option("--jobs", cfg.jobs, "Worker threads");
  bench_cmd->add_option("--out", cfg.out_path, "CSV output path ('-' for stdout)");
  bench_cmd->add_option("--state-cap", cfg.state_cap, "DFA state cap (overrides ISYNTH_STATE_CAP)");
  bench_cmd->add_flag("--no-times", cfg.no_times, "Write add_ms as 0 for reproducible CSVs");

  auto* prog = app.add_subcommand("prog", "Progress a formula through a trace");
  add_formula(prog);
  prog->add_option("--on", cfg.trace, "Trace: {a},{b} or a=1 b=0;a=0 b=1")->required();
  prog->add_flag("--no-simplify", cfg.no_simplify, "Print the raw progression");

  auto* dfa = app.add_subcommand("dfa", "Print the minimized DFA of a formula");
  add_formula(dfa);
  dfa->add_option("--part", cfg.part, "Partition file fixing the alphabet");
  auto* dot = dfa->add_flag("--dot", cfg.dot, "Graphviz output");
  auto* text = dfa->add_flag("--text", cfg.text, "Text format (default)");
  dot->excludes(text);
  add_cap(dfa);

  auto* repl = app.add_subcommand("repl", "Play the environment interactively");
  repl->add_option("--part", cfg.part, "Partition file")->required();
  repl->add_option("--engine", cfg.engine, "dp or fp")->check(check_engine);
  add_cap(repl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*synth) return cmd_synth(cfg, out);
    if (*incr) return cmd_incr(cfg, out);
    if (*bench_cmd) return cmd_bench(cfg, out, err);
    if (*prog) return cmd_prog(cfg, out);
    if (*dfa) return cmd_dfa(cfg, out);
    if (*repl) return cmd_repl(cfg, in, out);
  } catch (const DfaTooLarge& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const Timeout& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const StepLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace isynth::cli
