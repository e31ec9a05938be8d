#include "isynth/bench.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "isynth/errors.hpp"
#include "isynth/parser.hpp"

namespace isynth::bench {

namespace {

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string join(const std::vector<std::string>& parts, const std::string& op, const std::string& unit) {
  if (parts.empty()) return unit;
  if (parts.size() == 1) return parts.front();
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " + op + " " : "") + paren(parts[i]);
  return out;
}

std::string all_of(const std::vector<std::string>& parts) { return join(parts, "&", "true"); }
std::string any_of(const std::vector<std::string>& parts) { return join(parts, "|", "false"); }

std::string indexed(const std::string& stem, std::size_t i) { return stem + "_" + std::to_string(i); }

std::string nest(const std::string& op, std::size_t times, const std::string& body) {
  std::string out = body;
  for (std::size_t i = 0; i < times; ++i) out = op + paren(out);
  return out;
}

std::vector<std::string> names(const std::string& stem, std::size_t from, std::size_t to) {
  std::vector<std::string> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(indexed(stem, i));
  return out;
}

game::AtomPartition intern(Context& ctx, const std::vector<std::string>& agent, const std::vector<std::string>& env) {
  game::AtomPartition p;
  for (const auto& n : agent) p.agent.push_back(ctx.vocab.intern(n));
  for (const auto& n : env) p.env.push_back(ctx.vocab.intern(n));
  return p;
}

std::vector<std::string> no_warnings(std::size_t) { return {}; }

}  // namespace

ltlf::Formula Family::goal(Context& ctx, std::size_t n) const {
  return parse_goal(goal_text(n), ctx.vocab, ctx.formulas, AtomPolicy::Strict);
}

Family gen_tireworld(Context& ctx, std::size_t l) {
  if (l < 1) throw Error("tireworld needs at least one location");
  auto at = [](std::size_t i) { return indexed("at", i); };
  auto move = [](std::size_t i) { return indexed("move", i); };
  std::vector<std::string> agent = names("at", 0, l);
  auto moves = names("move", 0, l);
  agent.insert(agent.end(), moves.begin(), moves.end());
  agent.push_back("change-tire");
  agent.push_back("flat-tire");

  const std::string any_move = any_of(moves);
  const std::string alpha = "G(make-flat -> " + paren(any_move) + ")";

  std::vector<std::string> init{at(0)};
  for (std::size_t i = 1; i < l; ++i) init.push_back("!" + at(i));

  std::vector<std::string> no_flat_move;
  for (std::size_t i = 0; i < l; ++i) no_flat_move.push_back(move(i) + " -> !flat-tire");
  const std::string pre = "G" + paren(all_of(no_flat_move)) + " & G(change-tire -> flat-tire)";

  std::vector<std::string> exclusive;
  for (std::size_t i = 0; i < l; ++i) {
    std::vector<std::string> others;
    for (std::size_t j = 0; j < l; ++j)
      if (j != i) others.push_back(move(j));
    exclusive.push_back(move(i) + " -> (!change-tire & !" + paren(any_of(others)) + ")");
  }
  const std::string mutex = "G(change-tire | " + paren(any_move) + ") & G(change-tire -> !" + paren(any_move) +
                            ") & G" + paren(all_of(exclusive));

  auto only_at = [&](std::size_t j) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < l; ++k)
      if (k != j) out.push_back("!" + at(k));
    return out;
  };
  std::vector<std::string> flat, intact, change;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      if (j == i) continue;
      auto after = only_at(j);
      after.insert(after.begin(), {at(j), "flat-tire"});
      flat.push_back(at(i) + " & " + move(j) + " & make-flat -> N" + paren(all_of(after)));
      after[1] = "!flat-tire";
      intact.push_back(at(i) + " & " + move(j) + " & !make-flat -> N" + paren(all_of(after)));
    }
    auto after = only_at(i);
    after.insert(after.begin(), {at(i), "!flat-tire"});
    change.push_back(at(i) + " & change-tire -> N" + paren(all_of(after)));
  }
  const std::string trans = "G" + paren(all_of(flat)) + " & G" + paren(all_of(intact)) + " & G" + paren(all_of(change));

  // Visits 0..2n+1 of the locations taken cyclically.
  auto visits = [at, l](std::size_t n) {
    const std::size_t last = 2 * n + 1;
    std::string inner = "F " + at(last % l);
    for (std::size_t v = last; v-- > 1;) inner = "F " + at(v % l) + " & X" + paren(inner);
    return "F(" + at(0) + " & X" + paren(inner) + ")";
  };
  auto goal_n = [alpha, visits](std::size_t n) { return alpha + " -> " + paren(visits(n)); };
  const std::string org = all_of({all_of(init), pre, mutex, trans, goal_n(0)});

  Family f;
  f.name = "tireworld";
  f.params = "l=" + std::to_string(l);
  f.partition = intern(ctx, agent, {"make-flat"});
  f.goal_text = [org, goal_n](std::size_t n) { return n == 0 ? org : goal_n(n); };
  f.warnings = no_warnings;
  return f;
}

Family gen_counter(Context& ctx, std::size_t k) {
  if (k < 1) throw Error("counter needs at least one bit");
  auto b = [](std::size_t i) { return indexed("b", i); };
  auto c = [](std::size_t i) { return indexed("c", i); };
  std::vector<std::string> agent = names("b", 0, k);
  auto carries = names("c", 0, k + 1);
  agent.insert(agent.end(), carries.begin(), carries.end());

  std::vector<std::string> init;
  for (std::size_t i = 0; i < k; ++i) init.push_back("!" + b(i));
  for (std::size_t i = 0; i <= k; ++i) init.push_back("!" + c(i));
  const std::string pre = "G(X " + c(0) + " -> add)";
  std::vector<std::string> blocks;
  for (std::size_t i = 0; i < k; ++i) {
    const std::string ci = c(i), bi = b(i), cn = c(i + 1);
    blocks.push_back("G((!" + ci + " & !" + bi + " -> N(!" + bi + " & !" + cn + ")) & (!" + ci + " & " + bi + " -> N(" +
                     bi + " & !" + cn + ")) & (" + ci + " & !" + bi + " -> N(" + bi + " & !" + cn + ")) & (" + ci +
                     " & " + bi + " -> N(!" + bi + " & " + cn + ")))");
  }
  const std::string trans = all_of(blocks);

  const std::uint64_t modulus = k >= 63 ? 0 : (std::uint64_t{1} << k);
  auto target = [k, b, modulus](std::size_t n) {
    std::uint64_t v = 2 * std::uint64_t{n} + 1;
    if (modulus) v %= modulus;
    std::vector<std::string> lits;
    for (std::size_t i = 0; i < k; ++i) lits.push_back(((v >> i) & 1u ? "" : "!") + b(i));
    return all_of(lits);
  };
  auto goal_n = [target](std::size_t n) { return "G add -> F" + paren(target(n)); };
  const std::string spec = all_of({all_of(init), pre, trans});

  Family f;
  f.name = "counter";
  f.params = "k=" + std::to_string(k);
  f.partition = intern(ctx, agent, {"add"});
  f.goal_text = [spec, goal_n](std::size_t n) { return n == 0 ? all_of({spec, goal_n(0)}) : goal_n(n); };
  f.warnings = [k, modulus](std::size_t n) -> std::vector<std::string> {
    const std::uint64_t v = 2 * std::uint64_t{n} + 1;
    if (modulus && v >= modulus)
      return {"counter target " + std::to_string(v) + " needs more than " + std::to_string(k) + " bits; using " +
              std::to_string(v % modulus)};
    return {};
  };
  return f;
}

Family gen_plants(Context& ctx, std::size_t p) {
  if (p < 1) throw Error("plants needs at least one plant");
  std::vector<std::string> env{"rain"};
  auto alive = names("alive", 0, p);
  env.insert(env.end(), alive.begin(), alive.end());

  std::vector<std::string> alphas;
  for (const auto& a : alive) alphas.push_back("G(N " + a + " <-> " + a + " & (water | rain))");
  const std::string assumption = all_of(alphas);
  auto goal_n = [assumption, alive](std::size_t n) {
    std::vector<std::string> cares;
    for (const auto& a : alive) {
      std::vector<std::string> days;
      for (std::size_t j = 0; j < 3 * (n + 1); ++j) days.push_back(nest("X", j, a));
      cares.push_back("F" + paren(all_of(days)));
    }
    return paren(assumption) + " -> " + paren(all_of(cares));
  };

  Family f;
  f.name = "plants";
  f.params = "p=" + std::to_string(p);
  f.partition = intern(ctx, {"water"}, env);
  f.goal_text = goal_n;
  f.warnings = no_warnings;
  return f;
}

Family gen_requests(Context& ctx, std::size_t services, std::size_t actions) {
  if (services < 1 || actions < 1) throw Error("requests needs at least one service and one action");
  auto act = [](std::size_t s, std::size_t t) { return "a_" + std::to_string(s) + "_" + std::to_string(t); };
  std::vector<std::string> agent;
  for (std::size_t s = 0; s < services; ++s)
    for (std::size_t t = 1; t <= actions; ++t) agent.push_back(act(s, t));
  auto reqs = names("r", 0, services);

  const std::string some = any_of(reqs);
  std::vector<std::string> serve;
  for (std::size_t s = 0; s < services; ++s) {
    std::string chain = "F " + act(s, actions);
    for (std::size_t t = actions; t-- > 1;) chain = "F(" + act(s, t) + " & X" + paren(chain) + ")";
    serve.push_back(reqs[s] + " -> " + chain);
  }
  const std::string request = all_of(serve);
  auto goal_n = [some, request](std::size_t n) {
    const std::size_t k = 2 * n + 1;
    std::vector<std::string> issued;
    for (std::size_t v = 0; v < k; ++v) issued.push_back(nest("N", v, paren(some)));
    issued.push_back(nest("N", k, "G !" + paren(some)));
    return paren(all_of(issued)) + " -> " + paren(all_of({request, nest("X", k, "true")}));
  };

  Family f;
  f.name = "requests";
  f.params = "i=" + std::to_string(services) + ":j=" + std::to_string(actions);
  f.partition = intern(ctx, agent, reqs);
  f.goal_text = goal_n;
  f.warnings = no_warnings;
  return f;
}

Family make_family(Context& ctx, const FamilyParams& p) {
  switch (p.kind) {
    case FamilyKind::Tireworld: return gen_tireworld(ctx, p.first);
    case FamilyKind::Counter: return gen_counter(ctx, p.first);
    case FamilyKind::Plants: return gen_plants(ctx, p.first);
    case FamilyKind::Requests: return gen_requests(ctx, p.first, p.second);
  }
  throw Error("unknown family");
}

std::string family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::Tireworld: return "tireworld";
    case FamilyKind::Counter: return "counter";
    case FamilyKind::Plants: return "plants";
    case FamilyKind::Requests: return "requests";
  }
  return "?";
}

std::string params_string(const FamilyParams& p) {
  switch (p.kind) {
    case FamilyKind::Tireworld: return "l=" + std::to_string(p.first);
    case FamilyKind::Counter: return "k=" + std::to_string(p.first);
    case FamilyKind::Plants: return "p=" + std::to_string(p.first);
    case FamilyKind::Requests: return "i=" + std::to_string(p.first) + ":j=" + std::to_string(p.second);
  }
  return "?";
}

FamilyParams parse_family(std::string_view name, std::string_view params) {
  FamilyParams out;
  std::vector<std::string> keys;
  if (name == "tireworld") {
    out.kind = FamilyKind::Tireworld;
    keys = {"l"};
  } else if (name == "counter") {
    out.kind = FamilyKind::Counter;
    keys = {"k"};
  } else if (name == "plants") {
    out.kind = FamilyKind::Plants;
    keys = {"p"};
  } else if (name == "requests") {
    out.kind = FamilyKind::Requests;
    keys = {"i", "j"};
  } else {
    throw Error("unknown family '" + std::string(name) + "'");
  }
  // Fields are separated by ':' or ','; each is "key=value" or a bare value.
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : params) {
    if (ch == ':' || ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  if (fields.size() != keys.size())
    throw Error("family '" + std::string(name) + "' expects " + std::to_string(keys.size()) + " parameter(s)");
  std::size_t* slots[] = {&out.first, &out.second};
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::string_view f = fields[i];
    if (auto eq = f.find('='); eq != std::string_view::npos) {
      if (f.substr(0, eq) != keys[i]) throw Error("expected parameter '" + keys[i] + "' in '" + std::string(params) + "'");
      f = f.substr(eq + 1);
    }
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size() || v < 1)
      throw Error("parameter '" + keys[i] + "' must be a positive integer");
    *slots[i] = v;
  }
  return out;
}

InstanceResult run_instance(const BenchSpec& spec, const AddHook& hook) {
  return run_instance(spec, std::make_shared<Context>(), hook);
}

InstanceResult run_instance(const BenchSpec& spec, const std::shared_ptr<Context>& ctx, const AddHook& hook) {
  if (spec.n_min > spec.n_max) throw Error("empty goal range");
  Family fam = make_family(*ctx, spec.family);
  engine::Session session(ctx, fam.partition, spec.mode);
  engine::EnvPolicy env = spec.policy == PolicyKind::Random ? engine::random_policy(spec.seed) : engine::passive_policy();

  InstanceResult result;
  auto row_for = [&](std::size_t n, const std::string& verdict) {
    ResultRow r;
    r.family = fam.name;
    r.params = fam.params;
    r.goal_n = n;
    r.engine = engine::to_string(spec.mode);
    r.verdict = verdict;
    r.seed = spec.seed;
    return r;
  };

  bool aborted = false;
  std::optional<std::size_t> last_realizable_row;
  for (std::size_t n = spec.n_min; n <= spec.n_max; ++n) {
    if (aborted) {
      result.rows.push_back(row_for(n, "timeout"));
      continue;
    }
    for (auto& w : fam.warnings(n)) result.warnings.push_back(std::move(w));
    automata::BuildOptions opts;
    opts.state_cap = spec.state_cap;
    const auto start = std::chrono::steady_clock::now();
    opts.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(spec.timeout_s));
    try {
      ltlf::Formula phi = fam.goal(*ctx, n);
      engine::Verdict v = session.add_goal(phi, opts);
      ResultRow r = row_for(n, v.realizable() ? "realizable" : "unrealizable");
      r.add_ms = spec.record_times ? v.stats.add_ms : 0.0;
      r.new_dfa_states = v.stats.new_dfa_states;
      r.arena_states = v.stats.arena_states;
      if (hook) hook(n, session, v);
      if (v.realizable() && n < spec.n_max) {
        for (std::size_t s = 0; s < spec.steps_per_goal; ++s) {
          session.agent_move();
          session.env_move(env(session));
        }
        r.episode_steps = spec.steps_per_goal;
      }
      if (v.realizable()) last_realizable_row = result.rows.size();
      result.rows.push_back(r);
    } catch (const Timeout&) {
      result.rows.push_back(row_for(n, "timeout"));
      aborted = true;
    } catch (const DfaTooLarge&) {
      result.rows.push_back(row_for(n, "state-cap"));
      aborted = true;
    }
  }

  if (!session.goals().empty()) {
    try {
      engine::EpisodeLog log = engine::run_episode(session, env);
      result.check = engine::verify_log(log);
      if (last_realizable_row) result.rows[*last_realizable_row].episode_steps += log.steps;
    } catch (const StepLimit&) {
      result.step_limit = true;
    }
  }
  return result;
}

std::vector<InstanceResult> run_instances(const std::vector<BenchSpec>& specs, std::size_t jobs) {
  std::vector<InstanceResult> out(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < specs.size();) {
      try {
        out[i] = run_instance(specs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, specs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

const char* const kCsvHeader = "family,params,goal_n,engine,verdict,add_ms,new_dfa_states,arena_states,episode_steps,seed";

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  char ms[64];
  for (const ResultRow& r : rows) {
    std::snprintf(ms, sizeof ms, "%.3f", r.add_ms);
    os << r.family << ',' << r.params << ',' << r.goal_n << ',' << r.engine << ',' << r.verdict << ',' << ms << ','
       << r.new_dfa_states << ',' << r.arena_states << ',' << r.episode_steps << ',' << r.seed << '\n';
  }
  return os.str();
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << to_csv(rows);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace isynth::bench
