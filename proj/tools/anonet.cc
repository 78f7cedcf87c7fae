// Command-line front end: run, sweep, verify, audit, meet.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "anonet/audit.h"
#include "anonet/engine.h"
#include "anonet/error.h"
#include "anonet/oracle.h"
#include "anonet/records.h"
#include "anonet/registry.h"
#include "anonet/scaling.h"
#include "anonet/verify.h"

namespace {

using namespace anonet;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::int64_t max_steps = 10'000'000;
  std::optional<std::int64_t> confirm_window;
  double rate = 1.0;
  std::string trace;
  std::string format;  // empty: per-command default
  std::string rewire = "none";
  std::string output;
};

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

RunOptions run_options(const Globals& g, std::uint64_t seed, const Graph& graph) {
  RunOptions ro;
  ro.seed = seed;
  ro.limits.max_steps = g.max_steps;
  ro.limits.confirmation_window = g.confirm_window;
  ro.rate = g.rate;
  // "swap:n" uses the graph size as the period.
  ro.rewire = g.rewire == "swap:n" ? RewirePolicy::swap(graph.node_count())
                                   : parse_rewire_policy(g.rewire);
  return ro;
}

// ---- run -----------------------------------------------------------------

struct RunArgs {
  std::string protocol, graph, input;
};

int cmd_run(const Globals& g, const RunArgs& a) {
  ProtocolDef protocol = make_protocol(a.protocol);
  Graph graph = build_graph(a.graph, g.seed);
  auto input = parse_input(a.input, graph.node_count(), g.seed, protocol.color_count);
  Expectation expected = oracle_for_input(protocol, input);

  RunOptions ro = run_options(g, g.seed, graph);
  ro.record_trace = !g.trace.empty();
  auto outcome = run(protocol, graph, input, expected, ro);
  if (outcome.trace) {
    std::ofstream tf(g.trace);
    if (!tf) throw ConfigError("cannot open trace file " + g.trace);
    write_trace(tf, *outcome.trace);
  }

  RunRecord record = make_run_record(protocol, graph, g.seed, a.input, ro, expected,
                                     outcome.result);
  Sink sink(g.output);
  if (g.format == "csv") {
    sink.out() << csv_header() << '\n' << to_csv(sweep_row(record)) << '\n';
  } else {
    sink.out() << to_json(record).dump() << '\n';
  }
  return record.match ? kExitOk : kExitFailure;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string protocol, graph, input = "0:rest";
  std::string seeds = "1..20";
  std::string summary;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
  auto seeds = parse_seed_list(a.seeds);
  if (seeds.empty()) throw ConfigError("empty seed list");
  auto protocols = expand_braces(a.protocol);
  auto graphs = expand_braces(a.graph);
  auto inputs = expand_braces(a.input);

  Sink sink(g.output);
  sink.out() << csv_header() << '\n';
  bool all_match = true;
  // Summary points per (protocol, input): n -> stabilization steps.
  std::map<std::pair<std::string, std::string>, std::map<NodeId, std::vector<double>>> points;
  nlohmann::json flagged = nlohmann::json::array();

  for (const auto& pspec : protocols) {
    ProtocolDef protocol = make_protocol(pspec);
    for (const auto& gspec : graphs) {
      for (const auto& ispec : inputs) {
        for (auto seed : seeds) {
          Graph graph = build_graph(gspec, seed);
          auto input = parse_input(ispec, graph.node_count(), seed, protocol.color_count);
          Expectation expected = oracle_for_input(protocol, input);
          RunOptions ro = run_options(g, seed, graph);
          RunResult result;
          try {
            result = run(protocol, graph, input, expected, ro).result;
          } catch (const ProtocolError& e) {
            std::cerr << "run failed (" << pspec << ", " << gspec << ", seed " << seed
                      << "): " << e.what() << '\n';
          }
          auto record = make_run_record(protocol, graph, seed, ispec, ro, expected, result);
          sink.out() << to_csv(sweep_row(record)) << '\n';
          all_match &= record.match;
          if (record.stabilized) {
            points[{pspec, ispec}][graph.node_count()].push_back(
                static_cast<double>(*record.first_correct_step));
          } else {
            flagged.push_back({{"protocol", pspec}, {"graph", gspec}, {"seed", seed}});
          }
        }
      }
    }
  }

  nlohmann::json fits = nlohmann::json::array();
  for (const auto& [key, by_n] : points) {
    std::vector<double> xs, ys;
    for (const auto& [n, v] : by_n) {
      double mean = 0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      if (mean > 0) {
        xs.push_back(n);
        ys.push_back(mean);
      }
    }
    nlohmann::json entry{{"protocol", key.first}, {"input", key.second}};
    if (xs.size() >= 2) {
      entry["fit"] = to_json(fit_power_law(xs, ys));
      entry["exponent"] = entry["fit"]["exponent"];
    } else {
      entry["exponent"] = nullptr;
    }
    fits.push_back(entry);
  }
  nlohmann::json summary{{"schema_version", kSchemaVersion},
                         {"rows", protocols.size() * graphs.size() * inputs.size() * seeds.size()},
                         {"all_match", all_match},
                         {"scaling", fits},
                         {"unstabilized", flagged}};
  if (a.summary.empty()) {
    std::cerr << summary.dump(2) << '\n';
  } else {
    std::ofstream sf(a.summary);
    if (!sf) throw ConfigError("cannot open summary file " + a.summary);
    sf << summary.dump(2) << '\n';
  }
  return all_match ? kExitOk : kExitFailure;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::string protocol, graph, input;
  bool all_inputs = false;
  std::int64_t guard = 10'000'000;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  ProtocolDef protocol = make_protocol(a.protocol);
  Graph graph = build_graph(a.graph, g.seed);
  std::vector<std::vector<int>> inputs;
  if (a.all_inputs) {
    inputs = all_inputs(graph.node_count(), protocol.color_count);
  } else if (!a.input.empty()) {
    inputs.push_back(parse_input(a.input, graph.node_count(), g.seed, protocol.color_count));
  } else {
    throw ConfigError("verify needs --input or --all-inputs");
  }

  Sink sink(g.output);
  bool failed = false;
  int pass = 0, fail = 0, skipped = 0, undefined = 0;
  VerifyOptions vo;
  vo.guard = a.guard;
  if (g.format != "json") sink.out() << "input\tverdict\tstates\tvalue\n";
  for (const auto& input : inputs) {
    VerifyResult v;
    try {
      v = verify_exhaustive(protocol, graph, input, vo);
    } catch (const OracleError&) {
      ++undefined;  // plurality ties have no defined answer
      continue;
    }
    failed |= v.verdict == Verdict::kFail;
    pass += v.verdict == Verdict::kPass;
    fail += v.verdict == Verdict::kFail;
    skipped += v.verdict == Verdict::kSkipped;
    if (g.format == "json") {
      sink.out() << to_json(v).dump() << '\n';
    } else {
      std::string in;
      for (int c : input) in += std::to_string(c);
      sink.out() << in << '\t' << to_string(v.verdict) << '\t' << v.states_explored << '\t'
                 << to_string(v.expected);
      if (!v.witness.empty()) sink.out() << '\t' << v.witness;
      sink.out() << '\n';
    }
  }
  std::cerr << pass << " PASS, " << fail << " FAIL, " << skipped << " SKIPPED";
  if (undefined) std::cerr << ", " << undefined << " undefined (tie)";
  std::cerr << '\n';
  return failed ? kExitFailure : kExitOk;
}

// ---- audit ---------------------------------------------------------------

struct AuditArgs {
  std::vector<std::string> protocols;
};

int cmd_audit(const Globals& g, const AuditArgs& a) {
  Sink sink(g.output);
  bool ok = true;
  if (g.format != "json") sink.out() << "protocol\tstates\tmeasured\tdeclared\treference\tok\tnote\n";
  for (const auto& spec : a.protocols) {
    ProtocolDef protocol = make_protocol(spec);
    auto result = audit_memory(protocol, default_audit_instances(protocol, g.seed));
    ok &= result.ok;
    if (g.format == "json") {
      sink.out() << to_json(result).dump() << '\n';
    } else {
      sink.out() << result.protocol << '\t' << result.states << '\t' << result.measured_bits
                 << '\t' << result.declared_bits << '\t' << result.reference_bits << '\t'
                 << (result.ok ? "yes" : "NO") << '\t' << result.note << '\n';
      for (const auto& s : result.sample_states) sink.out() << "  " << s << '\n';
    }
  }
  return ok ? kExitOk : kExitFailure;
}

// ---- meet ----------------------------------------------------------------

struct MeetArgs {
  std::string graph;
  std::int64_t trials = 1000;
};

int cmd_meet(const Globals& g, const MeetArgs& a) {
  Sink sink(g.output);
  std::vector<double> ns, steps, times;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& spec : expand_braces(a.graph)) {
    Graph graph = build_graph(spec, g.seed);
    auto stats = measure_meeting_time(graph, a.trials, g.seed, g.rate);
    auto j = to_json(stats);
    j["graph"] = spec;
    j["n"] = graph.node_count();
    rows.push_back(j);
    ns.push_back(graph.node_count());
    steps.push_back(stats.mean_steps);
    times.push_back(stats.mean_time);
  }
  nlohmann::json out{{"schema_version", kSchemaVersion}, {"graphs", rows}};
  std::set<double> distinct(ns.begin(), ns.end());
  if (distinct.size() >= 2) {
    out["fit_time"] = to_json(fit_power_law(ns, times));
    out["fit_steps"] = to_json(fit_power_law(ns, steps));
  }
  sink.out() << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate, verify and audit bounded-memory protocols on graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--max-steps", g.max_steps, "Activation limit per run")->capture_default_str();
  app.add_option("--confirm-window", g.confirm_window,
                 "Activations outputs must stay correct (default 10*n*|E|)");
  app.add_option("--rate", g.rate, "Per-edge Poisson rate")->capture_default_str();
  app.add_option("--trace", g.trace, "Write the activation trace of a run to this file");
  app.add_option("--format", g.format,
                 "json, csv or text (defaults: run json, sweep csv, verify/audit text)")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--rewire", g.rewire, "none, swap:p or swap:n (period = n)")
      ->capture_default_str();
  app.add_option("-o,--output", g.output, "Output file (default stdout)");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Execute one run and emit a JSON record");
  run_cmd->add_option("-p,--protocol", run_args.protocol, "Protocol string")->required();
  run_cmd->add_option("-g,--graph", run_args.graph, "Graph spec")->required();
  run_cmd->add_option("-i,--input", run_args.input, "Colors or color:count pairs")->required();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid of runs as CSV plus a JSON summary");
  sweep_cmd->add_option("-p,--protocol", sweep_args.protocol, "Protocol string ({..} expands)")
      ->required();
  sweep_cmd->add_option("-g,--graph", sweep_args.graph, "Graph spec ({..} expands)")->required();
  sweep_cmd->add_option("-i,--input", sweep_args.input, "Input spec ({..} expands)")
      ->capture_default_str();
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Seed list, e.g. 1..20")
      ->capture_default_str();
  sweep_cmd->add_option("--summary", sweep_args.summary, "Summary JSON file (default stderr)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Exhaustive stabilization check");
  verify_cmd->add_option("-p,--protocol", verify_args.protocol, "Protocol string")->required();
  verify_cmd->add_option("-g,--graph", verify_args.graph, "Graph spec")->required();
  verify_cmd->add_option("-i,--input", verify_args.input, "Colors or color:count pairs");
  verify_cmd->add_flag("--all-inputs", verify_args.all_inputs, "Verify every input assignment");
  verify_cmd->add_option("--guard", verify_args.guard, "Configuration limit per input")
      ->capture_default_str();

  AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand("audit", "Reachable-state memory audit");
  audit_cmd->add_option("protocols", audit_args.protocols, "Protocol strings")->required();

  MeetArgs meet_args;
  auto* meet_cmd = app.add_subcommand("meet", "Meeting time of two random walks");
  meet_cmd->add_option("-g,--graph", meet_args.graph, "Graph spec ({..} expands)")->required();
  meet_cmd->add_option("--trials", meet_args.trials, "Trials per graph")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(g, run_args);
    if (*sweep_cmd) return cmd_sweep(g, sweep_args);
    if (*verify_cmd) return cmd_verify(g, verify_args);
    if (*audit_cmd) return cmd_audit(g, audit_args);
    if (*meet_cmd) return cmd_meet(g, meet_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const OracleError& e) {
    std::cerr << "error: tie, unsupported: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol failure: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}
