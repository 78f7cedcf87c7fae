#include "anonet/records.h"

#include "anonet/error.h"
#include "anonet/registry.h"

namespace anonet {

using nlohmann::json;

RunRecord make_run_record(const ProtocolDef& protocol, const Graph& graph, std::uint64_t seed,
                          std::string input_spec, const RunOptions& options,
                          const Expectation& expected, const RunResult& result) {
  RunRecord r;
  r.protocol = protocol.name;
  r.graph = graph.generator_tag();
  r.n = graph.node_count();
  r.edges = static_cast<std::int64_t>(graph.edge_count());
  r.seed = seed;
  r.input = std::move(input_spec);
  r.rewire = to_string(options.rewire);
  r.first_correct_step = result.first_correct_step;
  r.total_steps = result.total_steps;
  r.stabilized = result.stabilized;
  r.quiescent = result.quiescent;
  r.elapsed_time = result.elapsed_time;
  for (Output o : result.final_outputs) ++r.outputs_histogram[o];
  r.oracle = expected;
  r.match = result.stabilized && expected.matches(result.final_outputs);
  return r;
}

namespace {

std::string kind_name(Expectation::Kind k) {
  return k == Expectation::Kind::kConsensus ? "consensus" : "ones";
}

Expectation::Kind parse_kind(const std::string& s) {
  if (s == "consensus") return Expectation::Kind::kConsensus;
  if (s == "ones") return Expectation::Kind::kOnesCount;
  throw ConfigError("unknown oracle kind: " + s);
}

void check_schema(const json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw ConfigError("unsupported schema_version in record");
  }
}

}  // namespace

json to_json(const RunRecord& r) {
  json hist = json::object();
  for (auto [o, c] : r.outputs_histogram) hist[std::to_string(o)] = c;
  return json{{"schema_version", kSchemaVersion},
              {"protocol", r.protocol},
              {"graph", r.graph},
              {"n", r.n},
              {"edges", r.edges},
              {"seed", r.seed},
              {"input", r.input},
              {"rewire", r.rewire},
              {"first_correct_step",
               r.first_correct_step ? json(*r.first_correct_step) : json(nullptr)},
              {"total_steps", r.total_steps},
              {"stabilized", r.stabilized},
              {"quiescent", r.quiescent},
              {"elapsed_time", r.elapsed_time},
              {"outputs_histogram", hist},
              {"oracle_kind", kind_name(r.oracle.kind)},
              {"oracle_value", r.oracle.value},
              {"match", r.match}};
}

RunRecord run_record_from_json(const json& j) {
  check_schema(j);
  RunRecord r;
  r.protocol = j.at("protocol");
  r.graph = j.at("graph");
  r.n = j.at("n");
  r.edges = j.at("edges");
  r.seed = j.at("seed");
  r.input = j.at("input");
  r.rewire = j.at("rewire");
  if (!j.at("first_correct_step").is_null()) r.first_correct_step = j.at("first_correct_step");
  r.total_steps = j.at("total_steps");
  r.stabilized = j.at("stabilized");
  r.quiescent = j.at("quiescent");
  r.elapsed_time = j.at("elapsed_time");
  for (auto& [k, v] : j.at("outputs_histogram").items()) {
    r.outputs_histogram[parse_int(k, "histogram key")] = v.get<std::int64_t>();
  }
  r.oracle = {parse_kind(j.at("oracle_kind")), j.at("oracle_value").get<Output>()};
  r.match = j.at("match");
  return r;
}

SweepRow sweep_row(const RunRecord& r) {
  return {r.protocol,    r.n,     r.edges, r.graph,        r.seed, r.first_correct_step,
          r.total_steps, r.stabilized, r.input, r.oracle.value, r.match};
}

std::string csv_header() {
  return "protocol,n,edges,graph,seed,first_correct_step,total_steps,stabilized,input,"
         "oracle_value,match";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("invalid boolean in CSV: " + s);
}

}  // namespace

std::string to_csv(const SweepRow& row) {
  std::string out;
  out += csv_field(row.protocol) + ',';
  out += std::to_string(row.n) + ',';
  out += std::to_string(row.edges) + ',';
  out += csv_field(row.graph) + ',';
  out += std::to_string(row.seed) + ',';
  out += (row.first_correct_step ? std::to_string(*row.first_correct_step) : "") + ',';
  out += std::to_string(row.total_steps) + ',';
  out += std::string(row.stabilized ? "true" : "false") + ',';
  out += csv_field(row.input) + ',';
  out += std::to_string(row.oracle_value) + ',';
  out += row.match ? "true" : "false";
  return out;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ConfigError("unterminated quote in CSV line");
  return fields;
}

SweepRow sweep_row_from_csv(const std::string& line) {
  auto f = parse_csv_line(line);
  if (f.size() != 11) throw ConfigError("expected 11 CSV fields, got " + std::to_string(f.size()));
  SweepRow row;
  row.protocol = f[0];
  row.n = static_cast<NodeId>(parse_int(f[1], "n"));
  row.edges = parse_int(f[2], "edges");
  row.graph = f[3];
  row.seed = parse_seed(f[4]);
  if (!f[5].empty()) row.first_correct_step = parse_int(f[5], "first_correct_step");
  row.total_steps = parse_int(f[6], "total_steps");
  row.stabilized = parse_bool(f[7]);
  row.input = f[8];
  row.oracle_value = parse_int(f[9], "oracle_value");
  row.match = parse_bool(f[10]);
  return row;
}

json to_json(const VerifyResult& v) {
  json j{{"schema_version", kSchemaVersion},
         {"protocol", v.protocol},
         {"graph", v.graph},
         {"input", v.input},
         {"verdict", to_string(v.verdict)},
         {"states_explored", v.states_explored},
         {"value", v.expected.value},
         {"value_kind", kind_name(v.expected.kind)},
         {"terminal_components", v.terminal_components}};
  if (!v.witness.empty()) j["witness"] = v.witness;
  return j;
}

VerifyResult verify_result_from_json(const json& j) {
  check_schema(j);
  VerifyResult v;
  v.protocol = j.at("protocol");
  v.graph = j.at("graph");
  v.input = j.at("input").get<std::vector<int>>();
  v.verdict = parse_verdict(j.at("verdict").get<std::string>());
  v.states_explored = j.at("states_explored");
  v.expected = {parse_kind(j.at("value_kind")), j.at("value").get<Output>()};
  v.terminal_components = j.at("terminal_components");
  v.witness = j.value("witness", "");
  return v;
}

json to_json(const AuditResult& a) {
  json j{{"schema_version", kSchemaVersion},
         {"protocol", a.protocol},
         {"states", a.states},
         {"measured_bits", a.measured_bits},
         {"declared_bits", a.declared_bits},
         {"reference_bits", a.reference_bits},
         {"exhaustive_instances", a.exhaustive_instances},
         {"sampled_runs", a.sampled_runs},
         {"ok", a.ok}};
  if (!a.note.empty()) j["note"] = a.note;
  if (!a.sample_states.empty()) j["sample_states"] = a.sample_states;
  return j;
}

json to_json(const PowerLawFit& f) {
  return json{{"exponent", f.exponent},     {"intercept", f.intercept},
              {"stderr", f.stderr_exponent}, {"ci_low", f.ci_low},
              {"ci_high", f.ci_high},        {"confidence", f.confidence},
              {"r_squared", f.r_squared},    {"points", f.points}};
}

json to_json(const ScalingReport& s) {
  json points = json::array();
  for (const auto& p : s.points) {
    points.push_back({{"n", p.n},
                      {"runs", p.runs},
                      {"excluded", p.excluded},
                      {"mean", p.mean},
                      {"stderr", p.stderr_mean}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"protocol", s.protocol},
              {"family", s.family},
              {"points", points},
              {"fit", to_json(s.fit)},
              {"flagged", s.flagged}};
}

json to_json(const MeetingStats& m) {
  return json{{"trials", m.trials},
              {"mean_steps", m.mean_steps},
              {"stderr_steps", m.stderr_steps},
              {"mean_time", m.mean_time},
              {"stderr_time", m.stderr_time}};
}

}  // namespace anonet
