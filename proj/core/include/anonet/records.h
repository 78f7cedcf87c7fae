#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "anonet/audit.h"
#include "anonet/engine.h"
#include "anonet/scaling.h"
#include "anonet/verify.h"

namespace anonet {

inline constexpr int kSchemaVersion = 1;

struct RunRecord {
  std::string protocol;
  std::string graph;
  NodeId n = 0;
  std::int64_t edges = 0;
  std::uint64_t seed = 0;
  std::string input;
  std::string rewire = "none";
  std::optional<std::int64_t> first_correct_step;
  std::int64_t total_steps = 0;
  bool stabilized = false;
  bool quiescent = false;
  double elapsed_time = 0.0;
  std::map<Output, std::int64_t> outputs_histogram;
  Expectation oracle;
  bool match = false;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord make_run_record(const ProtocolDef& protocol, const Graph& graph, std::uint64_t seed,
                          std::string input_spec, const RunOptions& options,
                          const Expectation& expected, const RunResult& result);

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

// One sweep row. CSV columns, in order:
// protocol,n,edges,graph,seed,first_correct_step,total_steps,stabilized,input,oracle_value,match
struct SweepRow {
  std::string protocol;
  NodeId n = 0;
  std::int64_t edges = 0;
  std::string graph;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> first_correct_step;
  std::int64_t total_steps = 0;
  bool stabilized = false;
  std::string input;
  Output oracle_value = 0;
  bool match = false;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

SweepRow sweep_row(const RunRecord& r);
std::string csv_header();
std::string to_csv(const SweepRow& row);
SweepRow sweep_row_from_csv(const std::string& line);
std::vector<std::string> parse_csv_line(const std::string& line);

nlohmann::json to_json(const VerifyResult& v);
VerifyResult verify_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AuditResult& a);
nlohmann::json to_json(const PowerLawFit& f);
nlohmann::json to_json(const ScalingReport& s);
nlohmann::json to_json(const MeetingStats& m);

}  // namespace anonet
