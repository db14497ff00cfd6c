#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermiopt/algebra.hpp"
#include "fermiopt/syk.hpp"

namespace fermiopt {

using Json = nlohmann::ordered_json;

// {"n", "terms": [{"support": [1-based ascending], "re", "im"}]}
Json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);
// {"n", "edges": [[j, k], ...]} (1-based) or {"n", "complete": true}
Json graph_to_json(const AnticommGraph& g);
AnticommGraph graph_from_json(const Json& j);

Json instance_to_json(const SykInstance& inst);
SykInstance instance_from_json(const Json& j);
std::string instance_text(const SykInstance& inst);
void save_instance(const SykInstance& inst, const std::string& path);
SykInstance load_instance(const std::string& path);
AnticommGraph load_graph(const std::string& path);
// Reads a JSON file; parse errors become InputError with the line and column.
Json read_json_file(const std::string& path);

std::string sha256_hex(const std::string& bytes);
// First 16 hex digits of the SHA-256 of the serialized instance.
std::string instance_id(const SykInstance& inst);

struct ResultRow {
  std::string instance_id;
  std::string method;
  std::string side; // upper | lower | exact
  double value = 0;
  Json extra = Json::object();
  double runtime_ms = 0;
  std::uint64_t seed = 0;
  std::string status = "ok"; // ok | error
};

inline constexpr const char* kCsvHeader = "instance_id,method,side,value,extra,runtime_ms,seed,status";
std::string csv_line(const ResultRow& row);
std::vector<ResultRow> read_csv(const std::string& path);

struct SuiteJob {
  std::string command; // diag | certify | lower | gaussian | variational
  Json params = Json::object();
  std::vector<std::uint64_t> seeds;
};

struct SuiteConfig {
  std::vector<SuiteJob> jobs;
  std::string output_dir;
  int parallelism = 1;
};

// {"output_dir", "parallelism", "jobs": [{"command", "params", "seeds": [lo, hi] or {"from", "to"} or list}]}
SuiteConfig suite_config_from_json(const Json& j);
bool is_suite_command(const std::string& command);

// One (job, seed) pair. Failures come back as a row with status=error.
ResultRow run_job(const SuiteJob& job, std::uint64_t seed, const std::string& instance_dir);
// Returns the path of results.csv inside output_dir.
std::string run_suite(const SuiteConfig& config);

Json summarize_rows(const std::vector<ResultRow>& rows);
Json summarize(const std::string& csv_path);

} // namespace fermiopt
