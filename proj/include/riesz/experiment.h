#ifndef RIESZ_EXPERIMENT_H_
#define RIESZ_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace riesz {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitCheckFailed = 2 };

struct ExperimentConfig {
  std::string command;  // subeq | garding | grass | flow | sphere
  std::string action;
  std::string spec_path;
  std::map<std::string, std::string> entries;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::optional<double> tol;
  std::optional<int> budget;
};

// Builds a config from spec text plus flag values. The seed must come from
// exactly one source (or agree); throws ConfigError otherwise.
ExperimentConfig ParseConfig(const std::string& command,
                             const std::string& action,
                             const std::string& spec_text,
                             std::optional<std::uint64_t> seed_flag,
                             std::optional<double> tol_flag = std::nullopt,
                             std::optional<int> budget_flag = std::nullopt);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  nlohmann::json config;   // every resolved parameter
  nlohmann::json results;  // module payload
  std::optional<CsvTable> table;
  int exit_code = kExitOk;
  std::string error;  // set when exit_code == kExitConfig
};

// Never throws for bad input: configuration problems come back with
// exit_code 1 and failed checks with exit_code 2.
RunReport Run(const ExperimentConfig& config);

std::string SerializeJson(const RunReport& report);
std::string SerializeCsv(const CsvTable& table);

// Writes <command>-<action>-<seed>.json (and .csv when a table exists) into
// the output directory and returns the written paths.
std::vector<std::string> EmitTables(const RunReport& report,
                                    const ExperimentConfig& config);

}  // namespace riesz

#endif  // RIESZ_EXPERIMENT_H_
