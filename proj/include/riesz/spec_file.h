#ifndef RIESZ_SPEC_FILE_H_
#define RIESZ_SPEC_FILE_H_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riesz/linalg.h"

namespace riesz {

// Malformed or contradictory experiment input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// key = value lines; '#' starts a comment; keys are case-insensitive.
// Duplicate keys and lines without '=' are rejected.
std::map<std::string, std::string> ParseSpecText(const std::string& text);
std::map<std::string, std::string> LoadSpecFile(const std::string& path);

// Typed access to spec entries. Every value handed out (including
// defaults) is recorded in echo(); Finish() rejects keys nobody asked for.
class ParamReader {
 public:
  explicit ParamReader(std::map<std::string, std::string> entries);

  bool Has(const std::string& key) const;
  std::string String(const std::string& key, const std::string& def);
  std::string RequireString(const std::string& key);
  std::optional<std::string> OptionalString(const std::string& key);
  int Int(const std::string& key, int def);
  int RequireInt(const std::string& key);
  double Real(const std::string& key, double def);
  double RequireReal(const std::string& key);
  std::optional<double> OptionalReal(const std::string& key);
  std::vector<double> Reals(const std::string& key,
                            const std::vector<double>& def);
  std::optional<std::vector<double>> OptionalReals(const std::string& key);
  // Rows separated by ';', entries by ','.
  std::optional<Matrix> OptionalMatrix(const std::string& key);

  // Records a value that was resolved elsewhere (flags, derived defaults).
  void Echo(const std::string& key, const nlohmann::json& value);
  void Finish() const;
  const nlohmann::json& echo() const { return echo_; }

 private:
  std::optional<std::string> Take(const std::string& key);

  std::map<std::string, std::string> entries_;
  std::set<std::string> used_;
  nlohmann::json echo_ = nlohmann::json::object();
};

double ParseReal(const std::string& text, const std::string& what);
long long ParseInt(const std::string& text, const std::string& what);
std::vector<double> ParseReals(const std::string& text, const std::string& what);

}  // namespace riesz

#endif  // RIESZ_SPEC_FILE_H_
