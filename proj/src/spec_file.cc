#include "riesz/spec_file.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace riesz {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(Trim(item));
  return out;
}

}  // namespace

double ParseReal(const std::string& text, const std::string& what) {
  const std::string t = Trim(text);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
  if (pos != t.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

long long ParseInt(const std::string& text, const std::string& what) {
  const std::string t = Trim(text);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
  if (pos != t.size()) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> ParseReals(const std::string& text,
                               const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : Split(text, ',')) {
    out.push_back(ParseReal(item, what));
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

std::map<std::string, std::string> ParseSpecText(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("spec line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = Lower(Trim(line.substr(0, eq)));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("spec line " + std::to_string(lineno) + ": empty key");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("spec: duplicate key '" + key + "'");
    }
  }
  return out;
}

std::map<std::string, std::string> LoadSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseSpecText(buf.str());
}

ParamReader::ParamReader(std::map<std::string, std::string> entries)
    : entries_(std::move(entries)) {}

bool ParamReader::Has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::optional<std::string> ParamReader::Take(const std::string& key) {
  used_.insert(key);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ParamReader::Echo(const std::string& key, const nlohmann::json& value) {
  used_.insert(key);
  echo_[key] = value;
}

std::string ParamReader::String(const std::string& key,
                                const std::string& def) {
  const std::string v = Take(key).value_or(def);
  echo_[key] = v;
  return v;
}

std::string ParamReader::RequireString(const std::string& key) {
  const auto v = Take(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  echo_[key] = *v;
  return *v;
}

std::optional<std::string> ParamReader::OptionalString(const std::string& key) {
  const auto v = Take(key);
  if (v) echo_[key] = *v;
  return v;
}

int ParamReader::Int(const std::string& key, int def) {
  const auto v = Take(key);
  const int out = v ? static_cast<int>(ParseInt(*v, key)) : def;
  echo_[key] = out;
  return out;
}

int ParamReader::RequireInt(const std::string& key) {
  const auto v = Take(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  const int out = static_cast<int>(ParseInt(*v, key));
  echo_[key] = out;
  return out;
}

double ParamReader::Real(const std::string& key, double def) {
  const auto v = Take(key);
  const double out = v ? ParseReal(*v, key) : def;
  echo_[key] = out;
  return out;
}

double ParamReader::RequireReal(const std::string& key) {
  const auto v = Take(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  const double out = ParseReal(*v, key);
  echo_[key] = out;
  return out;
}

std::optional<double> ParamReader::OptionalReal(const std::string& key) {
  const auto v = Take(key);
  if (!v) return std::nullopt;
  const double out = ParseReal(*v, key);
  echo_[key] = out;
  return out;
}

std::vector<double> ParamReader::Reals(const std::string& key,
                                       const std::vector<double>& def) {
  const auto v = Take(key);
  const std::vector<double> out = v ? ParseReals(*v, key) : def;
  echo_[key] = out;
  return out;
}

std::optional<std::vector<double>> ParamReader::OptionalReals(
    const std::string& key) {
  const auto v = Take(key);
  if (!v) return std::nullopt;
  const std::vector<double> out = ParseReals(*v, key);
  echo_[key] = out;
  return out;
}

std::optional<Matrix> ParamReader::OptionalMatrix(const std::string& key) {
  const auto v = Take(key);
  if (!v) return std::nullopt;
  std::vector<std::vector<double>> rows;
  for (const std::string& row : Split(*v, ';')) {
    if (row.empty()) continue;
    rows.push_back(ParseReals(row, key));
  }
  if (rows.empty()) throw ConfigError(key + ": empty matrix");
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ConfigError(key + ": ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  echo_[key] = rows;
  return m;
}

void ParamReader::Finish() const {
  for (const auto& [key, value] : entries_) {
    if (!used_.count(key)) throw ConfigError("unknown key '" + key + "'");
  }
}

}  // namespace riesz
