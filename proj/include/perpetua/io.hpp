#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "perpetua/analysis.hpp"
#include "perpetua/errors.hpp"
#include "perpetua/harness.hpp"
#include "perpetua/levy.hpp"
#include "perpetua/test_function.hpp"

namespace perpetua {

using nlohmann::json;

// One problem found in a config file. line is 1-based, 0 when unknown;
// field is a JSON pointer.
struct ConfigDiagnostic {
  int line = 0;
  std::string field;
  std::string message;
};

class ConfigError : public Error {
 public:
  // Diagnostics are kept in line order.
  ConfigError(std::string source, std::vector<ConfigDiagnostic> diagnostics);
  const std::vector<ConfigDiagnostic>& diagnostics() const { return diagnostics_; }
  const std::string& source() const { return source_; }

 private:
  ConfigError(std::string source, std::vector<ConfigDiagnostic> sorted, int);

  std::string source_;
  std::vector<ConfigDiagnostic> diagnostics_;
};

// ---------------------------------------------------------------------------
// Serialization. Parsing collects every problem and throws ConfigError once.

json to_json(const LevyTriplet& t);
json to_json(const TestFunction& f);
json to_json(const ExtendedReal& x);
json to_json(const ClassificationFlags& flags);
json to_json(const LocalTimeReport& r);
json to_json(const ConvergenceDecision& d);
json to_json(const VerdictReport& r);
json to_json(const CheckReport& c);
json to_json(const ExperimentConfig& c);

LevyTriplet triplet_from_json(const json& j);
TestFunction test_function_from_json(const json& j);

/// `source` names the text in diagnostics (usually the file path).
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical number formatting for CSV output (shortest round-trip form).
std::string format_number(double x);

/// Throws Error(InvalidArgument) when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace perpetua
