#pragma once

// Scenario configuration files and result/curve/sweep writers.
//
// A configuration is a flat list of `key = value` lines; `#` starts a comment.
// Angles are given in degrees and converted to radians on load.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "searchload/oracle.hpp"
#include "searchload/solver.hpp"

namespace searchload {

class ConfigError : public std::runtime_error {
 public:
  /// `line` is 1-based, 0 when the problem is not tied to one line.
  ConfigError(std::string source, int line, std::string field, const std::string& message);

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

struct ScenarioConfig {
  RadarScenario scenario;
  TargetModel target;
  Requirements requirements;
  SolverOptions options;
};

/// Keys accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Header plus one row per sample; every double printed with 17 significant digits.
void write_curves_csv(std::ostream& out, const std::vector<CurveSample>& curves);

/// Parses what write_curves_csv produced.
std::vector<CurveSample> read_curves_csv(std::istream& in);

/// Human-readable `key = value` summary with dimensional back-conversion.
void write_result(std::ostream& out, const OptimizationResult& result, const ScenarioConfig& cfg);

void write_sweep_csv(std::ostream& out, const std::string& axis,
                     const std::vector<SweepPoint>& points);

void write_verify_report(std::ostream& out, const oracle::VerifyReport& report);

}  // namespace searchload
