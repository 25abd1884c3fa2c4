#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fglab/json_io.hpp"

namespace fglab::lab {

using io::json;

/// Common experiment parameters (CLI flags map onto these 1:1).
struct ExperimentConfig {
  int p = 2;
  int h = 2;
  int field_deg = 0;  // working-field degree n; 0 = experiment default (>= h)
  int prec = 0;       // series precision N; 0 = experiment default
  uint64_t seed = 1;
  std::string experiment;
  std::string format = "json";  // json | csv
  std::string out;              // output path; empty = stdout
  std::string policy;           // JSON map degree -> coords, free-choice overrides

  json echo() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string name;
  std::string anchor;   // stable identifier of the property being verified
  std::string inputs_digest;
  std::string measured;
  std::string expected;
  bool pass = false;
};

/// Deterministic experiment record. Wall-clock timing is never part of the
/// serialized report (reruns must be byte-identical); the runner prints
/// timings to stderr instead.
class Report {
public:
  explicit Report(const ExperimentConfig& cfg) : config_(cfg.echo()) {}

  void add(Check c) { checks_.push_back(std::move(c)); }
  void add(const std::string& name, const std::string& anchor, const std::string& digest,
           const std::string& measured, const std::string& expected, bool pass) {
    checks_.push_back(Check{name, anchor, digest, measured, expected, pass});
  }

  const std::vector<Check>& checks() const { return checks_; }
  bool all_pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  json to_json() const;
  std::string to_csv() const;
  /// Serialize per `format`, write to `out` (or stdout when empty).
  void emit(const ExperimentConfig& cfg) const;

private:
  json config_;
  std::vector<Check> checks_;
};

struct RunResult {
  Report report;
  int exit_code = 0;  // 0 pass, 1 check failure, 2 usage/config, 3 precision
};

}  // namespace fglab::lab
