#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "heightlab/exceptional.hpp"
#include "heightlab/twisted.hpp"

namespace heightlab::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr unsigned kDefaultDigits = 40;

const std::vector<std::string>& commands();

struct RunOptions {
  unsigned precision = 0;  // decimal digits; 0 = config value or the default
  unsigned jobs = 1;
};

struct RunResult {
  json report;
  std::string csv;  // empty when the command has no per-point table
  int exit_code = 0;  // 0 ok, 2 indeterminate verdicts present
};

/// Runs one subcommand on a parsed config. Errors propagate as heightlab::Error
/// (bad configs as ConfigInvalid).
RunResult run_experiment(const std::string& command, const json& config, const RunOptions& options);

/// Parse helpers shared with the bindings and tests.
json load_config(const std::string& path);
Rational parse_rational_value(const json& value, const std::string& what);
FieldPtr parse_field(const json& config);
FieldElement parse_element(const FieldPtr& field, const json& value);
LinearForm parse_form(const FieldPtr& field, std::size_t n, const json& value);
FormSystem parse_system(const json& config, unsigned digits);
std::vector<ProjectivePoint> parse_points(const json& value, std::size_t n);
FilterParams parse_filter(const json& config, const std::string& mode, unsigned digits);

json point_json(const ProjectivePoint& x);
json place_json(const Place& w);
json cover_json(const SubspaceCover& cover);

/// Report text as written to disk: two-space indented, keys sorted, newline-terminated.
std::string render(const json& report);

}  // namespace heightlab::harness
