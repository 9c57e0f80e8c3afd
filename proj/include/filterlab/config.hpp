#pragma once
// Run configuration in an INI-like format:
//
//   horizon = 1e6
//   [modulus]
//   name = log1p          (or expr = "t*t")
//   [sets] / [filters] / [sequences]
//   <label> = <DSL text>
//   [output]
//   report = out.json
//   format = json
//   [experiment.<name>]
//   <parameter> = <value>
//
// Top-level keys may also address a section with a dotted prefix, as in
// `modulus.expr = "t*t"`.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filterlab/error.hpp"

namespace filterlab {

struct RunConfig {
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> dim;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> jobs;
  std::optional<std::string> modulus_name;
  std::optional<std::string> modulus_expr;
  std::map<std::string, std::string> sets;
  std::map<std::string, std::string> filters;
  std::map<std::string, std::string> sequences;
  std::map<std::string, std::map<std::string, std::string>> experiments;
  std::optional<std::string> report_path;
  std::optional<std::string> format;

  bool operator==(const RunConfig&) const = default;
};

struct ConfigIssue {
  std::size_t line = 0;
  std::string message;
};

class ConfigParseError : public ConfigError {
 public:
  explicit ConfigParseError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses and validates every DSL value. Throws ConfigParseError carrying
/// all issues found, each with its line number.
RunConfig parse_config(std::string_view text);

/// Canonical text; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace filterlab
