#pragma once
// Report emission. Every report carries the tool name and version; field
// order follows insertion order so identical inputs give identical bytes.

#include <string>
#include <string_view>

#include "filterlab/verdict.hpp"

namespace filterlab {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ReportFormat { json, csv, text };

/// Throws ConfigError for anything but json, csv or text.
ReportFormat parse_format(std::string_view text);

/// {"tool", "version", "command", "result"}.
Json envelope(std::string_view command, Json result);

/// JSON is pretty printed with a trailing newline. CSV picks the natural
/// table: density samples as (n, ratio), experiment arrays as one row per
/// sub-verdict, verdicts as one row per check, otherwise key/value pairs.
std::string emit_report(const Json& report, ReportFormat format);

/// Throws Error("io") when the path cannot be written.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace filterlab
