#pragma once
// Shared tokenizer for the textual constructor languages (sets, filters,
// index maps, sequences, vectors, spaces). Every form is either a bare
// identifier (`squares`), a call `head(arg, arg, ...)`, a bracketed list
// `[1, 2, 3]` or a brace map `{a: 1, b: 2}`. Arguments are kept as raw text
// so that each language can interpret them (nested calls or arithmetic).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace filterlab::dsl {

struct Call {
  std::string head;               // identifier, or "[" / "{" for literals
  std::vector<std::string> args;  // trimmed raw argument text
  bool has_parens = false;
};

/// Throws ParseError on unbalanced brackets or an empty head.
Call parse_call(std::string_view text);

/// Splits on top-level commas (ignoring commas nested in brackets).
std::vector<std::string> split_top_level(std::string_view text, char separator = ',');

std::string trim(std::string_view text);

/// Numbers accept plain decimals and exponent forms like `1e6`.
double parse_number(std::string_view text);
std::uint64_t parse_index(std::string_view text);
std::int64_t parse_integer(std::string_view text);

/// Canonical text for a double: shortest round-trip representation.
std::string format_number(double value);

std::string join(const std::vector<std::string>& parts, std::string_view separator = ",");

}  // namespace filterlab::dsl
