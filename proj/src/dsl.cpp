#include "filterlab/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "filterlab/error.hpp"

namespace filterlab::dsl {

std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::vector<std::string> split_top_level(std::string_view text, char separator) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') {
      if (--depth < 0) throw ParseError("unbalanced '" + std::string(1, c) + "' in '" + std::string(text) + "'", i);
    }
    if (c == separator && depth == 0) {
      parts.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced brackets in '" + std::string(text) + "'");
  std::string last = trim(text.substr(start));
  if (!last.empty() || !parts.empty()) parts.push_back(std::move(last));
  return parts;
}

Call parse_call(std::string_view raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ParseError("empty expression");
  Call call;
  const char first = text.front();
  if (first == '[' || first == '{') {
    const char close = first == '[' ? ']' : '}';
    if (text.back() != close) throw ParseError("unterminated literal '" + text + "'");
    call.head = std::string(1, first);
    call.has_parens = true;
    const std::string inner = text.substr(1, text.size() - 2);
    if (!trim(inner).empty()) call.args = split_top_level(inner);
    return call;
  }
  const std::size_t open = text.find('(');
  if (open == std::string::npos) {
    call.head = text;
    return call;
  }
  if (text.back() != ')') throw ParseError("expected ')' at end of '" + text + "'");
  call.head = trim(std::string_view(text).substr(0, open));
  if (call.head.empty()) throw ParseError("missing constructor name in '" + text + "'");
  call.has_parens = true;
  const std::string inner = text.substr(open + 1, text.size() - open - 2);
  // verify the opening paren closes at the very end
  int depth = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')' && --depth == 0 && i + 1 != text.size())
      throw ParseError("trailing text after ')' in '" + text + "'", i);
  }
  if (!trim(inner).empty()) call.args = split_top_level(inner);
  return call;
}

double parse_number(std::string_view raw) {
  const std::string text = trim(raw);
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e || text.empty())
    throw ParseError("expected a number, got '" + text + "'");
  return v;
}

std::uint64_t parse_index(std::string_view raw) {
  const double v = parse_number(raw);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
    throw ParseError("expected a non-negative integer, got '" + trim(raw) + "'");
  return static_cast<std::uint64_t>(v);
}

std::int64_t parse_integer(std::string_view raw) {
  const double v = parse_number(raw);
  if (v != std::floor(v) || std::fabs(v) > 9.0e18)
    throw ParseError("expected an integer, got '" + trim(raw) + "'");
  return static_cast<std::int64_t>(v);
}

std::string format_number(double value) {
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& parts, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += separator;
    out += parts[i];
  }
  return out;
}

}  // namespace filterlab::dsl
