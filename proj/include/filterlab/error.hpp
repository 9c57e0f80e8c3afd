#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace filterlab {

/// Base class of every error raised by the library. `code()` is a stable
/// machine-readable tag used in JSON reports and by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidFunctionError : public Error {
 public:
  InvalidFunctionError(double point, const std::string& message)
      : Error("invalid-function", message), point_(point) {}
  double point() const noexcept { return point_; }

 private:
  double point_;
};

class CatalogError : public Error {
 public:
  explicit CatalogError(const std::string& message) : Error("catalog", message) {}
};

class HorizonExceededError : public Error {
 public:
  HorizonExceededError(std::uint64_t requested, std::uint64_t cap, const std::string& what)
      : Error("horizon-exceeded", "horizon " + std::to_string(requested) + " exceeds cap " +
                                      std::to_string(cap) + " for " + what),
        requested_(requested),
        cap_(cap) {}
  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

class BoundedModulusError : public Error {
 public:
  explicit BoundedModulusError(const std::string& name)
      : Error("bounded-modulus", "f-density requires an unbounded modulus; '" + name +
                                     "' is bounded") {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& message)
      : Error("dimension-mismatch", message) {}
};

class UnknownLabelError : public Error {
 public:
  explicit UnknownLabelError(const std::string& label)
      : Error("unknown-label", "unknown seminorm label '" + label + "'") {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset = 0)
      : Error("parse", message), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IndexOverflowError : public Error {
 public:
  explicit IndexOverflowError(const std::string& message) : Error("index-overflow", message) {}
};

class BaseNotFilterError : public Error {
 public:
  explicit BaseNotFilterError(const std::string& message) : Error("base-not-filter", message) {}
};

class NotCauchyFilterError : public Error {
 public:
  NotCauchyFilterError(std::size_t index, double diameter, double allowed)
      : Error("not-cauchy-filter",
              "diameter check failed at base element " + std::to_string(index) +
                  ": diameter " + std::to_string(diameter) + " exceeds " + std::to_string(allowed)),
        index_(index),
        diameter_(diameter),
        allowed_(allowed) {}
  std::size_t index() const noexcept { return index_; }
  double diameter() const noexcept { return diameter_; }
  double allowed() const noexcept { return allowed_; }

 private:
  std::size_t index_;
  double diameter_;
  double allowed_;
};

class AuditSkippedError : public Error {
 public:
  explicit AuditSkippedError(const std::string& message) : Error("audit-skipped", message) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message) : Error("precondition", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config", message) {}
};

}  // namespace filterlab
