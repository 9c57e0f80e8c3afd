#include "filterlab/verdict.hpp"

#include "filterlab/error.hpp"

namespace filterlab {

std::string_view to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::holds: return "holds";
    case Outcome::fails: return "fails";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Outcome outcome_from_string(std::string_view text) {
  if (text == "holds") return Outcome::holds;
  if (text == "fails") return Outcome::fails;
  if (text == "inconclusive") return Outcome::inconclusive;
  throw ParseError("unknown outcome '" + std::string(text) + "'");
}

Outcome conjunction(Outcome a, Outcome b) noexcept {
  if (a == Outcome::fails || b == Outcome::fails) return Outcome::fails;
  if (a == Outcome::inconclusive || b == Outcome::inconclusive) return Outcome::inconclusive;
  return Outcome::holds;
}

Outcome negate(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::holds: return Outcome::fails;
    case Outcome::fails: return Outcome::holds;
    default: return Outcome::inconclusive;
  }
}

Json to_json(const Verdict& verdict) {
  Json j;
  j["outcome"] = std::string(to_string(verdict.outcome));
  j["reason"] = verdict.reason;
  if (!verdict.warnings.empty()) j["warnings"] = verdict.warnings;
  j["diagnostics"] = verdict.diagnostics;
  return j;
}

}  // namespace filterlab
