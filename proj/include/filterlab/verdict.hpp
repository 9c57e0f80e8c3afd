#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace filterlab {

using Json = nlohmann::ordered_json;

/// Tri-state outcome of every finite-horizon certificate.
enum class Outcome { holds, fails, inconclusive };

std::string_view to_string(Outcome outcome) noexcept;
Outcome outcome_from_string(std::string_view text);

/// Conjunction: any fails wins, otherwise any inconclusive, otherwise holds.
Outcome conjunction(Outcome a, Outcome b) noexcept;

/// Holds only when the certifying numeric condition met its tolerance; the
/// diagnostics carry the estimate or witness that decided it.
struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  std::string reason;
  Json diagnostics = Json::object();
  std::vector<std::string> warnings;

  bool holds() const noexcept { return outcome == Outcome::holds; }
  bool fails() const noexcept { return outcome == Outcome::fails; }
  bool inconclusive() const noexcept { return outcome == Outcome::inconclusive; }

  static Verdict make(Outcome outcome, std::string reason, Json diagnostics = Json::object()) {
    Verdict v;
    v.outcome = outcome;
    v.reason = std::move(reason);
    v.diagnostics = std::move(diagnostics);
    return v;
  }
};

Json to_json(const Verdict& verdict);

/// Swaps holds and fails; inconclusive stays.
Outcome negate(Outcome outcome) noexcept;

}  // namespace filterlab
