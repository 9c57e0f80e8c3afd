#pragma once
// Modulus functions f: [0, inf) -> [0, inf) (f(0) = 0, non-decreasing,
// subadditive) treated as black boxes and certified on a sampling grid.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "filterlab/verdict.hpp"

namespace filterlab {

/// 0, 121 log-spaced points on [1e-6, 1e6], and every integer up to 64.
std::vector<double> default_validation_grid();

class ModulusFunction {
 public:
  using Evaluator = std::function<double(double)>;

  ModulusFunction(std::string name, Evaluator evaluator, bool unbounded,
                  std::vector<double> grid = default_validation_grid());

  double operator()(double t) const { return (*evaluator_)(t); }

  const std::string& name() const noexcept { return name_; }
  bool is_unbounded() const noexcept { return unbounded_; }
  const std::vector<double>& validation_grid() const noexcept { return *grid_; }

 private:
  std::string name_;
  std::shared_ptr<const Evaluator> evaluator_;
  bool unbounded_;
  std::shared_ptr<const std::vector<double>> grid_;
};

struct ValidationTolerances {
  double monotone_abs = 1e-12;
  double subadditive_rel = 1e-9;
  double unbounded_threshold = 1e6;
  double probe_cap = 1e12;
  // Relative size, against f(1), of the last doubling increment below the
  // probe cap that still counts as sustained growth.
  double sustained_growth = 1e-3;
};

struct AxiomCheck {
  std::string axiom;
  Outcome outcome = Outcome::holds;
  std::optional<std::pair<double, double>> witness;
  std::string detail;
};

enum class UnboundednessVerdict { unbounded, inconclusive_bounded };

struct UnboundednessProbe {
  UnboundednessVerdict verdict = UnboundednessVerdict::inconclusive_bounded;
  double last_probe = 0.0;
  double last_value = 0.0;
  double last_increment = 0.0;
  std::string evidence;  // "threshold" or "sustained-growth" when unbounded
};

struct ValidationReport {
  std::string name;
  bool claimed_unbounded = false;
  std::vector<AxiomCheck> axioms;  // zero, monotone, subadditive
  UnboundednessProbe unboundedness;

  bool axioms_hold() const noexcept;
  /// Axioms hold and, when unboundedness is claimed, the probe agrees.
  bool all_hold() const noexcept;
};

/// Throws InvalidFunctionError when the evaluator returns a non-finite value
/// at a grid point or probe.
ValidationReport validate_modulus(const ModulusFunction& f, const ValidationTolerances& tol = {});

/// identity, log1p, sqrt, pow(p) with p in (0, 1], bounded_rational.
ModulusFunction builtin_modulus(std::string_view name);
std::vector<std::string> catalog_names();

/// Modulus from an arithmetic expression in `t`; the unboundedness flag is
/// taken from the probe.
ModulusFunction modulus_from_expression(std::string_view expr, const ValidationTolerances& tol = {});

/// Accepts a catalog name, `pow(p)`, or `expr(<expression in t>)`.
ModulusFunction parse_modulus(std::string_view spec);

/// outer(inner(t)); unbounded when both are.
ModulusFunction compose(const ModulusFunction& outer, const ModulusFunction& inner);

Json to_json(const ValidationReport& report);

}  // namespace filterlab
