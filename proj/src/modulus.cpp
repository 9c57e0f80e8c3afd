#include "filterlab/modulus.hpp"

#include <algorithm>
#include <cmath>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"

namespace filterlab {

std::vector<double> default_validation_grid() {
  std::vector<double> grid;
  grid.reserve(190);
  for (int i = 0; i <= 64; ++i) grid.push_back(static_cast<double>(i));
  // 10 points per decade over [1e-6, 1e6]
  for (int k = -60; k <= 60; ++k) grid.push_back(std::pow(10.0, k / 10.0));
  return grid;
}

ModulusFunction::ModulusFunction(std::string name, Evaluator evaluator, bool unbounded,
                                 std::vector<double> grid)
    : name_(std::move(name)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      unbounded_(unbounded),
      grid_(std::make_shared<const std::vector<double>>(std::move(grid))) {}

bool ValidationReport::axioms_hold() const noexcept {
  return std::all_of(axioms.begin(), axioms.end(),
                     [](const AxiomCheck& a) { return a.outcome == Outcome::holds; });
}

bool ValidationReport::all_hold() const noexcept {
  if (!axioms_hold()) return false;
  return !claimed_unbounded || unboundedness.verdict == UnboundednessVerdict::unbounded;
}

namespace {

double checked(const ModulusFunction& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) {
    throw InvalidFunctionError(t, "modulus '" + f.name() + "' is not finite at t = " +
                                      dsl::format_number(t));
  }
  return v;
}

UnboundednessProbe probe_unboundedness(const ModulusFunction& f, const ValidationTolerances& tol) {
  UnboundednessProbe probe;
  const double f1 = checked(f, 1.0);
  double prev = f1;
  double t = 1.0;
  for (;;) {
    const double v = checked(f, t);
    probe.last_increment = v - prev;
    probe.last_probe = t;
    probe.last_value = v;
    prev = v;
    if (v > tol.unbounded_threshold) {
      probe.verdict = UnboundednessVerdict::unbounded;
      probe.evidence = "threshold";
      return probe;
    }
    if (t * 2.0 > tol.probe_cap) break;
    t *= 2.0;
  }
  if (f1 > 0.0 && probe.last_increment >= tol.sustained_growth * f1) {
    probe.verdict = UnboundednessVerdict::unbounded;
    probe.evidence = "sustained-growth";
  }
  return probe;
}

}  // namespace

ValidationReport validate_modulus(const ModulusFunction& f, const ValidationTolerances& tol) {
  ValidationReport report;
  report.name = f.name();
  report.claimed_unbounded = f.is_unbounded();

  // Integer points come first so that witnesses are reported on the counts the
  // density computations actually use.
  std::vector<double> integers, others;
  for (double x : f.validation_grid()) {
    (x == std::floor(x) ? integers : others).push_back(x);
  }
  std::sort(integers.begin(), integers.end());
  integers.erase(std::unique(integers.begin(), integers.end()), integers.end());
  std::sort(others.begin(), others.end());
  others.erase(std::unique(others.begin(), others.end()), others.end());
  std::vector<double> ordered = integers;
  ordered.insert(ordered.end(), others.begin(), others.end());

  std::vector<double> values(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i) values[i] = checked(f, ordered[i]);

  AxiomCheck zero{"zero", Outcome::holds, std::nullopt, ""};
  const double f0 = checked(f, 0.0);
  if (f0 != 0.0) {
    zero.outcome = Outcome::fails;
    zero.witness = std::make_pair(0.0, 0.0);
    zero.detail = "f(0) = " + dsl::format_number(f0);
  }
  report.axioms.push_back(zero);

  AxiomCheck monotone{"monotone", Outcome::holds, std::nullopt, ""};
  {
    std::vector<std::pair<double, double>> sorted;
    for (std::size_t i = 0; i < ordered.size(); ++i) sorted.emplace_back(ordered[i], values[i]);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i - 1].second > sorted[i].second + tol.monotone_abs) {
        monotone.outcome = Outcome::fails;
        monotone.witness = std::make_pair(sorted[i - 1].first, sorted[i].first);
        monotone.detail = "f(" + dsl::format_number(sorted[i - 1].first) + ") = " +
                          dsl::format_number(sorted[i - 1].second) + " > f(" +
                          dsl::format_number(sorted[i].first) + ") = " +
                          dsl::format_number(sorted[i].second);
        break;
      }
    }
  }
  report.axioms.push_back(monotone);

  AxiomCheck subadditive{"subadditive", Outcome::holds, std::nullopt, ""};
  for (std::size_t i = 0; i < ordered.size() && subadditive.outcome == Outcome::holds; ++i) {
    for (std::size_t j = i; j < ordered.size(); ++j) {
      const double x = ordered[i], y = ordered[j];
      const double lhs = checked(f, x + y);
      const double rhs = values[i] + values[j];
      if (lhs > rhs + tol.subadditive_rel * std::fabs(rhs)) {
        subadditive.outcome = Outcome::fails;
        subadditive.witness = std::make_pair(x, y);
        subadditive.detail = "f(" + dsl::format_number(x + y) + ") = " + dsl::format_number(lhs) +
                             " > f(" + dsl::format_number(x) + ") + f(" + dsl::format_number(y) +
                             ") = " + dsl::format_number(rhs);
        break;
      }
    }
  }
  report.axioms.push_back(subadditive);

  report.unboundedness = probe_unboundedness(f, tol);
  return report;
}

std::vector<std::string> catalog_names() {
  return {"identity", "log1p", "sqrt", "pow(p)", "bounded_rational"};
}

namespace {

ModulusFunction power_modulus(double p, std::string name) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw CatalogError("pow(p) requires p in (0, 1], got " + dsl::format_number(p));
  }
  return ModulusFunction(std::move(name), [p](double t) { return std::pow(t, p); }, true);
}

}  // namespace

ModulusFunction builtin_modulus(std::string_view raw) {
  const std::string name = dsl::trim(raw);
  if (name == "identity") return ModulusFunction("identity", [](double t) { return t; }, true);
  if (name == "log1p") return ModulusFunction("log1p", [](double t) { return std::log1p(t); }, true);
  if (name == "sqrt") return ModulusFunction("sqrt", [](double t) { return std::sqrt(t); }, true);
  if (name == "bounded_rational")
    return ModulusFunction("bounded_rational", [](double t) { return t / (1.0 + t); }, false);
  if (name.rfind("pow(", 0) == 0) {
    const dsl::Call call = dsl::parse_call(name);
    if (call.args.size() == 1) {
      const double p = dsl::parse_number(call.args[0]);
      return power_modulus(p, "pow(" + dsl::format_number(p) + ")");
    }
  }
  throw CatalogError("unknown modulus '" + name + "'; available: " + dsl::join(catalog_names(), ", "));
}

ModulusFunction modulus_from_expression(std::string_view text, const ValidationTolerances& tol) {
  const Expression e = Expression::parse(text, "t");
  const std::string name = "expr(" + dsl::trim(text) + ")";
  ModulusFunction provisional(name, e, false);
  const UnboundednessProbe probe = probe_unboundedness(provisional, tol);
  return ModulusFunction(name, e, probe.verdict == UnboundednessVerdict::unbounded);
}

ModulusFunction parse_modulus(std::string_view spec) {
  const dsl::Call call = dsl::parse_call(spec);
  if (call.head == "expr") {
    if (call.args.size() != 1) throw ParseError("expr(...) takes one expression in t");
    return modulus_from_expression(call.args[0]);
  }
  return builtin_modulus(spec);
}

ModulusFunction compose(const ModulusFunction& outer, const ModulusFunction& inner) {
  return ModulusFunction("compose(" + outer.name() + "," + inner.name() + ")",
                         [outer, inner](double t) { return outer(inner(t)); },
                         outer.is_unbounded() && inner.is_unbounded());
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["name"] = report.name;
  j["claimed_unbounded"] = report.claimed_unbounded;
  Json axioms = Json::array();
  for (const AxiomCheck& a : report.axioms) {
    Json ax;
    ax["axiom"] = a.axiom;
    ax["outcome"] = std::string(to_string(a.outcome));
    if (a.witness) ax["witness"] = Json::array({a.witness->first, a.witness->second});
    if (!a.detail.empty()) ax["detail"] = a.detail;
    axioms.push_back(ax);
  }
  j["axioms"] = axioms;
  Json u;
  u["verdict"] = report.unboundedness.verdict == UnboundednessVerdict::unbounded
                     ? "unbounded"
                     : "inconclusive-bounded";
  if (!report.unboundedness.evidence.empty()) u["evidence"] = report.unboundedness.evidence;
  u["last_probe"] = report.unboundedness.last_probe;
  u["last_value"] = report.unboundedness.last_value;
  u["last_increment"] = report.unboundedness.last_increment;
  j["unboundedness"] = u;
  j["all_hold"] = report.all_hold();
  return j;
}

}  // namespace filterlab
