#include "filterlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"

namespace filterlab {

std::string_view to_string(DensityStatus status) noexcept {
  switch (status) {
    case DensityStatus::converged: return "converged";
    case DensityStatus::oscillating: return "oscillating";
    case DensityStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<Index> density_checkpoints(Index horizon, const DensityOptions& options) {
  std::vector<Index> cps;
  const double first = static_cast<double>(options.first_checkpoint);
  for (int i = 0;; ++i) {
    const double v = std::floor(first * std::exp2(static_cast<double>(i) / options.per_octave));
    if (v > static_cast<double>(horizon)) break;
    cps.push_back(static_cast<Index>(v));
  }
  for (int j = 1; j < 63; ++j) {
    const Index p = Index{1} << j;
    if (p - 1 > horizon) break;
    if (p - 1 >= options.first_checkpoint) cps.push_back(p - 1);
    if (p <= horizon && p >= options.first_checkpoint) cps.push_back(p);
  }
  cps.push_back(horizon);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

namespace {

// Depth of the deepest interior peak or valley: the largest d such that some
// i < j < k has r_j above (or below) both r_i and r_k by at least d.
double excursion(const std::vector<double>& r) {
  const std::size_t n = r.size();
  if (n < 3) return 0.0;
  std::vector<double> pmin(n), pmax(n), smin(n), smax(n);
  pmin[0] = pmax[0] = r[0];
  for (std::size_t i = 1; i < n; ++i) {
    pmin[i] = std::min(pmin[i - 1], r[i]);
    pmax[i] = std::max(pmax[i - 1], r[i]);
  }
  smin[n - 1] = smax[n - 1] = r[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    smin[i] = std::min(smin[i + 1], r[i]);
    smax[i] = std::max(smax[i + 1], r[i]);
  }
  double best = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    best = std::max(best, std::min(r[j] - pmin[j], r[j] - smin[j]));
    best = std::max(best, std::min(pmax[j] - r[j], smax[j] - r[j]));
  }
  return best;
}

bool window_oscillates(const std::vector<double>& r, double threshold) {
  if (r.size() < 3) return false;
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  return *hi - *lo > threshold && excursion(r) > threshold;
}

void check_modulus(const ModulusFunction& f) {
  if (!f.is_unbounded()) throw BoundedModulusError(f.name());
}

}  // namespace

DensityEstimate f_density(const NatSet& a, const ModulusFunction& f, Index horizon,
                          const DensityOptions& options) {
  check_modulus(f);
  if (horizon < options.min_horizon)
    throw PreconditionError("density horizon " + std::to_string(horizon) + " is below " +
                            std::to_string(options.min_horizon));
  if (!(options.window > 0.0 && options.window < 1.0))
    throw PreconditionError("density window must lie in (0, 1)");

  const std::vector<Index> cps = density_checkpoints(horizon, options);
  const std::vector<Index> counts = a.counts_at(cps);

  DensityEstimate est;
  est.horizon = horizon;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const double denom = f(static_cast<double>(cps[i]));
    if (!(denom > 0.0)) continue;
    const double ratio = f(static_cast<double>(counts[i])) / denom;
    est.samples.emplace_back(cps[i], std::clamp(ratio, 0.0, 1.0));
  }
  if (est.samples.size() < 2) return est;

  const std::size_t k = est.samples.size();
  const std::size_t w = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(options.window * static_cast<double>(k))));
  const std::size_t start = k - std::min(w, k);
  std::vector<double> tail;
  for (std::size_t i = start; i < k; ++i) tail.push_back(est.samples[i].second);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  est.tail_inf = *lo;
  est.tail_sup = *hi;

  if (est.tail_sup - est.tail_inf <= options.tolerance) {
    est.status = DensityStatus::converged;
    est.value = 0.5 * (est.tail_inf + est.tail_sup);
    return est;
  }

  // Oscillation must show in the tail window and in the window one doubling
  // earlier.
  const double threshold = 10.0 * options.tolerance;
  const Index lo_n = est.samples[start].first / 2, hi_n = horizon / 2;
  std::vector<double> earlier;
  for (const auto& [n, r] : est.samples) {
    if (n >= lo_n && n <= hi_n) earlier.push_back(r);
  }
  if (window_oscillates(tail, threshold) && window_oscillates(earlier, threshold)) {
    est.status = DensityStatus::oscillating;
  }
  return est;
}

Verdict has_f_density_zero(const NatSet& a, const ModulusFunction& f, Index horizon,
                           const DensityOptions& options) {
  check_modulus(f);
  if (horizon < options.min_horizon)
    throw PreconditionError("density horizon " + std::to_string(horizon) + " is below " +
                            std::to_string(options.min_horizon));

  Json diag;
  diag["set"] = a.to_string();
  diag["modulus"] = f.name();

  if (a.is_finite() == true) {
    diag["rule"] = "finite-by-construction";
    return Verdict::make(Outcome::holds, "set is finite, so its f-density is 0 for unbounded f",
                         std::move(diag));
  }

  const Index effective = std::min(horizon, a.known_horizon());
  diag["horizon"] = effective;
  if (effective < options.min_horizon) {
    diag["rule"] = "insufficient-horizon";
    return Verdict::make(Outcome::inconclusive,
                         "set is known only up to " + std::to_string(effective), std::move(diag));
  }

  const DensityEstimate est = f_density(a, f, effective, options);
  Json e = to_json(est);
  e.erase("samples");
  diag["estimate"] = e;

  Verdict v;
  v.diagnostics = std::move(diag);
  if (est.status == DensityStatus::converged && est.tail_sup <= options.zero_tolerance) {
    v.outcome = Outcome::holds;
    v.reason = "tail ratios stay below " + dsl::format_number(options.zero_tolerance);
  } else if (est.status == DensityStatus::converged && *est.value > 10.0 * options.zero_tolerance) {
    v.outcome = Outcome::fails;
    v.reason = "f-density converges to " + dsl::format_number(*est.value);
  } else if (est.status == DensityStatus::oscillating) {
    v.outcome = Outcome::fails;
    v.reason = "f-density ratio oscillates in [" + dsl::format_number(est.tail_inf) + ", " +
               dsl::format_number(est.tail_sup) + "]";
  } else {
    v.outcome = Outcome::inconclusive;
    v.reason = "tail ratios in [" + dsl::format_number(est.tail_inf) + ", " +
               dsl::format_number(est.tail_sup) + "] do not certify density zero";
  }
  if (effective < horizon)
    v.warnings.push_back("horizon clipped to known range " + std::to_string(effective));
  return v;
}

Json to_json(const DensityEstimate& est) {
  Json j;
  j["value"] = est.value ? Json(*est.value) : Json(nullptr);
  j["status"] = std::string(to_string(est.status));
  j["horizon"] = est.horizon;
  j["tail_inf"] = est.tail_inf;
  j["tail_sup"] = est.tail_sup;
  Json samples = Json::array();
  for (const auto& [n, r] : est.samples) samples.push_back(Json::array({n, r}));
  j["samples"] = samples;
  return j;
}

std::string samples_csv(const DensityEstimate& est) {
  std::ostringstream out;
  out << "n,ratio\n";
  for (const auto& [n, r] : est.samples) out << n << ',' << dsl::format_number(r) << '\n';
  return out.str();
}

}  // namespace filterlab
