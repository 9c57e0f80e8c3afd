// Statistical limits of bounded sequences versus their Cesaro means.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "filterlab/converge.hpp"
#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/gallery.hpp"

namespace filterlab::experiments {
namespace {

// Bounded scalar sequence: a + c sin(w n) / n^p off S, a + s on S.
struct ScalarCase {
  std::string name;
  Sequence x;
  NatSet exceptional = NatSet::empty();
  double limit = 0.0;
  double bound = 0.0;
  Json describe = Json::object();
};

double round_to(double v, double step) { return std::round(v / step) * step; }

NatSet random_sparse_set(std::mt19937_64& rng, std::string& text) {
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<int> small(2, 7);
  switch (kind(rng)) {
    case 0: text = "cubes"; break;
    case 1: text = "powers(" + std::to_string(small(rng)) + ")"; break;
    case 2: {
      std::uniform_int_distribution<int> c0(0, 20), c3(1, 4);
      text = "poly(" + std::to_string(c0(rng)) + ",0,0," + std::to_string(c3(rng)) + ")";
      break;
    }
    case 3: {
      std::uniform_int_distribution<Index> pick(1, 100'000);
      std::vector<std::string> parts;
      std::uniform_int_distribution<int> size(1, 12);
      for (int i = size(rng); i > 0; --i) parts.push_back(std::to_string(pick(rng)));
      text = "finite(" + dsl::join(parts) + ")";
      break;
    }
    case 4: text = "union(cubes,powers(" + std::to_string(small(rng)) + "))"; break;
    default: {
      std::uniform_int_distribution<int> c0(0, 50), c1(0, 9);
      text = "poly(" + std::to_string(c0(rng)) + "," + std::to_string(c1(rng)) + ",0,0,1)";
      break;
    }
  }
  return NatSet::parse(text);
}

ScalarCase random_case(std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed * 1'000'003ULL + static_cast<std::uint64_t>(index));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarCase c;
  c.name = "case " + std::to_string(index + 1);
  const double a = round_to(4.0 * u(rng) - 2.0, 1e-3);
  const double amp = round_to(0.4 * u(rng) - 0.2, 1e-3);
  const double omega = round_to(0.5 + 2.5 * u(rng), 1e-3);
  const double power = std::array<double, 3>{1.5, 2.0, 3.0}[static_cast<std::size_t>(u(rng) * 3.0) % 3];
  const double spike = round_to((0.5 + 2.5 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0), 1e-3);
  std::string set_text;
  c.exceptional = random_sparse_set(rng, set_text);
  c.limit = a;
  c.bound = std::max(std::fabs(a) + std::fabs(amp), std::fabs(a + spike));
  const NatSet s = c.exceptional;
  c.x = scalar_function_sequence(
      "perturbed(" + dsl::format_number(a) + "+" + dsl::format_number(amp) + "*sin(" +
          dsl::format_number(omega) + "*n)/n^" + dsl::format_number(power) + "," + set_text + "," +
          dsl::format_number(a + spike) + ")",
      [=](Index n) {
        const double t = static_cast<double>(n);
        return s.contains(n) ? a + spike : a + amp * std::sin(omega * t) / std::pow(t, power);
      });
  c.describe["sequence"] = c.x->describe();
  c.describe["exceptional"] = set_text;
  c.describe["limit"] = a;
  c.describe["bound"] = c.bound;
  return c;
}

ScalarCase configured_case(const ParamReader& p) {
  ScalarCase c;
  c.name = "configured";
  c.x = parse_sequence(p.text("sequence"), 1);
  c.exceptional = NatSet::parse(p.text("exceptional"));
  c.bound = p.number("bound");
  if (p.has("limit") && !p.text("limit").empty()) c.limit = p.number("limit");
  c.x = with_bound(c.x, c.bound);
  c.describe["sequence"] = c.x->describe();
  c.describe["exceptional"] = c.exceptional.to_string();
  c.describe["bound"] = c.bound;
  return c;
}

std::vector<ScalarCase> cases_from(const ParamReader& p) {
  std::vector<ScalarCase> out;
  if (!p.text("sequence").empty()) {
    out.push_back(configured_case(p));
    return out;
  }
  const auto n = static_cast<int>(p.index("cases"));
  for (int i = 0; i < n; ++i) {
    ScalarCase c = random_case(p.seed(), i);
    c.x = with_bound(c.x, c.bound);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Index> sample_indices(Index horizon) {
  std::vector<Index> out;
  for (Index n = 1; n <= std::min<Index>(horizon, 1000); ++n) out.push_back(n);
  const Index step = std::max<Index>(1, horizon / 4096);
  for (Index n = 1000 + step; n <= horizon; n += step) out.push_back(n);
  return out;
}

std::vector<double> values_up_to(const SequenceSpec& x, Index horizon) {
  std::vector<Index> idx(horizon);
  for (Index n = 1; n <= horizon; ++n) idx[n - 1] = n;
  return x.functional_values(Vector::dense({1.0}), idx);
}

// Proof constants of the Cesaro lemma on [1, H].
struct LemmaRun {
  Index threshold = 0;  // N; 0 when not certified below H/2
  double premise_spread = 0.0;
  double mean_spread = 0.0;  // max - min of y over [N, H]
  double mean_sup = 0.0;
  std::vector<double> x, y;
  std::vector<char> in_a;
};

LemmaRun lemma_constants(const ScalarCase& c, Index horizon) {
  LemmaRun r;
  r.x = values_up_to(*c.x, horizon);
  r.y.resize(horizon);
  r.in_a.resize(horizon);
  double sum = 0.0, lo = INFINITY, hi = -INFINITY;
  Index outside = 0, last_bad = 0;
  const double limit_ratio = 1.0 / (8.0 * c.bound);
  for (Index n = 1; n <= horizon; ++n) {
    const double v = r.x[n - 1];
    sum += v;
    r.y[n - 1] = sum / static_cast<double>(n);
    r.mean_sup = std::max(r.mean_sup, std::fabs(r.y[n - 1]));
    const bool in_a = !c.exceptional.contains(n);
    r.in_a[n - 1] = in_a;
    if (in_a) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    } else {
      ++outside;
    }
    if (static_cast<double>(outside) / static_cast<double>(n) >= limit_ratio) last_bad = n;
  }
  r.premise_spread = hi >= lo ? hi - lo : 0.0;
  r.threshold = last_bad + 1 <= horizon / 2 ? last_bad + 1 : 0;
  if (r.threshold) {
    double ylo = INFINITY, yhi = -INFINITY;
    for (Index n = r.threshold; n <= horizon; ++n) {
      ylo = std::min(ylo, r.y[n - 1]);
      yhi = std::max(yhi, r.y[n - 1]);
    }
    r.mean_spread = yhi - ylo;
  }
  return r;
}

// Adds the lemma sub-verdicts for one case; returns false when the premises
// or the threshold fail so that callers stop early.
bool lemma_verdicts(ExperimentReport& report, const ScalarCase& c, const LemmaRun& r, Index horizon,
                    Json& row) {
  const SpaceModel line = SpaceModel::scalar();
  report.add(c.name + ": bound", verify_bound(*c.x, line, sample_indices(horizon)));
  Json premise;
  premise["spread_on_witness_set"] = r.premise_spread;
  row["premise_spread"] = r.premise_spread;
  if (!(r.premise_spread < 0.5)) {
    report.add(c.name + ": premise",
               Verdict::make(Outcome::fails, "premise violation: p(x_n - x_m) reaches " +
                                                 dsl::format_number(r.premise_spread) +
                                                 " on the witness set",
                             premise));
    return false;
  }
  report.add(c.name + ": premise",
             Verdict::make(Outcome::holds, "p(x_n - x_m) < 1/2 on the witness set", premise));
  Json th;
  th["ratio_limit"] = 1.0 / (8.0 * c.bound);
  th["N"] = r.threshold;
  row["N"] = r.threshold;
  if (!r.threshold) {
    report.add(c.name + ": threshold",
               Verdict::make(Outcome::inconclusive,
                             "|(N \\ A)(n)|/n stays at or above 1/(8C) past half the horizon", th));
    return false;
  }
  report.add(c.name + ": threshold",
             Verdict::make(Outcome::holds, "|(N \\ A)(n)|/n < 1/(8C) for n >= " + std::to_string(r.threshold), th));
  return true;
}

}  // namespace

ExperimentReport fast_remark(const ParamReader& p) {
  ExperimentReport report;
  const Index horizon = p.index("horizon");
  const double tol = p.number("cesaro_tolerance");
  DensityOptions dens;
  dens.zero_tolerance = p.number("density_tolerance");
  dens.tolerance = dens.zero_tolerance;
  const SpaceModel line = SpaceModel::scalar();
  const NatFilter stat = NatFilter::statistical();
  const ModulusFunction id = builtin_modulus("identity");
  Json rows = Json::array();
  std::size_t passed = 0;
  const auto cases = cases_from(p);
  for (const ScalarCase& c : cases) {
    Json row = c.describe;
    const Verdict bound = verify_bound(*c.x, line, sample_indices(horizon));
    report.add(c.name + ": bound", bound);
    if (!bound.holds()) {
      row["status"] = "rejected: unbounded on samples";
      rows.push_back(row);
      continue;
    }
    const Verdict pre = has_f_density_zero(c.exceptional, id, horizon, dens);
    report.add(c.name + ": precondition: exceptional density", pre);
    if (!pre.holds()) {
      row["status"] = "not applicable: exceptional set is not certified density zero";
      rows.push_back(row);
      continue;
    }
    CheckOptions opts;
    opts.horizon = horizon;
    opts.density = dens;
    const Vector a = Vector::dense({c.limit});
    const Verdict limit = f_limit_check(*c.x, a, stat, line, opts);
    report.add(c.name + ": statistical limit", limit);
    CheckOptions copts = opts;
    copts.eps_grid = {tol};
    const Verdict mean = f_limit_check(*cesaro(c.x), a, NatFilter::frechet(), line, copts);
    report.add(c.name + ": cesaro limit", mean);
    const bool ok = limit.holds() && mean.holds();
    passed += ok ? 1 : 0;
    row["status"] = ok ? "pass" : std::string(to_string(conjunction(limit.outcome, mean.outcome)));
    rows.push_back(row);
  }
  report.details["cases"] = rows;
  report.summary = std::to_string(passed) + " of " + std::to_string(cases.size()) +
                   " bounded sequences are statistically and Cesaro convergent to the same value";
  return report;
}

ExperimentReport cesaro_lemma(const ParamReader& p) {
  ExperimentReport report;
  const Index horizon = p.index("horizon");
  Json rows = Json::array();
  std::size_t violations = 0;
  const auto cases = cases_from(p);
  for (const ScalarCase& c : cases) {
    Json row = c.describe;
    const LemmaRun r = lemma_constants(c, horizon);
    if (!lemma_verdicts(report, c, r, horizon, row)) {
      rows.push_back(row);
      continue;
    }
    Json diag;
    diag["N"] = r.threshold;
    diag["max_mean_distance"] = r.mean_spread;
    row["max_mean_distance"] = r.mean_spread;
    if (r.mean_spread < 1.0) {
      report.add(c.name + ": cauchy means",
                 Verdict::make(Outcome::holds, "p(y_n - y_m) < 1 for all n, m in [N, H]", diag));
    } else {
      ++violations;
      report.add(c.name + ": cauchy means",
                 Verdict::make(Outcome::fails, "p(y_n - y_m) reaches " + dsl::format_number(r.mean_spread), diag));
    }
    Json bdiag;
    bdiag["sup_mean"] = r.mean_sup;
    bdiag["bound"] = c.bound;
    report.add(c.name + ": bounded means",
               Verdict::make(r.mean_sup <= c.bound + 1e-9 ? Outcome::holds : Outcome::fails,
                             "sup p(y_n) = " + dsl::format_number(r.mean_sup) + " against C = " +
                                 dsl::format_number(c.bound),
                             bdiag));
    rows.push_back(row);
  }
  report.details["cases"] = rows;
  report.details["violations"] = violations;
  report.summary = "Cesaro means of bounded statistically Cauchy sequences: " +
                   std::to_string(violations) + " violations of p(y_n - y_m) < 1 beyond N";
  return report;
}

ExperimentReport bfst_limit(const ParamReader& p) {
  ExperimentReport report;
  const Index horizon = p.index("horizon");
  Json rows = Json::array();
  const auto cases = cases_from(p);
  for (const ScalarCase& c : cases) {
    Json row = c.describe;
    const LemmaRun r = lemma_constants(c, horizon);
    if (!lemma_verdicts(report, c, r, horizon, row)) {
      rows.push_back(row);
      continue;
    }
    const double a = (c.name == "configured" && p.text("limit").empty()) ? r.y.back() : c.limit;
    row["candidate"] = a;
    Index last_far = 0;
    for (Index n = 1; n <= horizon; ++n)
      if (std::fabs(r.y[n - 1] - a) >= 0.25) last_far = n;
    const Index m = std::max(r.threshold + 1, last_far + 1);
    Json diag;
    diag["N"] = r.threshold;
    diag["M"] = m;
    row["M"] = m;
    if (m > horizon / 2) {
      diag["witness"] = last_far;
      report.add(c.name + ": cesaro candidate",
                 Verdict::make(Outcome::fails,
                               "Cesaro means stay 1/4 away from the candidate up to n = " +
                                   std::to_string(last_far),
                               diag));
      rows.push_back(row);
      continue;
    }
    report.add(c.name + ": cesaro candidate",
               Verdict::make(Outcome::holds, "p(y_n - a) < 1/4 for n > M", diag));
    Index witness = 0;
    double worst = 0.0;
    for (Index n = m + 1; n <= horizon; ++n) {
      if (!r.in_a[n - 1]) continue;
      const double d = std::fabs(r.x[n - 1] - a);
      if (d > worst) worst = d;
      if (d > 1.0 && !witness) witness = n;
    }
    Json ldiag;
    ldiag["M"] = m;
    ldiag["max_distance_on_witness_set"] = worst;
    row["max_distance"] = worst;
    if (witness) {
      ldiag["witness"] = witness;
      report.add(c.name + ": limit on witness set",
                 Verdict::make(Outcome::fails, "p(x_n - a) > 1 at n = " + std::to_string(witness), ldiag));
    } else {
      report.add(c.name + ": limit on witness set",
                 Verdict::make(Outcome::holds, "p(x_n - a) <= 1 for n in A beyond M", ldiag));
    }
    rows.push_back(row);
  }
  report.details["cases"] = rows;
  report.summary = "the Cesaro limit is reached along the witness set beyond M";
  return report;
}

}  // namespace filterlab::experiments
