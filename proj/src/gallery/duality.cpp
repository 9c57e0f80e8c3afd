// Weak limits in l1 and its duals: the basis counterexample, the c(F_{f-st})
// counterexample and pointwise limits of bounded functionals.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "filterlab/converge.hpp"
#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/gallery.hpp"

namespace filterlab::experiments {
namespace {

std::vector<double> parse_grid(const std::vector<std::string>& parts) {
  std::vector<double> out;
  for (const auto& s : parts) out.push_back(dsl::parse_number(s));
  return out;
}

// Scalar sequence backed by precomputed values v[0..n-1].
Sequence array_sequence(std::string name, std::vector<double> values) {
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  const Index size = data->size();
  return function_sequence(
      std::move(name),
      [data](Index n) {
        if (n < 1 || n > data->size()) throw DimensionMismatchError("index beyond the stored values");
        return Vector::dense({(*data)[n - 1]});
      },
      size);
}

// y_k = s on S, c elsewhere; text perturbed(c, S, s).
struct PerturbedConstant {
  std::string text;
  double base = 0.0;
  NatSet set = NatSet::empty();
  double spike = 0.0;
};

PerturbedConstant parse_perturbed_constant(const std::string& text) {
  const dsl::Call c = dsl::parse_call(text);
  if (c.head != "perturbed" || c.args.size() != 3)
    throw ParseError("expected perturbed(c, set, s), got '" + text + "'");
  PerturbedConstant y;
  y.text = dsl::trim(text);
  y.base = dsl::parse_number(c.args[0]);
  y.set = NatSet::parse(c.args[1]);
  y.spike = dsl::parse_number(c.args[2]);
  return y;
}

Vector materialize(const PerturbedConstant& y, std::size_t dim) {
  std::vector<double> v(dim, y.base);
  for (Index k : y.set.members_in(1, dim)) v[k - 1] = y.spike;
  return Vector::dense(std::move(v));
}

}  // namespace

ExperimentReport l1_basis_counterexample(const ParamReader& p) {
  ExperimentReport report;
  const std::size_t d = p.index("dim");
  const IndexMap stream = IndexMap::parse(p.text("surrogate"));
  const NatFilter surrogate = NatFilter::subsequence(stream);
  CheckOptions opts;
  opts.eps_grid = parse_grid(p.list("eps"));
  opts.horizon = d;
  report.notes.push_back("the ultrafilter is replaced by the subsequence filter " + surrogate.to_string() +
                         "; the contradiction below does not depend on the choice");

  const Sequence basis = basis_sequence(d);
  const SpaceModel line = SpaceModel::scalar();
  Json functionals = Json::array();
  std::size_t cauchy = 0;
  const auto texts = p.list("functionals");
  for (const auto& text : texts) {
    const Vector y = Vector::parse(text, d);
    const SpaceModel fam = SpaceModel::seminorm_family({y}, {text});
    const Verdict v = f_cauchy_check(*basis, surrogate, fam, opts);
    report.add("surrogate-Cauchy " + text, v);
    cauchy += v.holds() ? 1 : 0;
    const Index last = stream.inverse_horizon(d);
    const double limit = y.coordinate(stream(last) - 1);
    std::vector<double> values(d);
    for (std::size_t k = 0; k < d; ++k) values[k] = y.coordinate(k);
    const Verdict lv = f_limit_check(*array_sequence("y(e_n)", values), Vector::dense({limit}), surrogate,
                                     line, opts);
    report.add("surrogate limit " + text, lv);
    Json row;
    row["functional"] = text;
    row["cauchy"] = std::string(to_string(v.outcome));
    row["limit"] = limit;
    functionals.push_back(row);
  }
  report.details["functionals"] = functionals;

  // Candidates: coordinates are forced to 0 by the e_k functionals and the
  // sum to 1 by the all-ones functional. Since |sum z| <= d ||z||_inf,
  // d ||z||_inf + |sum z - 1| >= 1 for every z.
  std::vector<std::pair<std::string, Vector>> candidates;
  for (const auto& text : p.list("candidates")) candidates.emplace_back(text, Vector::parse(text, d));
  std::mt19937_64 rng(p.seed());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto randoms = static_cast<int>(p.index("random_candidates"));
  for (int i = 0; i < randoms; ++i) {
    std::vector<double> z(d);
    double s = 0.0;
    for (double& zi : z) s += (zi = u(rng));
    for (double& zi : z) zi /= s;
    candidates.emplace_back("random simplex " + std::to_string(i + 1), Vector::dense(std::move(z)));
  }
  const double min_gap = p.number("min_gap");
  Json rows = Json::array();
  double smallest = INFINITY;
  for (const auto& [name, z] : candidates) {
    const double coord = z.norm_linf();
    const double sum = pairing(z, Vector::ones(d));
    const double gap = static_cast<double>(d) * coord + std::fabs(sum - 1.0);
    smallest = std::min(smallest, gap);
    Json diag;
    diag["candidate"] = name;
    diag["coordinate_violation"] = coord;
    diag["sum_violation"] = std::fabs(sum - 1.0);
    diag["max_violation"] = std::max(coord, std::fabs(sum - 1.0));
    diag["gap"] = gap;
    rows.push_back(diag);
    report.add("candidate " + name,
               Verdict::make(gap >= min_gap ? Outcome::holds : Outcome::fails,
                             "d * max|z_k| + |sum z - 1| = " + dsl::format_number(gap), diag));
  }
  report.details["candidates"] = rows;
  report.details["certificate"] =
      "each e_k(e_n) tends to 0 along the filter, so a weak limit z has z_k = 0 for every k; the "
      "all-ones functional gives 1 along the filter, so sum z = 1; both cannot hold";
  report.details["infeasible_below_eps"] = 1.0 / static_cast<double>(d + 1);
  report.summary = std::to_string(cauchy) + " of " + std::to_string(texts.size()) +
                   " functionals are surrogate-Cauchy on (e_n); smallest candidate gap " +
                   dsl::format_number(smallest);
  return report;
}

ExperimentReport cfst_counterexample(const ParamReader& p) {
  ExperimentReport report;
  const ModulusFunction f = parse_modulus(p.text("modulus"));
  const Index horizon = p.index("horizon");
  const std::size_t d = p.index("dim");
  if (horizon > d) throw PreconditionError("horizon must not exceed the truncation dimension");
  const double tol = p.number("tolerance");
  const SpaceModel line = SpaceModel::scalar();
  const Sequence means = cesaro_basis_sequence(d);

  std::vector<Index> idx(horizon);
  for (Index n = 1; n <= horizon; ++n) idx[n - 1] = n;

  std::vector<Vector> family;
  std::vector<std::string> labels;
  Json rows = Json::array();
  for (const auto& text : p.list("family")) {
    const PerturbedConstant y = parse_perturbed_constant(text);
    const Vector vec = materialize(y, d);
    report.add("f-density zero " + y.text, has_f_density_zero(y.set, f, horizon));
    const std::vector<double> values = means->functional_values(vec, idx);
    CheckOptions copts;
    copts.horizon = horizon;
    copts.eps_grid = {tol};
    const Verdict v = f_limit_check(*array_sequence("y(x_n)", values), Vector::dense({y.base}),
                                    NatFilter::frechet(), line, copts);
    report.add("cesaro limit " + y.text, v);
    Json row;
    row["functional"] = y.text;
    row["limit"] = y.base;
    row["mean_at_horizon"] = values.back();
    rows.push_back(row);
    family.push_back(vec);
    labels.push_back(y.text);
  }
  report.details["family"] = rows;
  {
    CheckOptions opts;
    opts.horizon = horizon;
    opts.eps_grid = parse_grid(p.list("cauchy_eps"));
    const SpaceModel weak = SpaceModel::seminorm_family(family, labels);
    report.add("cesaro_basis Cauchy in the family seminorms", f_cauchy_check(*means, NatFilter::frechet(), weak, opts));
  }

  // Non-representability: for z, y = 1 off supp(z) and 0 on it. The support
  // is finite, so lim y = 1 along F_{f-st}, while sum z_n y_n = 0.
  const double min_gap = p.number("min_gap");
  Json cand = Json::array();
  for (const auto& text : p.list("candidates")) {
    const Vector z = Vector::parse(text, d);
    std::vector<Index> support;
    const std::vector<double> zd = z.to_dense();
    for (std::size_t k = 0; k < zd.size(); ++k)
      if (zd[k] != 0.0) support.push_back(k + 1);
    const NatSet flipped = NatSet::finite(support);
    std::vector<double> y(d, 1.0);
    for (Index k : support) y[k - 1] = 0.0;
    const double represented = pairing(z, Vector::dense(y));
    const double gap = std::fabs(represented - 1.0);
    Json diag;
    diag["candidate"] = text;
    diag["support_size"] = support.size();
    diag["sum_z_y"] = represented;
    diag["limit_y"] = 1.0;
    diag["gap"] = gap;
    cand.push_back(diag);
    report.add("witness density " + text, has_f_density_zero(flipped, f, horizon));
    report.add("candidate " + text,
               Verdict::make(gap >= min_gap ? Outcome::holds : Outcome::fails,
                             "|sum z_n y_n - lim y| = " + dsl::format_number(gap), diag));
  }
  report.details["candidates"] = cand;
  report.notes.push_back("candidate families are finite; the gap certifies non-representability for each listed z only");
  report.summary = "Cesaro means of the basis are Cauchy against the family, and no listed z represents the limit functional";
  return report;
}

ExperimentReport dual_pointwise(const ParamReader& p) {
  ExperimentReport report;
  const std::size_t d = p.index("dim");
  const Index horizon = p.index("horizon");
  const NatFilter filter = NatFilter::parse(p.text("filter"));
  const NatSet exceptional = NatSet::parse(p.text("exceptional"));
  const double c = p.number("bound");
  const auto trials = static_cast<int>(p.index("trials"));
  std::mt19937_64 rng(p.seed());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto random_vec = [&](double scale) {
    std::vector<double> v(d);
    for (double& x : v) x = scale * u(rng);
    return Vector::dense(std::move(v));
  };

  const Vector major = random_vec(c), minor = random_vec(c);
  struct Case {
    std::string name;
    Sequence x;
    Vector expected;
  };
  const std::vector<Case> cases = {
      {"constant ones", constant_sequence(Vector::ones(d).scaled(c)), Vector::ones(d).scaled(c)},
      {"majority", switch_sequence(minor, exceptional, major), major},
  };

  std::vector<Vector> tests;
  std::vector<std::string> labels;
  for (int i = 0; i < static_cast<int>(p.index("tests")); ++i) {
    tests.push_back(random_vec(1.0));
    labels.push_back("t" + std::to_string(i + 1));
  }
  const SpaceModel weak = SpaceModel::seminorm_family(tests, labels);
  const SpaceModel line = SpaceModel::scalar();
  CheckOptions opts;
  opts.horizon = horizon;
  std::vector<Index> idx(horizon);
  for (Index n = 1; n <= horizon; ++n) idx[n - 1] = n;

  Json out = Json::array();
  for (const Case& cs : cases) {
    std::vector<double> f(d);
    Outcome coords = Outcome::holds;
    Json coord_rows = Json::array();
    for (std::size_t k = 1; k <= d; ++k) {
      std::vector<double> values = cs.x->functional_values(Vector::basis(d, k), idx);
      std::vector<double> tail(values.begin() + static_cast<std::ptrdiff_t>(horizon / 2), values.end());
      std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2), tail.end());
      const double candidate = tail[tail.size() / 2];
      const Verdict v = f_limit_check(*array_sequence("x_n(e_k)", std::move(values)), Vector::dense({candidate}),
                                      filter, line, opts);
      coords = conjunction(coords, v.outcome);
      f[k - 1] = candidate;
      Json row;
      row["k"] = k;
      row["limit"] = candidate;
      row["outcome"] = std::string(to_string(v.outcome));
      coord_rows.push_back(row);
    }
    const Vector fv = Vector::dense(f);
    Json cdiag;
    cdiag["coordinates"] = coord_rows;
    report.add(cs.name + ": coordinate limits",
               Verdict::make(coords, "coordinate-wise limits along " + filter.to_string(), cdiag));

    // Linearity and the C-bound on random l1 vectors.
    double lin = 0.0, ratio = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Vector x = random_vec(1.0), z = random_vec(1.0);
      const double alpha = 4.0 * u(rng), beta = 4.0 * u(rng);
      const double lhs = pairing(x.scaled(alpha) + z.scaled(beta), fv);
      const double rhs = alpha * pairing(x, fv) + beta * pairing(z, fv);
      lin = std::max(lin, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)));
      ratio = std::max(ratio, std::fabs(pairing(x, fv)) / x.norm_l1());
    }
    Json ldiag;
    ldiag["max_relative_defect"] = lin;
    ldiag["trials"] = trials;
    report.add(cs.name + ": linearity", Verdict::make(lin <= 1e-9 ? Outcome::holds : Outcome::fails,
                                                      "f(ax + bz) = a f(x) + b f(z) on random triples", ldiag));
    Json bdiag;
    bdiag["max_ratio"] = ratio;
    bdiag["bound"] = c;
    report.add(cs.name + ": norm bound",
               Verdict::make(ratio <= c + 1e-12 ? Outcome::holds : Outcome::fails,
                             "|f(x)| <= C ||x||_1 on random x", bdiag));
    report.add(cs.name + ": weak limit", f_limit_check(*cs.x, fv, filter, weak, opts));
    Json row;
    row["case"] = cs.name;
    row["distance_to_expected"] = distance_linf(fv, cs.expected);
    out.push_back(row);
  }
  report.details["cases"] = out;
  report.summary = "pointwise limits of bounded functionals are bounded linear functionals and weak limits";
  return report;
}

}  // namespace filterlab::experiments
