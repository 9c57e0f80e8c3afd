// Filter inclusion, composition with index maps, sparse-support limits and
// Cauchy extraction from nested bases.

#include <cmath>

#include "filterlab/converge.hpp"
#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/extraction.hpp"
#include "filterlab/gallery.hpp"

namespace filterlab::experiments {

ExperimentReport sparse_product(const ParamReader& p) {
  ExperimentReport report;
  const Index horizon = p.index("horizon");
  const NatFilter filter = NatFilter::parse(p.text("filter"));
  const NatSet exceptional = NatSet::parse(p.text("exceptional"));
  CheckOptions opts;
  opts.horizon = horizon;

  struct Case {
    std::string name;
    Sequence x;
    NatFilter filter;
    std::map<std::string, double> expected;
  };
  const Vector v = Vector::keyed({{"p", 0.5}, {"q", -2.0}});
  const std::vector<Case> cases = {
      {"decaying single key",
       function_sequence("{k1: 1/n}",
                         [](Index n) { return Vector::keyed({{"k1", 1.0 / static_cast<double>(n)}}); }),
       NatFilter::frechet(),
       {}},
      {"switching support",
       function_sequence("{a: 1} on " + exceptional.to_string() + ", {b: 1} elsewhere",
                         [exceptional](Index n) {
                           return Vector::keyed({{exceptional.contains(n) ? "a" : "b", 1.0}});
                         }),
       filter,
       {{"b", 1.0}}},
      {"constant", constant_sequence(v), NatFilter::frechet(), {{"p", 0.5}, {"q", -2.0}}},
  };

  Json rows = Json::array();
  for (const Case& c : cases) {
    const SparseLimit r = sparse_pointwise_limit(*c.x, c.filter, {}, opts);
    report.add(c.name + ": limit", r.verdict);
    double err = 0.0;
    std::map<std::string, double> all = c.expected;
    for (const auto& [k, val] : r.limit.keyed_entries()) all.emplace(k, 0.0), (void)val;
    for (const auto& [k, want] : all) err = std::max(err, std::fabs(r.limit.entry(k) - want));
    Json diag = to_json(r);
    diag["max_error_to_expected"] = err;
    report.add(c.name + ": expected limit",
               Verdict::make(err <= 1e-9 ? Outcome::holds : Outcome::fails,
                             "limit " + r.limit.to_string() + " against the expected values", diag));
    Json row;
    row["case"] = c.name;
    row["sequence"] = c.x->describe();
    row["filter"] = c.filter.to_string();
    row["limit"] = diag["limit"];
    row["inspected_support"] = r.inspected_support;
    row["support_closed"] = r.support_closed;
    rows.push_back(row);
  }
  report.details["cases"] = rows;
  report.summary = "limits of finitely supported sequences stay inside the union of the inspected supports";
  return report;
}

ExperimentReport inclusion(const ParamReader& p) {
  ExperimentReport report;
  const Index horizon = p.index("horizon");
  const auto testbed = standard_testbed();
  Json names = Json::array();
  for (const auto& e : testbed) names.push_back(e.name);
  report.details["testbed"] = names;
  std::size_t fails = 0;
  for (const auto& m : p.list("moduli")) {
    const ModulusFunction f = parse_modulus(m);
    const NatFilter fst = NatFilter::f_statistical(f);
    const Verdict v = includes(fst, NatFilter::statistical(), testbed, horizon);
    fails += v.fails() ? 1 : 0;
    report.add(fst.to_string() + " in stat", v);
    report.add("frechet in " + fst.to_string(), includes(NatFilter::frechet(), fst, testbed, horizon));
  }
  report.notes.push_back("inclusion is evidence relative to the testbed, not a proof over all subsets");
  report.summary = "f-statistical filters sit inside the statistical filter on the testbed (" +
                   std::to_string(fails) + " failing moduli)";
  return report;
}

ExperimentReport composition_identity(const ParamReader& p) {
  ExperimentReport report;
  const Index horizon = p.index("horizon");
  CheckOptions opts;
  opts.horizon = horizon;
  const SpaceModel line = SpaceModel::scalar();
  struct Triple {
    const char* sequence;
    const char* map;
    const char* filter;
  };
  const Triple triples[] = {
      {"scalar(1/n)", "affine(2,0)", "frechet"},
      {"scalar((-1)^n)", "affine(2,0)", "frechet"},
      {"scalar((-1)^n)", "affine(2,1)", "stat"},
      {"perturbed(1/n,cubes,1)", "square", "frechet"},
      {"perturbed(1/n,powers(2),1)", "affine(1,0)", "stat"},
      {"scalar((-1)^n)", "const(3)", "frechet"},
      {"scalar(1/n^2)", "affine(3,0)", "base(ap(1,2),ap(1,4))"},
      {"scalar(sin(n))", "explicit(1,2,3)", "subseq(affine(2,0))"},
  };
  Json rows = Json::array();
  std::size_t agree = 0;
  for (const Triple& t : triples) {
    const Sequence x = parse_sequence(t.sequence, 1);
    const IndexMap g = IndexMap::parse(t.map);
    const NatFilter f = NatFilter::parse(t.filter);
    const Verdict composed = f_cauchy_check(*compose_with_index_map(x, g), f, line, opts);
    const Verdict imaged = f_cauchy_check(*x, image_filter(g, f), line, opts);
    bool same = composed.outcome == imaged.outcome;
    const auto& ra = composed.diagnostics["checks"];
    const auto& rb = imaged.diagnostics["checks"];
    same = same && ra.size() == rb.size();
    for (std::size_t i = 0; same && i < ra.size(); ++i) same = ra[i]["outcome"] == rb[i]["outcome"];
    agree += same ? 1 : 0;
    Json diag;
    diag["sequence"] = t.sequence;
    diag["map"] = t.map;
    diag["filter"] = t.filter;
    diag["composed"] = std::string(to_string(composed.outcome));
    diag["image"] = std::string(to_string(imaged.outcome));
    rows.push_back(diag);
    const std::string label = std::string(t.sequence) + " o " + t.map + " under " + t.filter;
    Verdict v = Verdict::make(same ? Outcome::holds : Outcome::fails,
                              same ? "verdicts agree (" + diag["composed"].get<std::string>() + ")"
                                   : "verdicts differ",
                              diag);
    v.warnings = imaged.warnings;
    report.add(label, v);
  }
  report.details["triples"] = rows;
  report.summary = std::to_string(agree) + " of " + std::to_string(std::size(triples)) +
                   " triples give the same Cauchy verdict for x o g under F and x under g[F]";
  return report;
}

ExperimentReport metrizable_extraction(const ParamReader& p) {
  ExperimentReport report;
  const auto depth = static_cast<std::size_t>(p.index("depth"));
  std::vector<double> center;
  {
    const dsl::Call c = dsl::parse_call(p.text("center"));
    if (c.head != "[") throw ParseError("center must be a point like [0.3, -0.7]");
    for (const auto& a : c.args) center.push_back(dsl::parse_number(a));
  }
  ExtractionOptions opts;
  const std::string norm = p.text("norm");
  if (norm != "l1" && norm != "linf") throw ParseError("norm must be l1 or linf");
  opts.norm = norm == "l1" ? Norm::l1 : Norm::linf;

  std::vector<Region> balls;
  for (std::size_t k = 1; k <= depth; ++k)
    balls.push_back(Region::ball(center, std::ldexp(1.0, -static_cast<int>(k)), opts.norm));

  Json rows = Json::array();
  for (const auto& text : p.list("selectors")) {
    const Selector sel = Selector::parse(text);
    const ExtractionResult r = extract_cauchy_from_base(balls, sel, opts);
    double worst = 0.0;
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= r.points.size(); ++n) {
      const double dist = norm_distance(r.points[n - 1], center, opts.norm);
      const double allowed = std::ldexp(1.0, -static_cast<int>(n));
      worst = std::max(worst, dist / allowed);
      if (dist > allowed + 1e-15) ++bad;
    }
    Json diag;
    diag["selector"] = sel.to_string();
    diag["max_ratio_to_radius"] = worst;
    diag["violations"] = bad;
    report.add(sel.to_string() + ": distance to center",
               Verdict::make(bad == 0 ? Outcome::holds : Outcome::fails,
                             "||x_n - c|| <= 2^-n for n <= " + std::to_string(depth), diag));
    report.add(sel.to_string() + ": cauchy audit", r.cauchy_audit);
    report.add(sel.to_string() + ": limit audit", r.limit_audit);
    Json row;
    row["selector"] = sel.to_string();
    row["limit"] = r.limit;
    rows.push_back(row);
  }
  report.details["runs"] = rows;

  // Nested segments [0, 1 + 1/k] x {0}: diameters never shrink.
  std::vector<Region> segments;
  for (std::size_t k = 1; k <= depth; ++k) {
    std::vector<double> lo(center.size(), 0.0), hi(center.size(), 0.0);
    hi[0] = 1.0 + 1.0 / static_cast<double>(k);
    segments.push_back(Region::box(lo, hi));
  }
  try {
    extract_cauchy_from_base(segments, Selector{}, opts);
    report.add("non-Cauchy base rejected",
               Verdict::make(Outcome::fails, "nested segments were accepted as a Cauchy base"));
  } catch (const NotCauchyFilterError& e) {
    Json diag;
    diag["index"] = e.index();
    diag["diameter"] = e.diameter();
    diag["allowed"] = e.allowed();
    report.add("non-Cauchy base rejected", Verdict::make(Outcome::holds, e.what(), diag));
  }
  report.summary = "points chosen from nested balls form a Cauchy sequence converging to the common center";
  return report;
}

}  // namespace filterlab::experiments
