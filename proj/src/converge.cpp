#include "filterlab/converge.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"

namespace filterlab {
namespace {

constexpr Index kValueCap = Index{1} << 62;
constexpr std::size_t kPairwiseLimit = 2048;
constexpr std::size_t kScreenSamples = 4096;

struct View {
  const NatFilter* root = nullptr;
  const NatFilter* base = nullptr;  // innermost non-image filter
  std::optional<IndexMap> map;      // composite of the image maps
  Index horizon = 0;                // counts indices of the base filter
  std::vector<Index> idx;           // idx[j - 1] = sequence index seen at j
  std::vector<std::string> warnings;

  bool chained() const { return map.has_value(); }
  const NatFilter& target() const { return chained() ? *root : *base; }
};

View resolve(const SequenceSpec& x, const NatFilter& f, Index h) {
  View v;
  v.root = &f;
  const NatFilter* cur = &f;
  while (cur->kind() == NatFilter::Kind::image || cur->kind() == NatFilter::Kind::subsequence) {
    v.map = v.map ? IndexMap::compose(*v.map, cur->map()) : cur->map();
    cur = &cur->inner();
  }
  v.base = cur;

  const Index top = std::min(x.max_index(), kValueCap);
  Index H = h;
  if (!v.map) {
    H = std::min(h, top);
  } else if (v.map->finite_range()) {
    const auto values = v.map->range_values();
    if (!values.empty() && values.back() > top)
      throw DimensionMismatchError("index map " + v.map->to_string() + " reaches " +
                                   std::to_string(values.back()) + " beyond the sequence range " +
                                   std::to_string(top));
  } else {
    H = std::min(h, v.map->inverse_horizon(top));
  }
  if (H == 0) throw PreconditionError("no sequence index is reachable under " + f.to_string());
  if (H < h)
    v.warnings.push_back("horizon clipped from " + std::to_string(h) + " to " + std::to_string(H) +
                         " by the sequence range");
  if (f.degenerate())
    v.warnings.push_back("filter " + f.to_string() + " comes from a finite-range index map and is trivial");
  v.horizon = H;
  v.idx.resize(H);
  for (Index j = 1; j <= H; ++j) v.idx[j - 1] = v.map ? (*v.map)(j) : j;
  return v;
}

void check_schedule(const CheckOptions& o) {
  if (o.eps_grid.empty()) throw PreconditionError("epsilon grid is empty");
  for (std::size_t i = 0; i < o.eps_grid.size(); ++i) {
    const double e = o.eps_grid[i];
    if (!(e > 0.0) || !std::isfinite(e) || (i > 0 && e >= o.eps_grid[i - 1]))
      throw PreconditionError("epsilon grid must be positive and strictly descending");
  }
}

std::vector<std::string> labels_for(const SpaceModel& space, const CheckOptions& o) {
  const auto& labels = o.labels.empty() ? space.labels() : o.labels;
  for (const auto& l : labels) (void)space.functional(l);  // throws on unknown labels
  return labels;
}

struct LabelData {
  std::string label;
  std::optional<Vector> functional;
  std::vector<double> values;  // <x_{idx_j}, y> for linear labels
};

LabelData label_data(const SequenceSpec& x, const SpaceModel& space, const std::string& label,
                     const View& v) {
  LabelData d;
  d.label = label;
  d.functional = space.functional(label);
  if (d.functional) d.values = x.functional_values(*d.functional, v.idx);
  return d;
}

std::vector<double> deviations(const SequenceSpec& x, const SpaceModel& space, const LabelData& d,
                               const View& v, const Vector& center) {
  std::vector<double> out(v.horizon);
  if (d.functional) {
    const double c = pairing(center, *d.functional);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::fabs(d.values[j] - c);
  } else {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = space.distance(d.label, x.at(v.idx[j]), center);
  }
  return out;
}

// Set of sequence indices named by 1-based positions j, as seen by target().
NatSet observed_set(const View& v, const std::vector<Index>& positions) {
  if (!v.chained()) return NatSet::observed(positions, v.horizon);
  std::vector<Index> outer;
  outer.reserve(positions.size());
  for (Index j : positions) outer.push_back(v.idx[j - 1]);
  return NatSet::observed_on(std::move(outer), v.idx);
}

template <class Pred>
std::vector<Index> positions_where(const std::vector<double>& dev, Pred pred) {
  std::vector<Index> out;
  for (std::size_t j = 0; j < dev.size(); ++j)
    if (pred(dev[j])) out.push_back(j + 1);
  return out;
}

Json preview(const std::vector<Index>& positions, const View& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < positions.size() && i < 8; ++i) out.push_back(v.idx[positions[i] - 1]);
  return out;
}

template <class Fn>
Verdict guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const HorizonExceededError& e) {
    return Verdict::make(Outcome::inconclusive, e.what());
  } catch (const PreconditionError& e) {
    return Verdict::make(Outcome::inconclusive, e.what());
  }
}

struct Aggregate {
  Outcome outcome = Outcome::holds;
  std::string first_bad;
  Json rows = Json::array();
  std::vector<std::string> warnings;

  void add(Json row, Outcome o, const std::string& label, double eps,
           const std::vector<std::string>& warns = {}) {
    row["outcome"] = std::string(to_string(o));
    rows.push_back(std::move(row));
    for (const auto& w : warns)
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    const Outcome before = outcome;
    outcome = conjunction(outcome, o);
    if (outcome != before || (o != Outcome::holds && first_bad.empty()))
      first_bad = "p=" + label + ", eps=" + dsl::format_number(eps);
  }
};

Verdict finish(const char* check, Aggregate agg, const View& v, const std::vector<std::string>& labels,
               const CheckOptions& o) {
  Json sched;
  sched["eps_grid"] = o.eps_grid;
  sched["labels"] = labels;
  sched["horizon"] = v.horizon;
  if (v.chained()) sched["index_map"] = v.map->to_string();
  Json diag;
  diag["check"] = check;
  diag["filter"] = v.root->to_string();
  diag["schedule"] = sched;
  diag["checks"] = std::move(agg.rows);
  std::string reason;
  switch (agg.outcome) {
    case Outcome::holds: reason = "certified for every (seminorm, eps) pair of the schedule"; break;
    case Outcome::fails: reason = "refuted at " + agg.first_bad; break;
    case Outcome::inconclusive: reason = "undecided at " + agg.first_bad; break;
  }
  Verdict out = Verdict::make(agg.outcome, std::move(reason), std::move(diag));
  out.warnings = v.warnings;
  for (auto& w : agg.warnings)
    if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end())
      out.warnings.push_back(std::move(w));
  return out;
}

// ---------------------------------------------------------------------------
// Diameters for tail and base filters.

struct Diameter {
  Outcome outcome = Outcome::inconclusive;
  double value = 0.0;  // exact diameter or the bound that decided
  std::string method;
};

Diameter norm_diameter(const SequenceSpec& x, const SpaceModel& space, const std::string& label,
                       const View& v, const std::vector<Index>& positions, double eps) {
  Diameter d;
  const Vector anchor = x.at(v.idx[positions.front() - 1]);
  double r = 0.0;
  for (Index j : positions) r = std::max(r, space.distance(label, x.at(v.idx[j - 1]), anchor));
  if (2.0 * r < eps) return {Outcome::holds, 2.0 * r, "anchor-radius"};
  if (r >= eps) return {Outcome::fails, r, "anchor-radius"};
  if (positions.size() > kPairwiseLimit) return {Outcome::inconclusive, r, "anchor-radius"};
  std::vector<Vector> pts;
  pts.reserve(positions.size());
  for (Index j : positions) pts.push_back(x.at(v.idx[j - 1]));
  double diam = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      diam = std::max(diam, space.distance(label, pts[a], pts[b]));
  return {diam < eps ? Outcome::holds : Outcome::fails, diam, "pairwise"};
}

Diameter linear_diameter(const std::vector<double>& values, const std::vector<Index>& positions,
                         double eps) {
  double lo = values[positions.front() - 1], hi = lo;
  for (Index j : positions) {
    lo = std::min(lo, values[j - 1]);
    hi = std::max(hi, values[j - 1]);
  }
  const double diam = hi - lo;
  return {diam < eps ? Outcome::holds : Outcome::fails, diam, "exact"};
}

std::vector<Index> tail_starts(Index H) {
  std::set<Index> s{1};
  const Index last = H / 2 + 1;
  for (Index k = 2; k < last; k *= 2) s.insert(k);
  s.insert(std::min(last, H));
  return {s.begin(), s.end()};
}

Json tail_cauchy(const SequenceSpec& x, const SpaceModel& space, const LabelData& d, const View& v,
                 double eps, Outcome& outcome) {
  const Index H = v.horizon;
  Json row;
  row["method"] = "tails";
  if (d.functional) {
    std::vector<double> smin(H + 1), smax(H + 1);
    smin[H] = smax[H] = d.values[H - 1];
    for (Index j = H - 1; j >= 1; --j) {
      smin[j] = std::min(smin[j + 1], d.values[j - 1]);
      smax[j] = std::max(smax[j + 1], d.values[j - 1]);
    }
    for (Index k : tail_starts(H)) {
      const double diam = smax[k] - smin[k];
      row["tail_start"] = v.idx[k - 1];
      row["diameter"] = diam;
      if (diam < eps) {
        outcome = Outcome::holds;
        return row;
      }
    }
    outcome = Outcome::fails;
    return row;
  }
  const Index k = std::min(H / 2 + 1, H);
  std::vector<Index> positions;
  for (Index j = k; j <= H; ++j) positions.push_back(j);
  const Diameter diam = norm_diameter(x, space, d.label, v, positions, eps);
  row["tail_start"] = v.idx[k - 1];
  row["diameter"] = diam.value;
  row["bound"] = diam.method;
  outcome = diam.outcome;
  return row;
}

Json base_cauchy(const SequenceSpec& x, const SpaceModel& space, const LabelData& d, const View& v,
                 double eps, Outcome& outcome) {
  Json row;
  row["method"] = "base-sets";
  Json tried = Json::array();
  bool undecided = false;
  for (const NatSet& b : v.base->base_sets()) {
    Json t;
    t["set"] = b.to_string();
    std::vector<Index> positions;
    try {
      positions = b.members_in(1, std::min(v.horizon, b.horizon_cap()));
    } catch (const HorizonExceededError&) {
      positions.clear();
    }
    if (positions.empty()) {
      t["outcome"] = "inconclusive";
      tried.push_back(t);
      undecided = true;
      continue;
    }
    const Diameter diam = d.functional ? linear_diameter(d.values, positions, eps)
                                       : norm_diameter(x, space, d.label, v, positions, eps);
    t["diameter"] = diam.value;
    t["outcome"] = std::string(to_string(diam.outcome));
    tried.push_back(t);
    if (diam.outcome == Outcome::holds) {
      row["witness"] = b.to_string();
      row["tried"] = tried;
      outcome = Outcome::holds;
      return row;
    }
    if (diam.outcome == Outcome::inconclusive) undecided = true;
  }
  row["tried"] = tried;
  outcome = undecided ? Outcome::inconclusive : Outcome::fails;
  return row;
}

Json anchor_cauchy(const SequenceSpec& x, const SpaceModel& space, const LabelData& d, const View& v,
                   double eps, const CheckOptions& o, Outcome& outcome,
                   std::vector<std::string>& warnings) {
  const Index H = v.horizon;
  Json row;
  row["method"] = "anchors";
  // Strided sample of (H/2, H] for screening.
  std::vector<Index> sample;
  {
    const Index lo = H / 2 + 1;
    const Index span = H - lo + 1;
    const Index step = std::max<Index>(1, span / kScreenSamples);
    for (Index j = lo; j <= H; j += step) sample.push_back(j);
  }
  std::size_t screened = 0, refuted = 0, undecided = 0;
  for (Index m : anchor_schedule(H, o)) {
    std::optional<Vector> anchor;
    const auto dev = [&](Index j) {
      if (d.functional) return std::fabs(d.values[j - 1] - d.values[m - 1]);
      if (!anchor) anchor = x.at(v.idx[m - 1]);
      return space.distance(d.label, x.at(v.idx[j - 1]), *anchor);
    };
    std::size_t bad = 0;
    for (Index j : sample) bad += dev(j) >= eps ? 1 : 0;
    if (4 * bad > sample.size()) {
      ++screened;
      continue;
    }
    std::vector<Index> exceptional;
    for (Index j = 1; j <= H; ++j)
      if (dev(j) >= eps) exceptional.push_back(j);
    const NatSet e = observed_set(v, exceptional);
    const Verdict mv = guarded([&] {
      return member(v.target(), NatSet::complement(e), H, o.density);
    });
    for (const auto& w : mv.warnings) warnings.push_back(w);
    if (mv.holds()) {
      row["anchor"] = v.idx[m - 1];
      row["exceptional"] = exceptional.size();
      row["membership"] = to_json(mv);
      row["screened"] = screened;
      row["refuted"] = refuted;
      outcome = Outcome::holds;
      return row;
    }
    if (mv.fails()) {
      ++refuted;
    } else {
      ++undecided;
    }
  }
  row["screened"] = screened;
  row["refuted"] = refuted;
  row["undecided"] = undecided;
  outcome = undecided ? Outcome::inconclusive : Outcome::fails;
  return row;
}

}  // namespace

std::vector<Index> anchor_schedule(Index horizon, const CheckOptions& options) {
  std::set<Index> s;
  for (Index j = 1; j <= std::min(options.anchor_prefix, horizon); ++j) s.insert(j);
  const int per = std::max(1, options.anchors_per_octave);
  for (int oct = 0; oct < 63; ++oct) {
    if (std::ldexp(1.0, oct) > static_cast<double>(horizon)) break;
    for (int i = 0; i < per; ++i) {
      const double m = std::floor(std::ldexp(std::exp2(static_cast<double>(i) / per), oct));
      if (m >= 1.0 && m <= static_cast<double>(horizon)) s.insert(static_cast<Index>(m));
    }
  }
  return {s.begin(), s.end()};
}

Verdict f_limit_check(const SequenceSpec& x, const Vector& candidate, const NatFilter& f,
                      const SpaceModel& space, const CheckOptions& options) {
  check_schedule(options);
  const View v = resolve(x, f, options.horizon);
  const auto labels = labels_for(space, options);
  Aggregate agg;
  for (const auto& label : labels) {
    const LabelData d = label_data(x, space, label, v);
    const std::vector<double> dev = deviations(x, space, d, v, candidate);
    for (double eps : options.eps_grid) {
      const auto positions = positions_where(dev, [eps](double t) { return t >= eps; });
      const NatSet e = observed_set(v, positions);
      const Verdict mv = guarded([&] {
        return member(v.target(), NatSet::complement(e), v.horizon, options.density);
      });
      Json row;
      row["label"] = label;
      row["eps"] = eps;
      row["exceptional"] = positions.size();
      row["first_exceptional"] = preview(positions, v);
      row["membership"] = to_json(mv);
      agg.add(std::move(row), mv.outcome, label, eps, mv.warnings);
    }
  }
  return finish("limit", std::move(agg), v, labels, options);
}

Verdict f_cauchy_check(const SequenceSpec& x, const NatFilter& f, const SpaceModel& space,
                       const CheckOptions& options) {
  check_schedule(options);
  const View v = resolve(x, f, options.horizon);
  const auto labels = labels_for(space, options);
  Aggregate agg;
  for (const auto& label : labels) {
    const LabelData d = label_data(x, space, label, v);
    for (double eps : options.eps_grid) {
      Outcome o = Outcome::inconclusive;
      std::vector<std::string> warns;
      Json row;
      switch (v.base->kind()) {
        case NatFilter::Kind::frechet: row = tail_cauchy(x, space, d, v, eps, o); break;
        case NatFilter::Kind::base: row = base_cauchy(x, space, d, v, eps, o); break;
        default: row = anchor_cauchy(x, space, d, v, eps, options, o, warns); break;
      }
      row["label"] = label;
      row["eps"] = eps;
      agg.add(std::move(row), o, label, eps, warns);
    }
  }
  return finish("cauchy", std::move(agg), v, labels, options);
}

Verdict cluster_point_check(const SequenceSpec& x, const Vector& candidate, const NatFilter& f,
                            const SpaceModel& space, const CheckOptions& options) {
  check_schedule(options);
  const View v = resolve(x, f, options.horizon);
  const auto labels = labels_for(space, options);
  Aggregate agg;
  for (const auto& label : labels) {
    const LabelData d = label_data(x, space, label, v);
    const std::vector<double> dev = deviations(x, space, d, v, candidate);
    for (double eps : options.eps_grid) {
      const auto positions = positions_where(dev, [eps](double t) { return t < eps; });
      const NatSet near = observed_set(v, positions);
      const Verdict sv = guarded([&] { return is_stationary(v.target(), near, v.horizon, options.density); });
      Json row;
      row["label"] = label;
      row["eps"] = eps;
      row["near"] = positions.size();
      row["stationarity"] = to_json(sv);
      agg.add(std::move(row), sv.outcome, label, eps, sv.warnings);
    }
  }
  return finish("cluster", std::move(agg), v, labels, options);
}

Verdict cluster_implies_limit_audit(const SequenceSpec& x, const Vector& candidate,
                                    const NatFilter& f, const SpaceModel& space,
                                    const CheckOptions& options) {
  const Verdict cauchy = f_cauchy_check(x, f, space, options);
  if (!cauchy.holds())
    throw AuditSkippedError("Cauchy precondition is " + std::string(to_string(cauchy.outcome)) +
                            ": " + cauchy.reason);
  const Verdict cluster = cluster_point_check(x, candidate, f, space, options);
  if (!cluster.holds())
    throw AuditSkippedError("cluster-point precondition is " +
                            std::string(to_string(cluster.outcome)) + ": " + cluster.reason);
  const Verdict limit = f_limit_check(x, candidate, f, space, options);
  Json diag;
  diag["cauchy"] = to_json(cauchy);
  diag["cluster"] = to_json(cluster);
  diag["limit"] = to_json(limit);
  Verdict out;
  switch (limit.outcome) {
    case Outcome::holds:
      out = Verdict::make(Outcome::holds, "the cluster point is the limit", std::move(diag));
      break;
    case Outcome::fails:
      out = Verdict::make(Outcome::fails,
                          "audit failure: Cauchy cluster point is not certified as the limit "
                          "(tolerance inconsistency)",
                          std::move(diag));
      break;
    case Outcome::inconclusive:
      out = Verdict::make(Outcome::inconclusive, "limit undecided: " + limit.reason, std::move(diag));
      break;
  }
  out.warnings = limit.warnings;
  return out;
}

SparseLimit sparse_pointwise_limit(const SequenceSpec& x, const NatFilter& f,
                                   std::vector<std::string> keys, const CheckOptions& options) {
  check_schedule(options);
  const View v = resolve(x, f, options.horizon);
  SparseLimit out;
  std::set<std::string> inspected;
  for (Index n : v.idx)
    for (const auto& k : x.at(n).support()) inspected.insert(k);
  out.inspected_support.assign(inspected.begin(), inspected.end());
  if (keys.empty()) keys = out.inspected_support;

  std::map<std::string, double> limit;
  Outcome aggregate = Outcome::holds;
  for (const auto& key : keys) {
    const SpaceModel coord = SpaceModel::sparse_product({key});
    const Vector y = *coord.functional(key);
    std::vector<double> values = x.functional_values(y, v.idx);
    std::vector<double> tail(values.begin() + static_cast<std::ptrdiff_t>(v.horizon / 2), values.end());
    std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2), tail.end());
    const double median = tail[tail.size() / 2];

    CheckOptions per = options;
    per.labels = {key};
    Verdict verdict;
    double value = median;
    // An exact zero is preferred whenever it certifies as well.
    if (std::fabs(median) <= options.eps_grid.back()) {
      verdict = f_limit_check(x, Vector::keyed({{key, 0.0}}), f, coord, per);
      if (verdict.holds()) value = 0.0;
    }
    if (value != 0.0 || !verdict.holds()) {
      value = median;
      verdict = f_limit_check(x, Vector::keyed({{key, median}}), f, coord, per);
    }
    verdict.diagnostics["candidate"] = value;
    if (!verdict.holds()) out.flagged.push_back(key);
    aggregate = conjunction(aggregate, verdict.outcome);
    if (value != 0.0) limit[key] = value;
    out.per_key.emplace(key, std::move(verdict));
  }
  out.limit = Vector::keyed(limit);
  for (const auto& [k, val] : limit) {
    (void)val;
    if (!inspected.count(k)) out.support_closed = false;
  }
  Json diag;
  diag["filter"] = f.to_string();
  diag["horizon"] = v.horizon;
  diag["keys"] = keys;
  diag["flagged"] = out.flagged;
  diag["inspected_support"] = out.inspected_support;
  diag["support_closed"] = out.support_closed;
  if (!out.support_closed) aggregate = Outcome::fails;
  std::string reason = aggregate == Outcome::holds
                           ? "every key has a certified limit and the support stays inside the inspected supports"
                           : (out.support_closed ? "some key limits are not certified"
                                                 : "limit support escapes the inspected supports");
  out.verdict = Verdict::make(aggregate, std::move(reason), std::move(diag));
  out.verdict.warnings = v.warnings;
  return out;
}

Json to_json(const SparseLimit& result) {
  Json j;
  Json limit = Json::object();
  for (const auto& [k, val] : result.limit.keyed_entries()) limit[k] = val;
  j["limit"] = limit;
  j["verdict"] = to_json(result.verdict);
  Json per = Json::object();
  for (const auto& [k, v] : result.per_key) per[k] = std::string(to_string(v.outcome));
  j["per_key"] = per;
  return j;
}

}  // namespace filterlab
