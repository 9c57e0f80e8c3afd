#include "filterlab/filters.hpp"

#include <algorithm>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"

namespace filterlab {

namespace {
constexpr Index kStreamCheck = 100'000;
}

NatFilter NatFilter::frechet() { return NatFilter(); }

NatFilter NatFilter::statistical() {
  NatFilter f;
  f.kind_ = Kind::statistical;
  f.modulus_ = builtin_modulus("identity");
  return f;
}

NatFilter NatFilter::f_statistical(const ModulusFunction& modulus) {
  if (!modulus.is_unbounded()) throw BoundedModulusError(modulus.name());
  NatFilter f;
  f.kind_ = Kind::f_statistical;
  f.modulus_ = modulus;
  return f;
}

NatFilter NatFilter::base(std::vector<NatSet> sets, const BaseCheckOptions& options) {
  if (sets.empty()) throw BaseNotFilterError("a filter base needs at least one set");
  for (const NatSet& s : sets) {
    if (!s.next_at_or_after(1, options.nonempty_horizon))
      throw BaseNotFilterError("base element " + s.to_string() + " is empty up to " +
                               std::to_string(options.nonempty_horizon));
  }
  const Index h = options.intersection_horizon;
  const auto inside = [&](const NatSet& c, const NatSet& a, const NatSet& b) {
    if (c.subset_of(a) == true && c.subset_of(b) == true) return true;
    if (c.subset_of(a) == false || c.subset_of(b) == false) return false;
    for (Index m : c.members_in(1, h)) {
      if (!a.contains(m) || !b.contains(m)) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const bool found = std::any_of(sets.begin(), sets.end(), [&](const NatSet& c) {
        return inside(c, sets[i], sets[j]);
      });
      if (!found)
        throw BaseNotFilterError("no base element lies inside " + sets[i].to_string() + " and " +
                                 sets[j].to_string());
    }
  }
  NatFilter f;
  f.kind_ = Kind::base;
  f.base_ = std::move(sets);
  return f;
}

NatFilter NatFilter::image(const IndexMap& g, const NatFilter& inner) {
  NatFilter f;
  f.kind_ = Kind::image;
  f.map_ = g;
  f.inner_ = std::make_shared<const NatFilter>(inner);
  return f;
}

NatFilter NatFilter::subsequence(const IndexMap& stream) {
  Index prev = 0;
  for (Index n = 1; n <= kStreamCheck; ++n) {
    const Index v = stream.saturating(n);
    if (v == kInfinity) break;
    if (v <= prev)
      throw PreconditionError("subsequence stream " + stream.to_string() +
                              " is not strictly increasing at n = " + std::to_string(n));
    prev = v;
  }
  NatFilter f;
  f.kind_ = Kind::subsequence;
  f.map_ = stream;
  f.inner_ = std::make_shared<const NatFilter>(frechet());
  return f;
}

const ModulusFunction& NatFilter::modulus() const {
  if (!modulus_) throw PreconditionError("filter " + to_string() + " has no modulus");
  return *modulus_;
}

const IndexMap& NatFilter::map() const {
  if (!map_) throw PreconditionError("filter " + to_string() + " has no index map");
  return *map_;
}

const NatFilter& NatFilter::inner() const {
  if (!inner_) throw PreconditionError("filter " + to_string() + " has no inner filter");
  return *inner_;
}

bool NatFilter::degenerate() const {
  if (map_ && map_->finite_range()) return true;
  return inner_ && inner_->degenerate();
}

std::string NatFilter::to_string() const {
  switch (kind_) {
    case Kind::frechet: return "frechet";
    case Kind::statistical: return "stat";
    case Kind::f_statistical: return "fstat(" + modulus_->name() + ")";
    case Kind::base: {
      std::vector<std::string> parts;
      for (const NatSet& s : base_) parts.push_back(s.to_string());
      return "base(" + dsl::join(parts) + ")";
    }
    case Kind::image: return "image(" + map_->to_string() + "," + inner_->to_string() + ")";
    case Kind::subsequence: return "subseq(" + map_->to_string() + ")";
  }
  return "?";
}

NatFilter NatFilter::parse(std::string_view text) {
  const dsl::Call call = dsl::parse_call(text);
  const auto& h = call.head;
  const auto expect = [&](std::size_t n) {
    if (call.args.size() != n)
      throw ParseError("filter '" + h + "' takes " + std::to_string(n) + " argument(s)");
  };
  if (h == "frechet" && !call.has_parens) return frechet();
  if ((h == "stat" || h == "statistical") && !call.has_parens) return statistical();
  if (h == "fstat") {
    expect(1);
    return f_statistical(parse_modulus(call.args[0]));
  }
  if (h == "base") {
    std::vector<NatSet> sets;
    for (const std::string& a : call.args) sets.push_back(NatSet::parse(a));
    return base(std::move(sets));
  }
  if (h == "image") {
    expect(2);
    return image(IndexMap::parse(call.args[0]), parse(call.args[1]));
  }
  if (h == "subseq") {
    expect(1);
    return subsequence(IndexMap::parse(call.args[0]));
  }
  throw ParseError("unknown filter '" + dsl::trim(text) +
                   "'; expected frechet, stat, fstat(f), base(...), image(g,F), subseq(s)");
}

NatFilter image_filter(const IndexMap& g, const NatFilter& f) { return NatFilter::image(g, f); }

namespace {

Verdict frechet_member(const NatSet& a, Index horizon) {
  const NatSet rest = NatSet::complement(a);
  Json diag;
  diag["set"] = a.to_string();
  diag["complement"] = rest.to_string();
  const auto finite = rest.is_finite();
  if (finite == true) {
    diag["rule"] = "complement-finite-by-construction";
    return Verdict::make(Outcome::holds, "complement is finite", std::move(diag));
  }
  if (finite == false) {
    diag["rule"] = "complement-infinite-by-construction";
    return Verdict::make(Outcome::fails, "complement is infinite", std::move(diag));
  }
  // Data-backed sets: inspect the complement on dyadic windows of the known
  // range.
  const Index h = std::min(horizon, a.known_horizon());
  diag["horizon"] = h;
  diag["rule"] = "complement-enumeration";
  if (h < 8) {
    return Verdict::make(Outcome::inconclusive, "known range too short", std::move(diag));
  }
  const auto last = [&](Index lo, Index hi) { return rest.next_at_or_after(lo + 1, hi); };
  const auto late = last(h / 2, h);
  if (!late) {
    const auto any = rest.next_at_or_after(1, h / 2);
    diag["complement_in_range"] = any.has_value();
    return Verdict::make(Outcome::holds,
                         "complement has no element in (" + std::to_string(h / 2) + ", " +
                             std::to_string(h) + "]",
                         std::move(diag));
  }
  diag["witness"] = *late;
  if (last(h / 8, h / 4) && last(h / 4, h / 2)) {
    return Verdict::make(Outcome::fails,
                         "complement keeps elements in every dyadic window up to the horizon",
                         std::move(diag));
  }
  return Verdict::make(Outcome::inconclusive, "complement has late elements", std::move(diag));
}

Verdict base_member(const NatFilter& f, const NatSet& a, Index horizon) {
  Json diag;
  diag["set"] = a.to_string();
  Json tried = Json::array();
  const Index h = std::min(horizon, a.known_horizon());
  for (const NatSet& b : f.base_sets()) {
    Json entry;
    entry["base"] = b.to_string();
    const auto symbolic = b.subset_of(a);
    std::optional<Index> outside;
    if (symbolic != true) {
      const Index limit = std::min(h, b.horizon_cap());
      Index cursor = 1;
      while (cursor <= limit) {
        const auto m = b.next_at_or_after(cursor, limit);
        if (!m) break;
        if (!a.contains(*m)) {
          outside = *m;
          break;
        }
        cursor = *m + 1;
      }
    }
    entry["symbolic_inclusion"] = symbolic ? Json(*symbolic) : Json(nullptr);
    if (outside) entry["outside_witness"] = *outside;
    tried.push_back(entry);
    if (!outside && symbolic != false) {
      diag["tried"] = tried;
      diag["witness_base"] = b.to_string();
      return Verdict::make(Outcome::holds, "base element " + b.to_string() + " lies inside the set",
                           std::move(diag));
    }
  }
  diag["tried"] = tried;
  return Verdict::make(Outcome::fails, "every base element has a point outside the set",
                       std::move(diag));
}

}  // namespace

Verdict member(const NatFilter& f, const NatSet& a, Index horizon, const DensityOptions& density) {
  Verdict v;
  switch (f.kind()) {
    case NatFilter::Kind::frechet:
      v = frechet_member(a, horizon);
      break;
    case NatFilter::Kind::statistical:
    case NatFilter::Kind::f_statistical: {
      // Density filters are free, so Frechet evidence carries over.
      Verdict fr = NatSet::complement(a).is_finite() == std::nullopt
                       ? frechet_member(a, horizon)
                       : Verdict::make(Outcome::inconclusive, "");
      if (fr.holds()) {
        fr.reason = "contains a Frechet set: " + fr.reason;
        fr.diagnostics["rule"] = "frechet-subfilter";
        v = std::move(fr);
        break;
      }
      v = has_f_density_zero(NatSet::complement(a), f.modulus(), horizon, density);
      v.diagnostics["set"] = a.to_string();
      break;
    }
    case NatFilter::Kind::base:
      v = base_member(f, a, horizon);
      break;
    case NatFilter::Kind::image:
    case NatFilter::Kind::subsequence: {
      const NatSet pre = NatSet::preimage(f.map(), a);
      v = member(f.inner(), pre, horizon, density);
      Json diag;
      diag["set"] = a.to_string();
      diag["preimage"] = pre.to_string();
      diag["inner"] = to_json(v);
      v.diagnostics = std::move(diag);
      v.reason = "through preimage under " + f.map().to_string() + ": " + v.reason;
      if (f.degenerate())
        v.warnings.push_back("index map " + f.map().to_string() +
                             " has finite range; " + f.to_string() + " is a trivial filter");
      break;
    }
  }
  v.diagnostics["filter"] = f.to_string();
  return v;
}

Verdict is_stationary(const NatFilter& f, const NatSet& a, Index horizon,
                      const DensityOptions& density) {
  const Verdict inner = member(f, NatSet::complement(a), horizon, density);
  Verdict v;
  v.outcome = negate(inner.outcome);
  v.reason = "complement membership " + std::string(to_string(inner.outcome)) + ": " + inner.reason;
  v.diagnostics["set"] = a.to_string();
  v.diagnostics["filter"] = f.to_string();
  v.diagnostics["complement_member"] = to_json(inner);
  v.warnings = inner.warnings;
  return v;
}

Verdict includes(const NatFilter& f1, const NatFilter& f2, const std::vector<TestbedEntry>& testbed,
                 Index horizon, const DensityOptions& density) {
  if (testbed.empty()) throw PreconditionError("includes needs a non-empty testbed");
  Json rows = Json::array();
  Json skipped = Json::array();
  std::optional<std::string> witness;
  bool undecided = false;
  for (const TestbedEntry& entry : testbed) {
    const Index h = std::min(horizon, entry.set.horizon_cap());
    const Verdict v1 = member(f1, entry.set, h, density);
    Json row;
    row["name"] = entry.name;
    row["set"] = entry.set.to_string();
    row["horizon"] = h;
    row["first"] = std::string(to_string(v1.outcome));
    if (v1.outcome == Outcome::inconclusive) {
      skipped.push_back(entry.name);
    } else if (v1.outcome == Outcome::holds) {
      const Verdict v2 = member(f2, entry.set, h, density);
      row["second"] = std::string(to_string(v2.outcome));
      if (v2.outcome == Outcome::fails && !witness) witness = entry.name;
      if (v2.outcome == Outcome::inconclusive) undecided = true;
    }
    rows.push_back(row);
  }
  Json diag;
  diag["first"] = f1.to_string();
  diag["second"] = f2.to_string();
  diag["rows"] = rows;
  diag["skipped_first_inconclusive"] = skipped;
  if (witness) {
    diag["witness"] = *witness;
    return Verdict::make(Outcome::fails, "testbed set " + *witness + " is in " + f1.to_string() +
                                             " but not in " + f2.to_string(),
                         std::move(diag));
  }
  if (undecided)
    return Verdict::make(Outcome::inconclusive, "some second-filter verdicts are inconclusive",
                         std::move(diag));
  return Verdict::make(Outcome::holds, "every testbed set in " + f1.to_string() + " is in " +
                                           f2.to_string(),
                       std::move(diag));
}

}  // namespace filterlab
