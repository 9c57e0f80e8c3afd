#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/gallery.hpp"

namespace filterlab {

ParamReader::ParamReader(const std::vector<ParamSpec>& specs, std::map<std::string, std::string> values,
                         std::uint64_t seed)
    : seed_(seed) {
  for (const auto& [key, value] : values) {
    const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == key; });
    if (!known) {
      std::vector<std::string> keys;
      for (const auto& s : specs) keys.push_back(s.key);
      throw ConfigError("unknown parameter '" + key + "'; expected one of " + dsl::join(keys, ", "));
    }
  }
  for (const auto& s : specs) values_.emplace(s.key, s.default_value);
  for (auto& [key, value] : values) values_[key] = std::move(value);
}

const std::string& ParamReader::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("parameter '" + key + "' is not defined");
  return it->second;
}

double ParamReader::number(const std::string& key) const { return dsl::parse_number(text(key)); }

Index ParamReader::index(const std::string& key) const { return dsl::parse_index(text(key)); }

std::vector<std::string> ParamReader::list(const std::string& key) const {
  const std::string& t = text(key);
  if (dsl::trim(t).empty()) return {};
  return dsl::split_top_level(t);
}

Json ParamReader::to_json() const {
  Json j = Json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  j["seed"] = seed_;
  return j;
}

void ExperimentReport::add(const std::string& label, const Verdict& v, bool optional) {
  Json j;
  j["label"] = label;
  j["outcome"] = std::string(to_string(v.outcome));
  j["reason"] = v.reason;
  if (optional) j["optional"] = true;
  if (!v.warnings.empty()) j["warnings"] = v.warnings;
  j["diagnostics"] = v.diagnostics;
  verdicts.push_back(std::move(j));
  if (!(optional && v.inconclusive())) outcome = conjunction(outcome, v.outcome);
}

std::string ExperimentReport::status() const {
  switch (outcome) {
    case Outcome::holds: return "pass";
    case Outcome::fails: return "fail";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Json ExperimentReport::to_json() const {
  Json j;
  j["name"] = name;
  j["parameters"] = parameters;
  j["status"] = status();
  j["summary"] = summary;
  if (!notes.empty()) j["notes"] = notes;
  j["details"] = details;
  j["sub_verdicts"] = verdicts;
  if (wall_seconds) j["wall_seconds"] = *wall_seconds;
  return j;
}

namespace {

const std::string kFunctionals =
    "ones,alternating,zero,basis(1),basis(2),basis(7),basis(50),geometric(0.5),geometric(0.8),"
    "expr(1/k^2),expr(2-1/k^2),expr((-1)^k+1/k^3),expr(3),expr(-1),expr(1+(-1)^k),"
    "expr(cos(pi*k)),expr(min(k,10)),expr(max(0,5-k)),expr(exp(-k)),expr((-1)^k*exp(-k/4))";

const std::string kFamily =
    "perturbed(1,empty,0),perturbed(1,finite(1),0),perturbed(0,finite(2,3,5,7,11,13),5),"
    "perturbed(-2,range(1,60),3),perturbed(0.5,finite(10,100,1000,10000),-4),"
    "perturbed(2,range(1000,1100),1),perturbed(-1,finite(99999,100000),1),perturbed(0,range(1,200),1)";

std::vector<Experiment> build() {
  using namespace experiments;
  return {
      {"fast_remark",
       "bounded statistically convergent sequences are Cesaro convergent to the same value",
       {{"cases", "25", "number of seeded random sequences"},
        {"horizon", "1e6", "indices inspected"},
        {"cesaro_tolerance", "0.01", "allowed distance of the Cesaro means from the limit"},
        {"density_tolerance", "0.001", "tail ratio below which a set counts as density zero"},
        {"sequence", "", "scalar sequence to test instead of the seeded cases"},
        {"exceptional", "empty", "exceptional set of the configured sequence"},
        {"bound", "1", "bound C of the configured sequence"},
        {"limit", "0", "statistical limit of the configured sequence"}},
       fast_remark},
      {"cesaro_lemma",
       "Cesaro means of a bounded statistically Cauchy sequence are Cauchy beyond the 1/(8C) threshold",
       {{"cases", "10", "number of seeded random sequences"},
        {"horizon", "1e5", "indices inspected"},
        {"sequence", "", "scalar sequence to test instead of the seeded cases"},
        {"exceptional", "empty", "complement of the witness set A"},
        {"bound", "1", "bound C of the configured sequence"}},
       cesaro_lemma},
      {"bfst_limit",
       "the Cesaro limit is the statistical limit along the witness set",
       {{"cases", "10", "number of seeded random sequences"},
        {"horizon", "1e5", "indices inspected"},
        {"sequence", "", "scalar sequence to test instead of the seeded cases"},
        {"exceptional", "empty", "complement of the witness set A"},
        {"bound", "1", "bound C of the configured sequence"},
        {"limit", "", "candidate limit; empty uses the last Cesaro mean"}},
       bfst_limit},
      {"l1_basis_counterexample",
       "the basis of l1 has no weak limit along a free filter surrogate",
       {{"dim", "100", "truncation dimension d"},
        {"surrogate", "affine(2,0)", "index stream of the subsequence filter"},
        {"functionals", kFunctionals, "test functionals in l_inf"},
        {"candidates", "zero,basis(1),basis(100),uniform,cesaro_basis(10),geometric(0.5),expr(1/k^2)",
         "candidate weak limits in l1"},
        {"random_candidates", "3", "extra seeded probability vectors"},
        {"eps", "1,0.1,0.01,0.001", "epsilon grid"},
        {"min_gap", "0.9", "required gap per candidate"}},
       l1_basis_counterexample},
      {"cfst_counterexample",
       "l1 with the weak topology of c(F_{f-st}) is not sequentially complete",
       {{"modulus", "log1p", "modulus f"},
        {"horizon", "1e5", "indices inspected"},
        {"dim", "1e5", "truncation dimension"},
        {"tolerance", "0.01", "Cesaro tolerance"},
        {"family", kFamily, "test functionals perturbed(c, set, s)"},
        {"cauchy_eps", "1,0.1,0.01", "epsilon grid for the Cauchy check"},
        {"candidates", "basis(1),zero,cesaro_basis(10),geometric(0.5),expr(1/k^2),basis(500)",
         "candidate representing vectors in l1"},
        {"min_gap", "0.9", "required gap per candidate"}},
       cfst_counterexample},
      {"dual_pointwise",
       "pointwise limits of bounded functionals give a bounded linear functional",
       {{"dim", "16", "truncation dimension"},
        {"horizon", "1e5", "indices inspected"},
        {"filter", "stat", "filter of the limits"},
        {"exceptional", "powers(2)", "indices where the minority functional is used"},
        {"bound", "1", "sup norm bound C"},
        {"tests", "5", "random l1 test vectors for the weak limit"},
        {"trials", "1000", "random triples for linearity and the norm bound"}},
       dual_pointwise},
      {"sparse_product",
       "limits of finitely supported functions keep their support in the inspected union",
       {{"horizon", "1e5", "indices inspected"},
        {"filter", "stat", "filter for the switching case"},
        {"exceptional", "powers(2)", "indices carrying key a"}},
       sparse_product},
      {"inclusion",
       "F_{f-st} is contained in F_st on the standard testbed",
       {{"horizon", "1e8", "largest horizon per testbed set"},
        {"moduli", "identity,log1p,pow(0.5)", "moduli f"}},
       inclusion},
      {"composition_identity",
       "Cauchy verdicts for x o g under F match x under the image filter g[F]",
       {{"horizon", "1e5", "indices of F inspected"}},
       composition_identity},
      {"metrizable_extraction",
       "a sequence picked from nested balls is Cauchy with the common center as limit",
       {{"depth", "40", "number of nested balls"},
        {"center", "[0.3,-0.7]", "common center"},
        {"norm", "linf", "l1 or linf"},
        {"selectors", "center,boundary,random(7)", "point selectors"}},
       metrizable_extraction},
  };
}

}  // namespace

const std::vector<Experiment>& gallery() {
  static const std::vector<Experiment> all = build();
  return all;
}

const Experiment& find_experiment(std::string_view name) {
  for (const auto& e : gallery())
    if (e.name == name) return e;
  std::vector<std::string> names;
  for (const auto& e : gallery()) names.push_back(e.name);
  throw CatalogError("unknown experiment '" + std::string(name) + "'; available: " + dsl::join(names, ", "));
}

ExperimentReport run_experiment(std::string_view name, const std::map<std::string, std::string>& values,
                                std::uint64_t seed, bool timings) {
  const Experiment& e = find_experiment(name);
  const ParamReader reader(e.params, values, seed);
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report = e.run(reader);
  report.name = e.name;
  report.parameters = reader.to_json();
  if (timings)
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<ExperimentReport> run_all(const std::map<std::string, std::map<std::string, std::string>>& values,
                                      std::uint64_t seed, unsigned jobs, bool timings) {
  const auto& all = gallery();
  std::vector<ExperimentReport> out(all.size());
  std::vector<std::exception_ptr> errors(all.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < all.size(); i = next++) {
      try {
        auto it = values.find(all[i].name);
        out[i] = run_experiment(all[i].name, it == values.end() ? std::map<std::string, std::string>{} : it->second,
                                seed, timings);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(all.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace filterlab
