#pragma once
// Named, reproducible experiments. Each experiment reads typed parameters
// with documented defaults and returns a report with every sub-verdict it
// relied on.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filterlab/index_map.hpp"
#include "filterlab/verdict.hpp"

namespace filterlab {

struct ParamSpec {
  std::string key;
  std::string default_value;
  std::string help;
};

class ParamReader {
 public:
  ParamReader(const std::vector<ParamSpec>& specs, std::map<std::string, std::string> values,
              std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  Index index(const std::string& key) const;
  /// Comma-separated list at top level.
  std::vector<std::string> list(const std::string& key) const;
  /// Effective values, defaults included, in key order.
  Json to_json() const;

 private:
  std::map<std::string, std::string> values_;
  std::uint64_t seed_;
};

struct ExperimentReport {
  std::string name;
  Json parameters = Json::object();
  Outcome outcome = Outcome::holds;
  std::string summary;
  Json verdicts = Json::array();
  Json details = Json::object();
  std::vector<std::string> notes;
  std::optional<double> wall_seconds;

  /// Records a sub-verdict; optional ones may stay inconclusive without
  /// affecting the outcome.
  void add(const std::string& label, const Verdict& v, bool optional = false);
  /// "pass", "fail" or "inconclusive".
  std::string status() const;
  Json to_json() const;
};

struct Experiment {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  std::function<ExperimentReport(const ParamReader&)> run;
};

const std::vector<Experiment>& gallery();
/// Throws CatalogError listing the available names.
const Experiment& find_experiment(std::string_view name);

/// Runs one experiment. Unknown parameter keys raise ConfigError.
ExperimentReport run_experiment(std::string_view name, const std::map<std::string, std::string>& values,
                                std::uint64_t seed, bool timings = false);

/// Runs every experiment; jobs > 1 uses worker threads, output order is the
/// registry order regardless.
std::vector<ExperimentReport> run_all(const std::map<std::string, std::map<std::string, std::string>>& values,
                                      std::uint64_t seed, unsigned jobs = 1, bool timings = false);

namespace experiments {
ExperimentReport fast_remark(const ParamReader& p);
ExperimentReport cesaro_lemma(const ParamReader& p);
ExperimentReport bfst_limit(const ParamReader& p);
ExperimentReport l1_basis_counterexample(const ParamReader& p);
ExperimentReport cfst_counterexample(const ParamReader& p);
ExperimentReport dual_pointwise(const ParamReader& p);
ExperimentReport sparse_product(const ParamReader& p);
ExperimentReport inclusion(const ParamReader& p);
ExperimentReport composition_identity(const ParamReader& p);
ExperimentReport metrizable_extraction(const ParamReader& p);
}  // namespace experiments

}  // namespace filterlab
