// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "filterlab/density.hpp"
#include "filterlab/error.hpp"
#include "filterlab/extraction.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/gallery.hpp"
#include "filterlab/modulus.hpp"
#include "filterlab/natset.hpp"

using namespace filterlab;

namespace {

struct Check {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Closed-form counts used as oracles.
Check density_engine() {
  const auto t0 = Clock::now();
  const ModulusFunction id = parse_modulus("identity");
  const ModulusFunction lg = parse_modulus("log1p");
  std::ostringstream msg;
  bool ok = true;

  const DensityEstimate ev = f_density(NatSet::parse("evens"), id, 1'000'000);
  const double ev_oracle = double(1'000'000 / 2) / 1e6;
  ok &= ev.value && std::abs(*ev.value - 0.5) <= 1e-3 && std::abs(*ev.value - ev_oracle) <= 1e-3;
  msg << "evens " << (ev.value ? fmt(*ev.value) : "none");

  const DensityEstimate sq = f_density(NatSet::parse("squares"), id, 100'000'000);
  const double sq_oracle = std::floor(std::sqrt(1e8)) / 1e8;
  ok &= sq.value && *sq.value <= 1e-3 && sq.tail_sup <= 1e-3 && sq_oracle <= 1e-3;
  msg << "; squares " << (sq.value ? fmt(*sq.value) : "none");

  const DensityEstimate lsq = f_density(NatSet::parse("squares"), lg, 100'000'000);
  const double lsq_oracle = std::log1p(std::floor(std::sqrt(1e8))) / std::log1p(1e8);
  ok &= lsq.value && std::abs(*lsq.value - 0.5) <= 1e-2 && std::abs(lsq_oracle - 0.5) <= 1e-2;
  msg << "; log1p squares " << (lsq.value ? fmt(*lsq.value) : "none");

  const DensityEstimate bl = f_density(NatSet::parse("blocks(pow2)"), id, 1'000'000);
  ok &= bl.status == DensityStatus::oscillating && std::abs(bl.tail_inf - 1.0 / 3) <= 0.05 &&
        std::abs(bl.tail_sup - 2.0 / 3) <= 0.05;
  msg << "; blocks " << to_string(bl.status) << " [" << fmt(bl.tail_inf) << ", " << fmt(bl.tail_sup) << "]";

  const double s = seconds_since(t0);
  ok &= s < 5.0;
  msg << "; " << fmt(s) << " s";
  return {ok, msg.str()};
}

Check inclusion() {
  const auto t0 = Clock::now();
  const auto testbed = standard_testbed();
  bool ok = testbed.size() == 12;
  std::ostringstream msg;
  msg << testbed.size() << " sets";
  for (const char* m : {"identity", "log1p", "sqrt"}) {
    const Verdict v = includes(NatFilter::f_statistical(parse_modulus(m)), NatFilter::statistical(), testbed, 100'000'000);
    ok &= v.holds();
    msg << "; " << m << " " << to_string(v.outcome);
  }
  const double s = seconds_since(t0);
  ok &= s < 10.0;
  msg << "; " << fmt(s) << " s";
  return {ok, msg.str()};
}

Json run(const char* name, double* secs = nullptr) {
  const auto t0 = Clock::now();
  Json j = run_experiment(name, {}, 7).to_json();
  if (secs) *secs = seconds_since(t0);
  return j;
}

Check fast_remark() {
  const Json r = run("fast_remark");
  std::size_t passed = 0;
  for (const auto& c : r["details"]["cases"]) passed += c["status"] == "pass" ? 1 : 0;
  const std::size_t total = r["details"]["cases"].size();
  return {r["status"] == "pass" && total == 25 && passed == 25,
          std::to_string(passed) + "/" + std::to_string(total) + " cases pass"};
}

Check cesaro_lemma() {
  const Json r = run("cesaro_lemma");
  const std::size_t n = r["details"]["cases"].size();
  const int violations = r["details"]["violations"].get<int>();
  return {r["status"] == "pass" && n == 10 && violations == 0,
          std::to_string(n) + " inputs, " + std::to_string(violations) + " violations"};
}

Check l1_counterexample() {
  double s = 0;
  const Json r = run("l1_basis_counterexample", &s);
  std::size_t cauchy = 0;
  for (const auto& f : r["details"]["functionals"]) cauchy += f["cauchy"] == "holds" ? 1 : 0;
  double min_gap = INFINITY;
  for (const auto& c : r["details"]["candidates"]) min_gap = std::min(min_gap, c["gap"].get<double>());
  const std::size_t nf = r["details"]["functionals"].size();
  return {r["status"] == "pass" && r["parameters"]["dim"] == "100" && nf == 20 && cauchy == nf && min_gap >= 0.9 && s < 2.0,
          std::to_string(cauchy) + "/" + std::to_string(nf) + " functionals Cauchy; min gap " + fmt(min_gap) + "; " +
              fmt(s) + " s"};
}

Check cfst_counterexample() {
  const Json r = run("cfst_counterexample");
  double min_gap = INFINITY;
  for (const auto& c : r["details"]["candidates"]) min_gap = std::min(min_gap, c["gap"].get<double>());
  return {r["status"] == "pass" && r["parameters"]["modulus"] == "log1p" && min_gap >= 0.9,
          "status " + r["status"].get<std::string>() + "; " + std::to_string(r["details"]["family"].size()) +
              " functionals; min gap " + fmt(min_gap)};
}

Check composition() {
  const Json r = run("composition_identity");
  std::size_t agree = 0;
  for (const auto& t : r["details"]["triples"]) agree += t["composed"] == t["image"] ? 1 : 0;
  const std::size_t n = r["details"]["triples"].size();
  return {r["status"] == "pass" && n == 8 && agree == n,
          std::to_string(agree) + "/" + std::to_string(n) + " triples agree"};
}

Check extraction() {
  const std::vector<double> c = {0.3, -0.7};
  bool ok = true;
  std::ostringstream msg;
  for (Norm norm : {Norm::linf, Norm::l1}) {
    std::vector<Region> balls;
    for (int k = 1; k <= 40; ++k) balls.push_back(Region::ball(c, std::ldexp(1.0, -k), norm));
    ExtractionOptions o;
    o.norm = norm;
    const ExtractionResult r = extract_cauchy_from_base(balls, Selector::parse("random(7)"), o);
    bool within = r.points.size() == 40;
    for (std::size_t n = 1; within && n <= 40; ++n)
      within = norm_distance(r.points[n - 1], c, norm) <= std::ldexp(1.0, -int(n));
    ok &= within && r.cauchy_audit.holds();
    msg << (norm == Norm::linf ? "linf" : "l1") << " depth " << r.points.size() << " audit "
        << to_string(r.cauchy_audit.outcome) << "; ";
  }
  std::vector<Region> seg;
  for (int k = 1; k <= 10; ++k) seg.push_back(Region::box({0, 0}, {1 + 1.0 / k, 0}));
  try {
    extract_cauchy_from_base(seg, Selector{}, {});
    ok = false;
    msg << "segments accepted";
  } catch (const NotCauchyFilterError& e) {
    ok &= e.diameter() > e.allowed();
    msg << "segments rejected: diameter " << fmt(e.diameter()) << " > " << fmt(e.allowed());
  }
  return {ok, msg.str()};
}

Check invariant_suites() {
  const auto t0 = Clock::now();
  const std::string cmd = std::string("\"") + FILTERLAB_UNIT_TESTS + "\" > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  const double s = seconds_since(t0);
  return {rc == 0 && s < 60.0, "unit suite exit " + std::to_string(rc) + "; " + fmt(s) + " s"};
}

Check determinism() {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "filterlab_acceptance_a.json";
  const auto b = dir / "filterlab_acceptance_b.json";
  auto once = [](const std::filesystem::path& out) {
    const std::string cmd = std::string("\"") + FILTERLAB_CLI + "\" gallery run-all --seed 7 --report \"" +
                            out.string() + "\" > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const int ra = once(a);
  const int rb = once(b);
  const std::string x = slurp(a), y = slurp(b);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  const bool same = !x.empty() && x == y;
  return {ra == 0 && rb == 0 && same, std::to_string(x.size()) + " bytes, " + (same ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"density engine", density_engine},
      {"f-statistical inside statistical", inclusion},
      {"fast remark", fast_remark},
      {"cesaro lemma", cesaro_lemma},
      {"l1 counterexample", l1_counterexample},
      {"c(F_f-st) counterexample", cfst_counterexample},
      {"composition identity", composition},
      {"metrizable extraction", extraction},
      {"invariant suites", invariant_suites},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    failed += r.pass ? 0 : 1;
    std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first, r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
