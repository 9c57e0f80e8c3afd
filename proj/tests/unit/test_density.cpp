#include <cmath>

#include "doctest.h"
#include "filterlab/density.hpp"
#include "filterlab/error.hpp"
#include "support.hpp"

using namespace filterlab;
using testing::Index;

namespace {
const ModulusFunction kId = builtin_modulus("identity");
const ModulusFunction kLog = builtin_modulus("log1p");
}  // namespace

TEST_CASE("evens at 1e6: value 0.5") {
  const DensityEstimate e = f_density(NatSet::parse("evens"), kId, 1'000'000);
  CHECK(e.status == DensityStatus::converged);
  REQUIRE(e.value);
  CHECK(std::fabs(*e.value - 0.5) <= 1e-3);
  // closed form floor(n/2)/n at every checkpoint
  for (const auto& [n, r] : e.samples) CHECK(r == doctest::Approx(double(n / 2) / double(n)).epsilon(1e-15));
}

TEST_CASE("squares under identity tend to 0") {
  const DensityEstimate e = f_density(NatSet::parse("squares"), kId, 1'000'000);
  CHECK(e.tail_sup <= 1e-2);
  for (const auto& [n, r] : e.samples) {
    const Index root = static_cast<Index>(std::sqrt(double(n)));
    CHECK(r == doctest::Approx(double(root) / double(n)));
  }
  CHECK(has_f_density_zero(NatSet::parse("squares"), kId, 100'000'000).holds());
}

TEST_CASE("squares under log1p at 1e8: value 1/2") {
  const DensityEstimate e = f_density(NatSet::parse("squares"), kLog, 100'000'000);
  CHECK(e.status == DensityStatus::converged);
  REQUIRE(e.value);
  CHECK(std::fabs(*e.value - 0.5) <= 1e-2);
  for (const auto& [n, r] : e.samples) {
    const double root = std::floor(std::sqrt(double(n)));
    CHECK(r == doctest::Approx(std::log1p(root) / std::log1p(double(n))));
  }
}

TEST_CASE("block union oscillates between 1/3 and 2/3") {
  const DensityEstimate e = f_density(NatSet::parse("blocks(pow2)"), kId, 1'000'000);
  CHECK(e.status == DensityStatus::oscillating);
  CHECK_FALSE(e.value);
  CHECK(std::fabs(e.tail_inf - 1.0 / 3.0) <= 0.05);
  CHECK(std::fabs(e.tail_sup - 2.0 / 3.0) <= 0.05);
  // brute-force counts at n = 2^(2k) - 1 and 2^(2k+1) - 1
  const NatSet b = NatSet::parse("blocks(pow2)");
  for (int k = 2; k <= 8; ++k) {
    for (Index n : {(Index(1) << (2 * k)) - 1, (Index(1) << (2 * k + 1)) - 1}) {
      Index c = 0;
      for (Index m = 1; m <= n; ++m) {
        Index lo = 1;
        while (lo * 4 <= m) lo *= 4;
        c += m < 2 * lo ? 1 : 0;
      }
      CHECK(b.count(n) == c);
    }
  }
}

TEST_CASE("density-zero verdicts") {
  CHECK(has_f_density_zero(NatSet::parse("evens"), kId, 1'000'000).fails());
  CHECK(has_f_density_zero(NatSet::parse("range(1,1000000)"), kLog, 1'000'000'000).holds());
  CHECK(has_f_density_zero(NatSet::parse("cubes"), kId, 1'000'000).holds());
  CHECK_THROWS_AS(f_density(NatSet::parse("evens"), builtin_modulus("bounded_rational"), 1'000'000),
                  BoundedModulusError);
  CHECK_THROWS_AS(has_f_density_zero(NatSet::parse("evens"), kId, 10), PreconditionError);
}

TEST_CASE("property: the whole of N has ratio exactly 1") {
  testing::Rng rng(2101);
  for (int c = 0; c < testing::kCases; ++c) {
    const Index h = rng.index(1000, 2'000'000);
    const ModulusFunction f = rng.coin() ? kLog : parse_modulus("pow(" + std::to_string(rng.uniform(0.1, 1)) + ")");
    const DensityEstimate e = f_density(NatSet::all(), f, h);
    for (const auto& s : e.samples) REQUIRE(s.second == 1.0);
    REQUIRE(e.status == DensityStatus::converged);
  }
}

TEST_CASE("property: estimate bounds and complement additivity") {
  testing::Rng rng(2102);
  const Index h = 20000;
  for (int c = 0; c < testing::kCases; ++c) {
    const testing::OracleSet o = testing::oracle_set(rng, 10, 2);
    CAPTURE(o.text);
    const NatSet a = NatSet::parse(o.text);
    const DensityEstimate e = f_density(a, kId, h);
    REQUIRE(0.0 <= e.tail_inf);
    REQUIRE(e.tail_inf <= e.tail_sup);
    REQUIRE(e.tail_sup <= 1.0);
    if (e.status == DensityStatus::converged) {
      DensityOptions opts;
      REQUIRE(e.tail_sup - e.tail_inf <= opts.tolerance + 1e-15);
      REQUIRE(*e.value == doctest::Approx((e.tail_inf + e.tail_sup) / 2));
      const DensityEstimate ce = f_density(NatSet::complement(a), kId, h);
      if (ce.status == DensityStatus::converged) REQUIRE(std::fabs(*ce.value - (1 - *e.value)) <= 2 * opts.tolerance);
    }
  }
}

TEST_CASE("property: finite sets have f-density zero for unbounded f") {
  testing::Rng rng(2103);
  for (int c = 0; c < testing::kCases; ++c) {
    std::string text = "finite(";
    const int m = static_cast<int>(rng.integer(1, 20));
    for (int i = 0; i < m; ++i) text += (i ? "," : "") + std::to_string(rng.index(1, 1'000'000));
    text += ")";
    const ModulusFunction f = rng.coin() ? kLog : parse_modulus("pow(" + std::to_string(rng.uniform(0.05, 1)) + ")");
    REQUIRE(has_f_density_zero(NatSet::parse(text), f, rng.index(1000, 100'000'000)).holds());
  }
}
