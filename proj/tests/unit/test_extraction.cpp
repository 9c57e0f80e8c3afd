#include <cmath>

#include "doctest.h"
#include "filterlab/error.hpp"
#include "filterlab/extraction.hpp"
#include "support.hpp"

using namespace filterlab;

TEST_CASE("nested balls converge to the center") {
  const std::vector<double> c = {0.3, -0.7};
  for (Norm norm : {Norm::linf, Norm::l1}) {
    std::vector<Region> balls;
    for (int k = 1; k <= 40; ++k) balls.push_back(Region::ball(c, std::ldexp(1.0, -k), norm));
    for (const char* s : {"center", "boundary", "random(7)"}) {
      CAPTURE(s);
      ExtractionOptions o;
      o.norm = norm;
      const ExtractionResult r = extract_cauchy_from_base(balls, Selector::parse(s), o);
      REQUIRE(r.points.size() == 40);
      for (std::size_t n = 1; n <= 40; ++n)
        CHECK(norm_distance(r.points[n - 1], c, norm) <= std::ldexp(1.0, -int(n)) + 1e-15);
      CHECK(r.cauchy_audit.holds());
      CHECK(r.limit_audit.holds());
    }
  }
}

TEST_CASE("segments that never shrink are rejected with the diameter diagnostic") {
  std::vector<Region> seg;
  for (int k = 1; k <= 10; ++k) seg.push_back(Region::box({0, 0}, {1 + 1.0 / k, 0}));
  try {
    extract_cauchy_from_base(seg, Selector{}, {});
    FAIL("accepted");
  } catch (const NotCauchyFilterError& e) {
    CHECK(e.diameter() > 1.0);
    CHECK(e.diameter() > e.allowed());
  }
}

TEST_CASE("a constant base gives the constant sequence") {
  std::vector<Region> same(12, Region::box({2, 3}, {2, 3}));
  const ExtractionResult r = extract_cauchy_from_base(same, Selector::parse("random(3)"), {});
  for (const auto& p : r.points) CHECK(p == std::vector<double>{2, 3});
  CHECK(r.cauchy_audit.holds());
}

TEST_CASE("disjoint boxes are not a filter base") {
  std::vector<Region> b = {Region::box({0}, {1}), Region::box({2}, {2.5})};
  ExtractionOptions o;
  o.radius_scale = 10;
  CHECK_THROWS_AS(extract_cauchy_from_base(b, Selector{}, o), BaseNotFilterError);
}

TEST_CASE("property: random nested balls") {
  testing::Rng rng(6101);
  for (int c = 0; c < testing::kCases; ++c) {
    const std::size_t d = static_cast<std::size_t>(rng.integer(1, 4));
    const auto center = rng.values(d, -5, 5);
    const Norm norm = rng.coin() ? Norm::l1 : Norm::linf;
    const int depth = static_cast<int>(rng.integer(2, 20));
    std::vector<Region> balls;
    for (int k = 1; k <= depth; ++k) balls.push_back(Region::ball(center, std::ldexp(1.0, -k), norm));
    ExtractionOptions o;
    o.norm = norm;
    const ExtractionResult r =
        extract_cauchy_from_base(balls, Selector::parse("random(" + std::to_string(c) + ")"), o);
    for (int n = 1; n <= depth; ++n) REQUIRE(norm_distance(r.points[n - 1], center, norm) <= std::ldexp(1.0, -n) + 1e-15);
    REQUIRE(r.cauchy_audit.holds());
  }
}

TEST_CASE("region text forms") {
  CHECK(Region::parse("box([0,0],[1,2])").contains({0.5, 1.5}));
  CHECK_FALSE(Region::parse("ball([0,0], 1, l1)").contains({0.8, 0.8}));
  CHECK(Region::parse("ball([0,0], 1, linf)").contains({0.8, 0.8}));
  CHECK(Region::parse("ball([0,0], 1, linf)").diameter(Norm::l1) == doctest::Approx(4));
}
