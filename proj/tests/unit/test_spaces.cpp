#include <cmath>

#include "doctest.h"
#include "filterlab/error.hpp"
#include "filterlab/spaces.hpp"
#include "support.hpp"

using namespace filterlab;

namespace {

Vector random_vector(testing::Rng& rng, std::size_t d) {
  if (rng.coin(0.3)) {
    std::vector<std::pair<std::size_t, double>> e;
    for (int i = 0; i < 5; ++i) e.emplace_back(rng.index(0, d - 1), rng.uniform(-10, 10));
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end(), [](auto& x, auto& y) { return x.first == y.first; }), e.end());
    return Vector::indexed(d, e);
  }
  return Vector::dense(rng.values(d, -10, 10));
}

}  // namespace

TEST_CASE("seminorm examples") {
  CHECK(SpaceModel::l1(3).seminorm("norm", Vector::basis(3, 2)) == 1.0);
  const SpaceModel fam = SpaceModel::seminorm_family({Vector::dense({1, 1, 1})}, {"y"});
  CHECK(fam.seminorm("y", Vector::dense({1, -1, 0})) == 0.0);
  CHECK(fam.seminorm("y", Vector::basis(3, 1)) == 1.0);
  CHECK(SpaceModel::linf(4).seminorm("norm", Vector::dense({1, -7, 2, 0})) == 7.0);
  CHECK(SpaceModel::l1(4).seminorm("norm", Vector::dense({1, -7, 2, 0})) == 10.0);
  CHECK_THROWS_AS(fam.seminorm("z", Vector::basis(3, 1)), UnknownLabelError);
  CHECK_THROWS_AS(fam.seminorm("y", Vector::basis(4, 1)), DimensionMismatchError);
}

TEST_CASE("pairing examples") {
  CHECK(pairing(Vector::ones(100), Vector::basis(100, 5)) == 1.0);
  for (std::size_t k = 1; k <= 12; ++k)
    for (std::size_t n = 1; n <= 12; ++n) CHECK(pairing(Vector::basis(12, k), Vector::basis(12, n)) == (k == n ? 1.0 : 0.0));
  for (int d : {1, 5, 20, 40}) {
    const Vector y = Vector::parse("geometric(0.5)", d);
    CHECK(pairing(Vector::ones(d), y) == doctest::Approx(1 - std::ldexp(1.0, -d)).epsilon(1e-14));
  }
  CHECK(pairing(Vector::keyed({{"a", 2}, {"b", 3}}), Vector::keyed({{"b", 4}, {"c", 5}})) == 12.0);
}

TEST_CASE("vector text forms") {
  CHECK(Vector::parse("cesaro_basis(4)", 10) == Vector::cesaro_basis(10, 4));
  CHECK(Vector::parse("[1, 2, 3]", 3).coordinate(1) == 2.0);
  CHECK(Vector::parse("{a: 1.5}", 0).entry("a") == 1.5);
  CHECK(Vector::parse("uniform", 4).norm_l1() == doctest::Approx(1.0));
  CHECK(Vector::parse("alternating", 4).coordinate(0) == -1.0);
}

TEST_CASE("property: seminorm axioms on random triples") {
  testing::Rng rng(4101);
  const std::size_t d = 24;
  std::vector<Vector> ys;
  for (int i = 0; i < 4; ++i) ys.push_back(random_vector(rng, d));
  const std::vector<SpaceModel> spaces = {SpaceModel::l1(d), SpaceModel::linf(d),
                                          SpaceModel::seminorm_family(ys, {"y1", "y2", "y3", "y4"})};
  for (const auto& sp : spaces) {
    for (int c = 0; c < testing::kCases; ++c) {
      const Vector x = random_vector(rng, d), y = random_vector(rng, d);
      const double alpha = rng.uniform(-5, 5);
      for (const auto& l : sp.labels()) {
        const double px = sp.seminorm(l, x), py = sp.seminorm(l, y);
        REQUIRE(px >= 0);
        REQUIRE(sp.seminorm(l, x + y) <= px + py + 1e-9);
        REQUIRE(sp.seminorm(l, x.scaled(alpha)) == doctest::Approx(std::fabs(alpha) * px).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("property: pairing is bilinear and bounded") {
  testing::Rng rng(4102);
  const std::size_t d = 32;
  for (int c = 0; c < testing::kCases; ++c) {
    const Vector x = random_vector(rng, d), y = random_vector(rng, d), z = random_vector(rng, d);
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const double lhs = pairing(x.scaled(a) + y.scaled(b), z);
    const double rhs = a * pairing(x, z) + b * pairing(y, z);
    const double scale = std::fabs(a) * x.norm_linf() * z.norm_l1() + std::fabs(b) * y.norm_linf() * z.norm_l1();
    REQUIRE(std::fabs(lhs - rhs) <= 1e-9 * (1 + scale));
    const double rhs2 = a * pairing(z, x) + b * pairing(z, y);
    REQUIRE(std::fabs(pairing(z, x.scaled(a) + y.scaled(b)) - rhs2) <= 1e-9 * (1 + scale));
    REQUIRE(std::fabs(pairing(x, y)) <= x.norm_linf() * y.norm_l1() * (1 + 1e-12));
  }
}
