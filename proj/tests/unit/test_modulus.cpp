#include <cmath>

#include "doctest.h"
#include "filterlab/error.hpp"
#include "filterlab/modulus.hpp"
#include "support.hpp"

using namespace filterlab;

namespace {

const AxiomCheck& axiom(const ValidationReport& r, const std::string& name) {
  for (const auto& a : r.axioms)
    if (a.axiom == name) return a;
  FAIL("missing axiom " << name);
  return r.axioms.front();
}

}  // namespace

TEST_CASE("catalog moduli satisfy the axioms") {
  for (const char* name : {"identity", "log1p", "sqrt", "pow(0.3)", "pow(1)", "bounded_rational"}) {
    const ValidationReport r = validate_modulus(parse_modulus(name));
    CAPTURE(name);
    CHECK(r.axioms_hold());
    CHECK(r.all_hold());
  }
  CHECK(validate_modulus(builtin_modulus("identity")).unboundedness.verdict == UnboundednessVerdict::unbounded);
  CHECK(validate_modulus(builtin_modulus("log1p")).unboundedness.verdict == UnboundednessVerdict::unbounded);
  const ModulusFunction b = builtin_modulus("bounded_rational");
  CHECK_FALSE(b.is_unbounded());
  CHECK(validate_modulus(b).unboundedness.verdict == UnboundednessVerdict::inconclusive_bounded);
}

TEST_CASE("t squared fails subadditivity with witness (1, 1)") {
  const ValidationReport r = validate_modulus(modulus_from_expression("t*t"));
  const AxiomCheck& sub = axiom(r, "subadditive");
  CHECK(sub.outcome == Outcome::fails);
  REQUIRE(sub.witness);
  CHECK(sub.witness->first == 1.0);
  CHECK(sub.witness->second == 1.0);
  CHECK(axiom(r, "zero").outcome == Outcome::holds);
  CHECK(axiom(r, "monotone").outcome == Outcome::holds);
}

TEST_CASE("validation rejects broken functions") {
  CHECK(axiom(validate_modulus(modulus_from_expression("t+1")), "zero").outcome == Outcome::fails);
  CHECK(axiom(validate_modulus(modulus_from_expression("sin(t)")), "monotone").outcome == Outcome::fails);
  CHECK_THROWS_AS(validate_modulus(modulus_from_expression("log(t-1)")), InvalidFunctionError);
  CHECK_THROWS_AS(builtin_modulus("cosh"), CatalogError);
  CHECK_THROWS_AS(parse_modulus("pow(2)"), CatalogError);
}

TEST_CASE("validation grid covers integers up to 64 and reaches 1e6") {
  const auto g = default_validation_grid();
  for (int k = 0; k <= 64; ++k) CHECK(std::find(g.begin(), g.end(), double(k)) != g.end());
  CHECK(*std::max_element(g.begin(), g.end()) == doctest::Approx(1e6));
}

TEST_CASE("log1p subadditivity matches the product identity on the grid") {
  // log(1+x+y) <= log(1+x) + log(1+y)  iff  1+x+y <= (1+x)(1+y)
  const ModulusFunction f = builtin_modulus("log1p");
  const auto g = f.validation_grid();
  for (double x : g)
    for (double y : g) {
      const bool product = 1 + x + y <= (1 + x) * (1 + y);
      CHECK(product);
      CHECK(f(x + y) <= f(x) + f(y) + 1e-9 * (f(x) + f(y)));
    }
}

TEST_CASE("property: compositions of valid moduli stay monotone and vanish at 0") {
  testing::Rng rng(7001);
  const char* pool[] = {"identity", "log1p", "sqrt", "bounded_rational"};
  for (int c = 0; c < testing::kCases; ++c) {
    const auto pick = [&]() -> ModulusFunction {
      if (rng.coin()) return parse_modulus(pool[rng.integer(0, 3)]);
      return parse_modulus("pow(" + std::to_string(rng.uniform(0.05, 1.0)) + ")");
    };
    const ModulusFunction outer = pick(), inner = pick();
    const ModulusFunction h = compose(outer, inner);
    CHECK(h(0.0) == 0.0);
    const auto& grid = h.validation_grid();
    for (std::size_t i = 1; i < grid.size(); i += 7) REQUIRE(h(grid[i - 1]) <= h(grid[i]) + 1e-12);
    CHECK(h.is_unbounded() == (outer.is_unbounded() && inner.is_unbounded()));
  }
}

TEST_CASE("composition subadditivity is checked, not assumed") {
  const ValidationReport ok = validate_modulus(compose(builtin_modulus("log1p"), builtin_modulus("sqrt")));
  CHECK(ok.axioms_hold());
  const ValidationReport bad = validate_modulus(compose(modulus_from_expression("t*t"), builtin_modulus("identity")));
  CHECK(axiom(bad, "subadditive").outcome == Outcome::fails);
}
