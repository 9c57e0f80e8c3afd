#include "doctest.h"
#include "filterlab/error.hpp"
#include "filterlab/natset.hpp"
#include "support.hpp"

using namespace filterlab;
using testing::Index;

TEST_CASE("counts on small prefixes") {
  CHECK(NatSet::parse("evens").count(10) == 5);
  CHECK(NatSet::parse("squares").count(10) == 3);
  // [1,2) u [4,8) u [16,32)
  Index brute = 0;
  for (Index n = 1; n <= 16; ++n) brute += ((n >= 1 && n < 2) || (n >= 4 && n < 8) || n == 16) ? 1 : 0;
  CHECK(NatSet::parse("blocks(pow2)").count(16) == brute);
  CHECK(NatSet::parse("finite(3,1,2,2)").count(100) == 3);
  CHECK(NatSet::parse("range(5,inf)").count(9) == 5);
}

TEST_CASE("named sets: counting equals brute force on [1, 1e4], enumeration agrees on [1, 1e5]") {
  for (const char* text : {"evens", "odds", "squares", "cubes", "primes", "ap(3,7)", "poly(1,2,3)", "blocks(2)",
                           "blocks(3)", "powers(3)", "compl(squares)", "union(cubes,powers(2))",
                           "inter(evens,squares)", "tail(500)", "preimage(affine(2,0),squares)"}) {
    CAPTURE(text);
    const NatSet s = NatSet::parse(text);
    Index c = 0;
    for (Index n = 1; n <= 10000; ++n) {
      c += s.contains(n) ? 1 : 0;
      if (n % 97 == 0 || n == 10000) REQUIRE(s.count(n) == c);
    }
    const auto members = s.members_in(1, 100000);
    std::size_t j = 0;
    for (Index n = 1; n <= 100000; ++n) {
      const bool listed = j < members.size() && members[j] == n;
      REQUIRE(listed == s.contains(n));
      j += listed ? 1 : 0;
    }
  }
}

TEST_CASE("property: random constructor trees match the enumeration oracle") {
  testing::Rng rng(1301);
  const Index n = 600;
  for (int c = 0; c < testing::kCases; ++c) {
    const testing::OracleSet o = testing::oracle_set(rng, n, 3);
    CAPTURE(o.text);
    const NatSet s = NatSet::parse(o.text);
    Index running = 0;
    for (Index k = 1; k <= n; ++k) {
      REQUIRE(s.contains(k) == o.in[k]);
      const Index before = running;
      running += o.in[k] ? 1 : 0;
      if (k % 37 == 0) {
        const Index got = s.count(k);
        REQUIRE(got == running);
        REQUIRE(s.count(k - 1) == before);
        REQUIRE(before <= got);
        REQUIRE(got <= before + 1);
      }
    }
    const auto members = s.members_in(1, n);
    REQUIRE(members.size() == running);
    REQUIRE(NatSet::parse(s.to_string()).count(n) == running);
  }
}

TEST_CASE("constructor reasoning") {
  CHECK(NatSet::parse("finite(1,5)").is_finite() == true);
  CHECK(NatSet::parse("compl(finite(1,5))").is_cofinite() == true);
  CHECK(NatSet::parse("squares").is_finite() == false);
  CHECK(NatSet::parse("squares").subset_of(NatSet::parse("union(squares,evens)")) == true);
  CHECK(NatSet::empty().count(1000) == 0);
  CHECK(NatSet::all().count(1000) == 1000);
}

TEST_CASE("standard testbed has twelve sets") { CHECK(standard_testbed().size() == 12); }

TEST_CASE("errors") {
  CHECK_THROWS_AS(NatSet::parse("union(squares"), ParseError);
  CHECK_THROWS_AS(NatSet::parse("wobbly"), ParseError);
  CHECK_THROWS_AS(NatSet::parse("primes").count(kPredicateCap + 1), HorizonExceededError);
}
