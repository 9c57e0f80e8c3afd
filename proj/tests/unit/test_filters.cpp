#include "doctest.h"
#include "filterlab/filters.hpp"
#include "support.hpp"

using namespace filterlab;
using testing::Index;

namespace {

Verdict in(const char* f, const char* a, Index h = 1'000'000) {
  return member(NatFilter::parse(f), NatSet::parse(a), h);
}

}  // namespace

TEST_CASE("membership examples") {
  CHECK(in("frechet", "compl(finite(1,2,3))").holds());
  CHECK(in("stat", "compl(cubes)").holds());
  CHECK(member(NatFilter::statistical(), NatSet::parse("compl(squares)"), 100'000'000).holds());
  CHECK(in("stat", "evens").fails());
  CHECK(in("image(affine(2,0),frechet)", "evens").holds());
  CHECK(in("image(affine(2,0),frechet)", "odds").fails());
  CHECK(in("frechet", "squares").fails());
  CHECK(in("base(ap(1,2),ap(1,4))", "odds").holds());
  CHECK(in("subseq(affine(2,0))", "evens").holds());
}

TEST_CASE("stationarity examples") {
  CHECK(is_stationary(NatFilter::statistical(), NatSet::parse("evens"), 1'000'000).holds());
  CHECK(is_stationary(NatFilter::statistical(), NatSet::parse("cubes"), 1'000'000).fails());
  for (const char* s : {"squares", "primes", "powers(2)", "evens"})
    CHECK(is_stationary(NatFilter::frechet(), NatSet::parse(s), 1'000'000).holds());
}

TEST_CASE("inclusion examples") {
  const std::vector<TestbedEntry> bed = {{"non-squares", NatSet::parse("compl(squares)")},
                                         {"non-primes-sparse", NatSet::parse("compl(union(cubes,powers(3)))")},
                                         {"evens", NatSet::parse("evens")}};
  CHECK(includes(NatFilter::parse("fstat(log1p)"), NatFilter::statistical(), bed, 100'000'000).holds());
  const Verdict v = includes(NatFilter::statistical(), NatFilter::frechet(), {bed[0]}, 100'000'000);
  CHECK(v.fails());
  CHECK(v.diagnostics.dump().find("non-squares") != std::string::npos);
  for (const char* f : {"frechet", "stat", "fstat(log1p)"})
    CHECK(includes(NatFilter::parse(f), NatFilter::parse(f), standard_testbed(), 1'000'000).holds());
}

TEST_CASE("inclusion of f-statistical filters for catalog moduli") {
  const auto bed = standard_testbed();
  for (const char* m : {"identity", "log1p", "sqrt", "pow(0.3)"}) {
    CAPTURE(m);
    const NatFilter fst = NatFilter::f_statistical(parse_modulus(m));
    const Verdict a = includes(fst, NatFilter::statistical(), bed, 100'000'000);
    CHECK(a.holds());
    CHECK(includes(NatFilter::frechet(), fst, bed, 100'000'000).holds());
  }
}

TEST_CASE("image filters") {
  const NatFilter id = image_filter(IndexMap::identity(), NatFilter::statistical());
  for (const auto& e : standard_testbed()) {
    CAPTURE(e.name);
    CHECK(member(id, e.set, 1'000'000).outcome == member(NatFilter::statistical(), e.set, 1'000'000).outcome);
  }
  const NatFilter trivial = image_filter(IndexMap::constant(1), NatFilter::frechet());
  CHECK(trivial.degenerate());
  const Verdict one = member(trivial, NatSet::parse("finite(1)"), 1000);
  CHECK(one.holds());
  CHECK_FALSE(one.warnings.empty());
}

TEST_CASE("property: N is in every filter and the empty set in none") {
  testing::Rng rng(3101);
  const char* pool[] = {"frechet", "stat", "fstat(log1p)", "fstat(sqrt)", "base(tail(10),tail(20))",
                        "image(affine(3,1),stat)", "subseq(square)", "image(pow2,frechet)"};
  for (int c = 0; c < testing::kCases; ++c) {
    NatFilter f = NatFilter::parse(pool[rng.integer(0, 7)]);
    if (rng.coin(0.3)) f = NatFilter::f_statistical(parse_modulus("pow(" + std::to_string(rng.uniform(0.1, 1)) + ")"));
    const Index h = rng.index(1000, 20000);
    REQUIRE(member(f, NatSet::all(), h).holds());
    REQUIRE(member(f, NatSet::empty(), h).fails());
  }
}

TEST_CASE("property: membership is closed under supersets") {
  testing::Rng rng(3102);
  const char* pool[] = {"frechet", "stat", "fstat(log1p)", "image(affine(2,0),frechet)"};
  int decided = 0;
  for (int c = 0; c < testing::kCases; ++c) {
    const NatFilter f = NatFilter::parse(pool[rng.integer(0, 3)]);
    const auto a = testing::oracle_set(rng, 10, 2), b = testing::oracle_set(rng, 10, 2);
    const NatSet sa = NatSet::parse(a.text);
    const NatSet sup = NatSet::union_of({sa, NatSet::parse(b.text)});
    REQUIRE(sa.subset_of(sup) == true);
    const Index h = 20000;
    if (member(f, sa, h).holds()) {
      ++decided;
      CAPTURE(a.text);
      REQUIRE(member(f, sup, h).holds());
    }
  }
  CHECK(decided > 50);
}
