#include <cmath>

#include "doctest.h"
#include "filterlab/converge.hpp"
#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "support.hpp"

using namespace filterlab;
using testing::Index;

namespace {

// Squares are certified density zero at 1e6 only with a 1e-2 tail rule;
// eps stops at 1e-2 so the 1/n transient stays inside it.
CheckOptions relaxed(Index h = 1'000'000) {
  CheckOptions o;
  o.horizon = h;
  o.eps_grid = {1, 0.1, 0.01};
  o.density.tolerance = 1e-2;
  o.density.zero_tolerance = 1e-2;
  return o;
}

CheckOptions at(Index h) {
  CheckOptions o;
  o.horizon = h;
  return o;
}

const SpaceModel kLine = SpaceModel::scalar();

Sequence square_spiked(std::size_t dim = 1) {
  // e1 on squares, e1/n elsewhere
  return parse_sequence("perturbed(1/n, squares, 1)", dim);
}

}  // namespace

TEST_CASE("limit examples") {
  const SpaceModel l1 = SpaceModel::l1(1);
  CHECK(f_limit_check(*scalar_sequence("1/n"), Vector::dense({0}), NatFilter::frechet(), l1, at(100000)).holds());
  CHECK(f_limit_check(*square_spiked(), Vector::dense({0}), NatFilter::statistical(), kLine, relaxed()).holds());
  CHECK(f_limit_check(*square_spiked(), Vector::dense({0}), NatFilter::frechet(), kLine, relaxed()).fails());
  const Verdict basis = f_limit_check(*basis_sequence(1000), Vector::zeros(1000), NatFilter::statistical(),
                                      SpaceModel::l1(1000), at(1000));
  CHECK(basis.fails());
  CHECK(basis.reason.find("eps=1") != std::string::npos);
}

TEST_CASE("cauchy examples") {
  for (const char* f : {"frechet", "stat", "subseq(affine(2,0))"}) {
    CAPTURE(f);
    CHECK(f_cauchy_check(*basis_sequence(2000), NatFilter::parse(f), SpaceModel::l1(2000), at(1000)).fails());
  }
  CHECK(f_cauchy_check(*square_spiked(), NatFilter::statistical(), kLine, relaxed()).holds());
  const SpaceModel fam = SpaceModel::seminorm_family({Vector::parse("harmonic", 5000)}, {"y"});
  CHECK(f_cauchy_check(*basis_sequence(5000), NatFilter::frechet(), fam, at(5000)).holds());
  const SpaceModel fam2 = SpaceModel::seminorm_family(
      {Vector::ones(100000), Vector::parse("expr(1/k)", 100000)}, {"ones", "harmonic"});
  CHECK(f_cauchy_check(*cesaro_basis_sequence(100000), NatFilter::parse("fstat(log1p)"), fam2, at(100000)).holds());
}

TEST_CASE("cluster examples") {
  const Sequence alt = scalar_sequence("(-1)^n");
  CHECK(cluster_point_check(*alt, Vector::dense({1}), NatFilter::frechet(), kLine, at(100000)).holds());
  const Verdict zero = cluster_point_check(*alt, Vector::dense({0}), NatFilter::frechet(), kLine, at(100000));
  CHECK(zero.fails());
  CHECK(zero.reason.find("eps=1") != std::string::npos);
  CHECK(cluster_point_check(*square_spiked(), Vector::dense({0}), NatFilter::statistical(), kLine, relaxed()).holds());
}

TEST_CASE("cluster-implies-limit audit") {
  CHECK(cluster_implies_limit_audit(*square_spiked(), Vector::dense({0}), NatFilter::statistical(), kLine, relaxed())
            .holds());
  const Vector v = Vector::dense({1.5, -2});
  for (const char* f : {"frechet", "stat", "fstat(log1p)"})
    CHECK(cluster_implies_limit_audit(*constant_sequence(v), v, NatFilter::parse(f), SpaceModel::l1(2), at(10000))
              .holds());
  CHECK(cluster_implies_limit_audit(*scalar_sequence("1/n"), Vector::dense({0}), NatFilter::frechet(), kLine,
                                    at(100000))
            .holds());
  CHECK_THROWS_AS(cluster_implies_limit_audit(*scalar_sequence("(-1)^n"), Vector::dense({1}), NatFilter::frechet(),
                                              kLine, at(10000)),
                  AuditSkippedError);
}

TEST_CASE("composition with index maps") {
  const Sequence e = basis_sequence(100);
  const Sequence y = compose_with_index_map(e, IndexMap::affine(2, 0));
  for (Index n = 1; n <= 50; ++n) CHECK(y->at(n) == e->at(2 * n));
  CHECK(y->max_index() == 50);
  const Sequence sq = compose_with_index_map(parse_sequence("perturbed(1/n, squares, 1)", 1), IndexMap::square());
  for (Index n = 1; n <= 1000; ++n) CHECK(sq->at(n).coordinate(0) == 1.0);
  CHECK(f_limit_check(*sq, Vector::dense({1}), NatFilter::frechet(), kLine, at(100000)).holds());
  const Sequence same = compose_with_index_map(scalar_sequence("sin(n)"), IndexMap::identity());
  CHECK(f_cauchy_check(*same, NatFilter::frechet(), kLine, at(10000)).outcome ==
        f_cauchy_check(*scalar_sequence("sin(n)"), NatFilter::frechet(), kLine, at(10000)).outcome);
}

TEST_CASE("composition identity suite") {
  const char* triples[][3] = {
      {"scalar(1/n)", "affine(2,0)", "frechet"},
      {"scalar((-1)^n)", "affine(2,0)", "frechet"},
      {"scalar((-1)^n)", "affine(2,1)", "stat"},
      {"perturbed(1/n,cubes,1)", "square", "frechet"},
      {"perturbed(1/n,powers(2),1)", "affine(1,0)", "stat"},
      {"scalar((-1)^n)", "const(3)", "frechet"},
      {"scalar(1/n^2)", "affine(3,0)", "base(ap(1,2),ap(1,4))"},
      {"scalar(sin(n))", "explicit(1,2,3)", "subseq(affine(2,0))"},
  };
  for (const auto& t : triples) {
    CAPTURE(t[0]);
    CAPTURE(t[1]);
    CAPTURE(t[2]);
    const Sequence x = parse_sequence(t[0], 1);
    const IndexMap g = IndexMap::parse(t[1]);
    const NatFilter f = NatFilter::parse(t[2]);
    const Verdict a = f_cauchy_check(*compose_with_index_map(x, g), f, kLine, at(100000));
    const Verdict b = f_cauchy_check(*x, image_filter(g, f), kLine, at(100000));
    CHECK(a.outcome == b.outcome);
    CHECK(a.diagnostics["checks"].size() == b.diagnostics["checks"].size());
  }
}

TEST_CASE("cesaro transform") {
  const Sequence y = cesaro(scalar_sequence("(-1)^n"));
  for (Index n = 1; n <= 200; ++n) CHECK(y->at(n).coordinate(0) == doctest::Approx(-double(n % 2) / double(n)));
  CHECK(f_limit_check(*y, Vector::dense({0}), NatFilter::frechet(), kLine, at(100000)).holds());
  const Vector c = Vector::dense({2.5, -1});
  const Sequence cc = cesaro(constant_sequence(c));
  for (Index n = 1; n <= 100; ++n) {
    CHECK(cc->at(n).coordinate(0) == doctest::Approx(2.5));
    CHECK(cc->at(n).coordinate(1) == doctest::Approx(-1));
  }
  const Sequence cb = cesaro(basis_sequence(50));
  for (Index n = 1; n <= 50; ++n) CHECK(distance_linf(cb->at(n), Vector::cesaro_basis(50, n)) <= 1e-15);
}

TEST_CASE("sparse pointwise limits") {
  const Sequence dec = function_sequence("k1/n", [](Index n) { return Vector::keyed({{"k1", 1.0 / double(n)}}); });
  const SparseLimit a = sparse_pointwise_limit(*dec, NatFilter::frechet(), {}, at(100000));
  CHECK(a.verdict.holds());
  CHECK(a.limit.support().empty());
  CHECK(a.inspected_support == std::vector<std::string>{"k1"});
  const NatSet sq = NatSet::parse("squares");
  const Sequence sw = function_sequence("a on squares, b elsewhere", [sq](Index n) {
    return Vector::keyed({{sq.contains(n) ? "a" : "b", 1.0}});
  });
  const SparseLimit b = sparse_pointwise_limit(*sw, NatFilter::statistical(), {}, relaxed());
  CHECK(b.verdict.holds());
  CHECK(b.limit.support() == std::vector<std::string>{"b"});
  CHECK(b.support_closed);
  const Vector v = Vector::keyed({{"p", 0.5}, {"q", -2}});
  const SparseLimit c = sparse_pointwise_limit(*constant_sequence(v), NatFilter::frechet(), {}, at(1000));
  CHECK(c.limit == v);
}

TEST_CASE("property: limit uniqueness at tolerance, and limits are cluster points") {
  testing::Rng rng(5101);
  int both = 0;
  for (int c = 0; c < testing::kCases; ++c) {
    const double a = std::round(rng.uniform(-2, 2) * 1000) / 1000;
    const double amp = rng.uniform(0, 0.01);
    const std::string expr = filterlab::dsl::format_number(a) + "+" + filterlab::dsl::format_number(amp) + "*sin(n)";
    const Sequence x = scalar_function_sequence(expr, [a, amp](Index n) { return a + amp * std::sin(double(n)); });
    CheckOptions o = at(2000);
    o.eps_grid = {1, 0.1, 0.01 + rng.uniform(0, 0.02)};
    const double b = a + rng.uniform(-0.05, 0.05);
    const NatFilter f = rng.coin() ? NatFilter::frechet() : NatFilter::statistical();
    const Verdict va = f_limit_check(*x, Vector::dense({a}), f, kLine, o);
    const Verdict vb = f_limit_check(*x, Vector::dense({b}), f, kLine, o);
    if (va.holds() && vb.holds()) {
      ++both;
      REQUIRE(std::fabs(a - b) <= 2 * o.eps_grid.back());
    }
    if (va.holds()) REQUIRE(cluster_point_check(*x, Vector::dense({a}), f, kLine, o).holds());
    if (vb.holds()) REQUIRE(cluster_point_check(*x, Vector::dense({b}), f, kLine, o).holds());
  }
  CHECK(both > 100);
}

TEST_CASE("property: Cauchy transfers from frechet to the statistical filter") {
  testing::Rng rng(5102);
  for (int c = 0; c < testing::kCases; ++c) {
    const double a = rng.uniform(-1, 1), amp = rng.uniform(-1, 1), p = rng.uniform(0.2, 2.5);
    const bool oscillate = rng.coin(0.3);
    const Sequence x = scalar_function_sequence("case", [=](Index n) {
      const double v = a + amp * std::pow(double(n), -p);
      return oscillate ? v + 0.5 * ((n % 2) ? 1 : -1) : v;
    });
    CheckOptions o = at(2000);
    o.eps_grid = {1, 0.1, 0.01};
    const Verdict fr = f_cauchy_check(*x, NatFilter::frechet(), kLine, o);
    if (fr.holds()) {
      const Verdict st = f_cauchy_check(*x, NatFilter::statistical(), kLine, o);
      REQUIRE_FALSE(st.fails());
    }
  }
}

TEST_CASE("property: Cesaro means keep the bound") {
  testing::Rng rng(5103);
  const auto idx = [] {
    std::vector<Index> v;
    for (Index n = 1; n <= 3000; n += 7) v.push_back(n);
    return v;
  }();
  for (int c = 0; c < testing::kCases; ++c) {
    const double bound = rng.uniform(0.1, 5);
    const double w = rng.uniform(0.1, 3), ph = rng.uniform(0, 6);
    const Sequence x = with_bound(
        scalar_function_sequence("case", [=](Index n) { return bound * std::sin(w * double(n) + ph); }), bound);
    REQUIRE(verify_bound(*x, kLine, idx).holds());
    const auto vals = cesaro(x)->functional_values(Vector::dense({1.0}), idx);
    for (double v : vals) REQUIRE(std::fabs(v) <= bound + 1e-9);
    REQUIRE(verify_bound(*cesaro(x), kLine, idx).holds());
  }
}

TEST_CASE("sequence parsing and bounds") {
  CHECK(parse_sequence("scalar(1/n)", 1)->at(4).coordinate(0) == 0.25);
  CHECK(parse_sequence("basis_seq", 10)->max_index() == 10);
  CHECK(parse_sequence("cesaro_basis_seq", 10)->at(2) == Vector::cesaro_basis(10, 2));
  CHECK(verify_bound(*with_bound(scalar_sequence("2*sin(n)"), 1), kLine, {1, 2, 3, 4, 5}).fails());
  CHECK(verify_bound(*scalar_sequence("sin(n)"), kLine, {1, 2}).inconclusive());
  CHECK_THROWS_AS(parse_sequence("wiggle(3)", 1), ParseError);
}
