#include <cmath>
#include <vector>

#include "doctest.h"
#include "filterlab/kernels.hpp"
#include "support.hpp"

using namespace filterlab;
using testing::Rng;

namespace {

bool close(double a, double b, double scale) { return std::fabs(a - b) <= 1e-12 * (1.0 + scale); }

struct Naive {
  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(s);
  }
};

void check_table(const kernels::KernelTable& t, std::uint64_t seed) {
  Rng rng(seed);
  for (int c = 0; c < testing::kCases; ++c) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(0, 67));
    const std::size_t off = static_cast<std::size_t>(rng.integer(0, 3));
    std::vector<double> abuf = rng.values(n + off, -5, 5), bbuf = rng.values(n + off, -5, 5);
    const double* a = abuf.data() + off;
    const double* b = bbuf.data() + off;
    std::vector<double> av(a, a + n), bv(b, b + n);

    double scale = 0, sad = 0, mad = 0, sa = 0, ma = 0, lo = INFINITY, hi = -INFINITY;
    std::size_t above = 0;
    const double thr = rng.uniform(-2, 2);
    for (std::size_t i = 0; i < n; ++i) {
      scale += std::fabs(a[i] * b[i]);
      sad += std::fabs(a[i] - b[i]);
      mad = std::max(mad, std::fabs(a[i] - b[i]));
      sa += std::fabs(a[i]);
      ma = std::max(ma, std::fabs(a[i]));
      lo = std::min(lo, a[i]);
      hi = std::max(hi, a[i]);
      above += a[i] > thr ? 1 : 0;
    }
    REQUIRE(close(t.dot(a, b, n), Naive::dot(av, bv), scale));
    REQUIRE(close(t.sum_abs_diff(a, b, n), sad, sad));
    REQUIRE(t.max_abs_diff(a, b, n) == mad);
    REQUIRE(close(t.sum_abs(a, n), sa, sa));
    REQUIRE(t.max_abs(a, n) == ma);
    REQUIRE(t.count_above(a, thr, n) == above);
    double l = INFINITY, h = -INFINITY;
    t.minmax(a, n, &l, &h);
    REQUIRE(l == lo);
    REQUIRE(h == hi);

    const double alpha = rng.uniform(-3, 3);
    std::vector<double> y = bv, want = bv;
    t.axpy(alpha, a, y.data(), n);
    for (std::size_t i = 0; i < n; ++i) want[i] += alpha * a[i];
    REQUIRE(y == want);

    std::vector<double> out(n), ref(n);
    t.abs_diff_scalar(a, thr, out.data(), n);
    for (std::size_t i = 0; i < n; ++i) ref[i] = std::fabs(a[i] - thr);
    REQUIRE(out == ref);
  }
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") { check_table(kernels::scalar_table(), 101); }

TEST_CASE("avx2 kernels match the scalar reference") {
  const kernels::KernelTable* t = kernels::avx2_table();
  if (!t) {
    MESSAGE("AVX2 not available; skipped");
    return;
  }
  check_table(*t, 101);
  Rng rng(102);
  const auto& s = kernels::scalar_table();
  for (int c = 0; c < testing::kCases; ++c) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(0, 300));
    auto a = rng.values(n, -1e3, 1e3), b = rng.values(n, -1e3, 1e3);
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i) scale += std::fabs(a[i] * b[i]);
    CHECK(close(t->dot(a.data(), b.data(), n), s.dot(a.data(), b.data(), n), scale));
    CHECK(t->max_abs_diff(a.data(), b.data(), n) == s.max_abs_diff(a.data(), b.data(), n));
    CHECK(t->max_abs(a.data(), n) == s.max_abs(a.data(), n));
    CHECK(t->count_above(a.data(), 0.5, n) == s.count_above(a.data(), 0.5, n));
  }
}

TEST_CASE("backend can be pinned") {
  CHECK(std::string(kernels::force_backend(kernels::Backend::scalar).name) == "scalar");
  CHECK(kernels::backend_name() == "scalar");
  kernels::force_backend(kernels::Backend::automatic);
}
