// AVX2 variants. Compiled with -mavx2 -mfma -ffp-contract=off; only
// reached through the dispatch table after a CPU feature check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_detail.hpp"

namespace filterlab::kernels::detail {

namespace {

constexpr std::size_t kLane = 4;

inline __m256d abs_pd(__m256d v) noexcept {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

inline double hsum(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) noexcept {
  alignas(32) double buf[kLane];
  _mm256_store_pd(buf, v);
  return std::max(std::max(buf[0], buf[1]), std::max(buf[2], buf[3]));
}

inline double hmin(__m256d v) noexcept {
  alignas(32) double buf[kLane];
  _mm256_store_pd(buf, v);
  return std::min(std::min(buf[0], buf[1]), std::min(buf[2], buf[3]));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLane <= n; i += 2 * kLane) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + kLane), _mm256_loadu_pd(b + i + kLane), acc1);
  }
  for (; i + kLane <= n; i += kLane)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane)
    acc = _mm256_add_pd(acc, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane)
    acc = _mm256_max_pd(acc, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double sum_abs_avx2(const double* a, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(a + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double max_abs_avx2(const double* a, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(a + i)));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void axpy_avx2(double alpha, const double* FILTERLAB_RESTRICT x, double* FILTERLAB_RESTRICT y,
               std::size_t n) noexcept {
  // mul + add (not fma) so results match the reference bit for bit
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void abs_diff_scalar_avx2(const double* FILTERLAB_RESTRICT x, double c,
                          double* FILTERLAB_RESTRICT out, std::size_t n) noexcept {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane)
    _mm256_storeu_pd(out + i, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vc)));
  for (; i < n; ++i) out[i] = std::fabs(x[i] - c);
}

void minmax_avx2(const double* x, std::size_t n, double* lo, double* hi) noexcept {
  __m256d vlo = _mm256_set1_pd(*lo);
  __m256d vhi = _mm256_set1_pd(*hi);
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane) {
    const __m256d v = _mm256_loadu_pd(x + i);
    vlo = _mm256_min_pd(vlo, v);
    vhi = _mm256_max_pd(vhi, v);
  }
  double l = hmin(vlo), h = hmax(vhi);
  for (; i < n; ++i) {
    l = std::min(l, x[i]);
    h = std::max(h, x[i]);
  }
  *lo = l;
  *hi = h;
}

std::size_t count_above_avx2(const double* x, double threshold, std::size_t n) noexcept {
  const __m256d vt = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + kLane <= n; i += kLane) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_GT_OQ));
    c += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i) c += x[i] > threshold ? 1 : 0;
  return c;
}

}  // namespace filterlab::kernels::detail
