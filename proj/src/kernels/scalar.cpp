// Reference kernels. These define the semantics the SIMD variants are
// tested against.

#include <algorithm>
#include <cmath>

#include "kernels_detail.hpp"

namespace filterlab::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double sum_abs_scalar(const double* a, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double max_abs_scalar(const double* a, std::size_t n) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void axpy_scalar(double alpha, const double* FILTERLAB_RESTRICT x, double* FILTERLAB_RESTRICT y,
                 std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void abs_diff_scalar_scalar(const double* FILTERLAB_RESTRICT x, double c,
                            double* FILTERLAB_RESTRICT out, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(x[i] - c);
}

void minmax_scalar(const double* x, std::size_t n, double* lo, double* hi) noexcept {
  double l = *lo, h = *hi;
  for (std::size_t i = 0; i < n; ++i) {
    l = std::min(l, x[i]);
    h = std::max(h, x[i]);
  }
  *lo = l;
  *hi = h;
}

std::size_t count_above_scalar(const double* x, double threshold, std::size_t n) noexcept {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] > threshold ? 1 : 0;
  return c;
}

}  // namespace filterlab::kernels::detail
