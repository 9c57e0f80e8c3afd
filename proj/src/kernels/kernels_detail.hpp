#pragma once

#include <cstddef>

#if defined(_MSC_VER)
#define FILTERLAB_RESTRICT __restrict
#else
#define FILTERLAB_RESTRICT __restrict__
#endif

namespace filterlab::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept;
double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) noexcept;
double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) noexcept;
double sum_abs_scalar(const double* a, std::size_t n) noexcept;
double max_abs_scalar(const double* a, std::size_t n) noexcept;
void axpy_scalar(double alpha, const double* FILTERLAB_RESTRICT x, double* FILTERLAB_RESTRICT y,
                 std::size_t n) noexcept;
void abs_diff_scalar_scalar(const double* FILTERLAB_RESTRICT x, double c,
                            double* FILTERLAB_RESTRICT out, std::size_t n) noexcept;
void minmax_scalar(const double* x, std::size_t n, double* lo, double* hi) noexcept;
std::size_t count_above_scalar(const double* x, double threshold, std::size_t n) noexcept;

#if defined(FILTERLAB_HAS_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n) noexcept;
double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n) noexcept;
double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) noexcept;
double sum_abs_avx2(const double* a, std::size_t n) noexcept;
double max_abs_avx2(const double* a, std::size_t n) noexcept;
void axpy_avx2(double alpha, const double* FILTERLAB_RESTRICT x, double* FILTERLAB_RESTRICT y,
               std::size_t n) noexcept;
void abs_diff_scalar_avx2(const double* FILTERLAB_RESTRICT x, double c,
                          double* FILTERLAB_RESTRICT out, std::size_t n) noexcept;
void minmax_avx2(const double* x, std::size_t n, double* lo, double* hi) noexcept;
std::size_t count_above_avx2(const double* x, double threshold, std::size_t n) noexcept;
#endif

}  // namespace filterlab::kernels::detail
