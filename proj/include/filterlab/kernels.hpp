#pragma once
// Data-parallel inner loops used by the space models and the sequence
// checks. Every kernel has a scalar reference implementation; an AVX2
// variant is compiled on x86-64 and selected at runtime when the CPU
// supports AVX2+FMA. Setting FILTERLAB_SIMD=scalar in the environment (or
// calling force_backend) pins the reference path.
//
// Reductions over sums (dot, sum_abs_diff) may differ between backends by
// reassociation error only; max/min reductions are bit-identical.

#include <cstddef>
#include <span>
#include <string_view>

namespace filterlab::kernels {

struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n) noexcept;
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n) noexcept;
  double (*sum_abs)(const double* a, std::size_t n) noexcept;
  double (*max_abs)(const double* a, std::size_t n) noexcept;
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
  // out[i] = |x[i] - c|
  void (*abs_diff_scalar)(const double* x, double c, double* out, std::size_t n) noexcept;
  // lo = min(lo, x[i]), hi = max(hi, x[i]) over i
  void (*minmax)(const double* x, std::size_t n, double* lo, double* hi) noexcept;
  // number of i with x[i] > threshold
  std::size_t (*count_above)(const double* x, double threshold, std::size_t n) noexcept;
};

enum class Backend { automatic, scalar, avx2 };

const KernelTable& scalar_table() noexcept;

/// The AVX2 table, or nullptr when it was not compiled in or the CPU lacks
/// AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Currently selected table.
const KernelTable& active() noexcept;

/// Pins a backend for the whole process. Requesting avx2 on a machine without
/// it falls back to scalar; returns the table actually selected.
const KernelTable& force_backend(Backend backend) noexcept;

std::string_view backend_name() noexcept;

// Span conveniences over the active table. Lengths must match; callers
// check dimensions before calling.
inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active().dot(a.data(), b.data(), a.size());
}
inline double sum_abs_diff(std::span<const double> a, std::span<const double> b) noexcept {
  return active().sum_abs_diff(a.data(), b.data(), a.size());
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) noexcept {
  return active().max_abs_diff(a.data(), b.data(), a.size());
}
inline double sum_abs(std::span<const double> a) noexcept { return active().sum_abs(a.data(), a.size()); }
inline double max_abs(std::span<const double> a) noexcept { return active().max_abs(a.data(), a.size()); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void abs_diff_scalar(std::span<const double> x, double c, std::span<double> out) noexcept {
  active().abs_diff_scalar(x.data(), c, out.data(), x.size());
}
inline void minmax(std::span<const double> x, double& lo, double& hi) noexcept {
  active().minmax(x.data(), x.size(), &lo, &hi);
}
inline std::size_t count_above(std::span<const double> x, double threshold) noexcept {
  return active().count_above(x.data(), threshold, x.size());
}

}  // namespace filterlab::kernels
