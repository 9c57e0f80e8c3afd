#include <atomic>
#include <cstdlib>
#include <cstring>

#include "filterlab/kernels.hpp"
#include "kernels_detail.hpp"

namespace filterlab::kernels {

namespace {

const KernelTable kScalar{
    "scalar",
    detail::dot_scalar,
    detail::sum_abs_diff_scalar,
    detail::max_abs_diff_scalar,
    detail::sum_abs_scalar,
    detail::max_abs_scalar,
    detail::axpy_scalar,
    detail::abs_diff_scalar_scalar,
    detail::minmax_scalar,
    detail::count_above_scalar,
};

#if defined(FILTERLAB_HAS_AVX2)
const KernelTable kAvx2{
    "avx2",
    detail::dot_avx2,
    detail::sum_abs_diff_avx2,
    detail::max_abs_diff_avx2,
    detail::sum_abs_avx2,
    detail::max_abs_avx2,
    detail::axpy_avx2,
    detail::abs_diff_scalar_avx2,
    detail::minmax_avx2,
    detail::count_above_avx2,
};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* select_default() noexcept {
  const char* env = std::getenv("FILTERLAB_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> table{select_default()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(FILTERLAB_HAS_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_relaxed); }

const KernelTable& force_backend(Backend backend) noexcept {
  const KernelTable* t = nullptr;
  switch (backend) {
    case Backend::automatic: t = select_default(); break;
    case Backend::scalar: t = &kScalar; break;
    case Backend::avx2: t = avx2_table() != nullptr ? avx2_table() : &kScalar; break;
  }
  slot().store(t, std::memory_order_relaxed);
  return *t;
}

std::string_view backend_name() noexcept { return active().name; }

}  // namespace filterlab::kernels
