#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace rax::simd {
namespace {

bool cpu_has_avx2() {
#if defined(RAX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* resolve_default() {
  if (const char* env = std::getenv("RAX_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return &detail::kScalarTable;
  }
  if (const KernelTable* fast = avx2_kernels()) return fast;
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{resolve_default()};
  return slot;
}

}  // namespace

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(RAX_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_relaxed); }

bool select_kernels(std::string_view name) {
  if (name == "scalar") {
    active_slot().store(&detail::kScalarTable);
    return true;
  }
  if (name == "avx2") {
    if (const KernelTable* fast = avx2_kernels()) {
      active_slot().store(fast);
      return true;
    }
  }
  return false;
}

}  // namespace rax::simd
