#pragma once

#include "rax/simd.hpp"

namespace rax::simd::detail {

extern const KernelTable kScalarTable;

#if defined(RAX_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace rax::simd::detail
