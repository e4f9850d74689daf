#pragma once

#include "seedaug/kernels/vector_kernels.hpp"

namespace seedaug::kernels::detail {

#if defined(SEEDAUG_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(SEEDAUG_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace seedaug::kernels::detail
