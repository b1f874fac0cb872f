#include "uavsec/kernels.hpp"

// Fallback when the toolchain cannot target AVX2.

namespace uavsec::kernels {
const Backend* avx2_backend() { return nullptr; }
} // namespace uavsec::kernels
