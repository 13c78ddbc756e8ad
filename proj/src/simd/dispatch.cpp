#include <cstdlib>
#include <string_view>

#include "textfx/simd/kernels.hpp"

namespace textfx::simd {

#ifndef TEXTFX_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

#ifndef TEXTFX_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("TEXTFX_SIMD"); env && std::string_view(env) == "scalar")
    return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  if (const KernelTable* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace textfx::simd
