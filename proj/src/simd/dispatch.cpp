#include <cstdlib>
#include <string_view>

#include "tnum/simd.hpp"

namespace tnum::simd {

#if defined(TNUM_HAVE_AVX2)
const KernelTable* avx2_kernels_impl();
#endif
#if defined(TNUM_HAVE_NEON)
const KernelTable* neon_kernels_impl();
#endif

const KernelTable* avx2_kernels() {
#if defined(TNUM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return avx2_kernels_impl();
#endif
  return nullptr;
}

const KernelTable* neon_kernels() {
#if defined(TNUM_HAVE_NEON)
  return neon_kernels_impl();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("TNUM_SIMD");
  const std::string_view wanted = env ? env : "";
  if (wanted == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels(); t && (wanted.empty() || wanted == "avx2")) return *t;
  if (const KernelTable* t = neon_kernels(); t && (wanted.empty() || wanted == "neon")) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace tnum::simd
