#pragma once

// Data-parallel reductions used by the grid and quadrature paths.
//
// Every kernel has a scalar reference implementation. Vector variants
// (AVX2 on x86-64, NEON on aarch64) are picked at runtime; setting the
// environment variable TNUM_SIMD=scalar forces the reference path.
//
// displacement_pairing and max_abs are bit-identical across variants; the
// summation kernels agree to within a few ulps of sum |x_i|.

#include <cstddef>
#include <span>

namespace tnum::simd {

/// Coordinate-major batch of points: coords[k * count + i] is coordinate k of point i.
struct PointBatch {
  std::span<const double> coords;
  std::size_t count = 0;
  std::size_t dim = 0;
};

struct KernelTable {
  const char* name;
  /// out[i] = shift + sum_k a[k] * (to_k[i] - from_k[i])
  void (*displacement_pairing)(std::span<const double> a, PointBatch from, PointBatch to,
                               double shift, std::span<double> out);
  /// Compensated sum.
  double (*sum)(std::span<const double> x);
  /// Compensated sum of w[i] * x[i].
  double (*weighted_sum)(std::span<const double> x, std::span<const double> w);
  /// max |x[i]|, 0 for empty input.
  double (*max_abs)(std::span<const double> x);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// The table selected for this process (cached on first use).
const KernelTable& active();

}  // namespace tnum::simd
