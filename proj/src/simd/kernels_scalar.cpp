#include "tnum/errors.hpp"
#include "tnum/simd.hpp"

#include <cmath>

namespace tnum::simd {

namespace {

void check_batches(std::span<const double> a, const PointBatch& from, const PointBatch& to,
                   std::span<double> out) {
  require_same_dim(a.size(), from.dim, "displacement_pairing (from)");
  require_same_dim(a.size(), to.dim, "displacement_pairing (to)");
  require_same_dim(from.count, to.count, "displacement_pairing (count)");
  require_same_dim(from.count, out.size(), "displacement_pairing (out)");
  require_same_dim(from.count * from.dim, from.coords.size(), "displacement_pairing (from coords)");
  require_same_dim(to.count * to.dim, to.coords.size(), "displacement_pairing (to coords)");
}

void pairing_scalar(std::span<const double> a, PointBatch from, PointBatch to, double shift,
                    std::span<double> out) {
  check_batches(a, from, to, out);
  const std::size_t n = from.count;
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double* f = from.coords.data() + k * n;
    const double* t = to.coords.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) out[i] += a[k] * (t[i] - f[i]);
  }
  for (std::size_t i = 0; i < n; ++i) out[i] += shift;
}

// Neumaier's variant of Kahan summation.
double sum_scalar(std::span<const double> x) {
  double s = 0.0, c = 0.0;
  for (double v : x) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
    else c += (v - t) + s;
    s = t;
  }
  return s + c;
}

double weighted_sum_scalar(std::span<const double> x, std::span<const double> w) {
  require_same_dim(x.size(), w.size(), "weighted_sum");
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = w[i] * x[i];
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
    else c += (v - t) + s;
    s = t;
  }
  return s + c;
}

double max_abs_scalar(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    const double a = std::abs(v);
    if (a > m) m = a;
  }
  return m;
}

}  // namespace

namespace detail {
void check_pairing_args(std::span<const double> a, const PointBatch& from, const PointBatch& to,
                        std::span<double> out) {
  check_batches(a, from, to, out);
}
}  // namespace detail

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", pairing_scalar, sum_scalar, weighted_sum_scalar,
                                 max_abs_scalar};
  return table;
}

}  // namespace tnum::simd
