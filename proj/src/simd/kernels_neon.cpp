// aarch64 only; NEON is part of the base ISA there.

#include <arm_neon.h>

#include <cmath>

#include "tnum/simd.hpp"

namespace tnum::simd {

namespace detail {
void check_pairing_args(std::span<const double> a, const PointBatch& from, const PointBatch& to,
                        std::span<double> out);
}

namespace {

void pairing_neon(std::span<const double> a, PointBatch from, PointBatch to, double shift,
                  std::span<double> out) {
  detail::check_pairing_args(a, from, to, out);
  const std::size_t n = from.count;
  const std::size_t dim = a.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const float64x2_t f = vld1q_f64(from.coords.data() + k * n + i);
      const float64x2_t t = vld1q_f64(to.coords.data() + k * n + i);
      // Separate multiply and add: no fused rounding, matches the scalar path.
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(a[k]), vsubq_f64(t, f)));
    }
    vst1q_f64(out.data() + i, vaddq_f64(acc, vdupq_n_f64(shift)));
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += a[k] * (to.coords[k * n + i] - from.coords[k * n + i]);
    out[i] = acc + shift;
  }
}

void neumaier_step(double& s, double& c, double v) {
  const double t = s + v;
  if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
  else c += (v - t) + s;
  s = t;
}

double fold(float64x2_t s, float64x2_t c, double ts, double tc) {
  double ls[2], lc[2];
  vst1q_f64(ls, s);
  vst1q_f64(lc, c);
  for (int l = 0; l < 2; ++l) {
    neumaier_step(ts, tc, ls[l]);
    tc += lc[l];
  }
  return ts + tc;
}

void add2(float64x2_t& s, float64x2_t& c, float64x2_t v) {
  const float64x2_t t = vaddq_f64(s, v);
  const uint64x2_t big_s = vcgeq_f64(vabsq_f64(s), vabsq_f64(v));
  const float64x2_t when_s = vaddq_f64(vsubq_f64(s, t), v);
  const float64x2_t when_v = vaddq_f64(vsubq_f64(v, t), s);
  c = vaddq_f64(c, vbslq_f64(big_s, when_s, when_v));
  s = t;
}

double sum_neon(std::span<const double> x) {
  float64x2_t s = vdupq_n_f64(0.0), c = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= x.size(); i += 2) add2(s, c, vld1q_f64(x.data() + i));
  double ts = 0.0, tc = 0.0;
  for (; i < x.size(); ++i) neumaier_step(ts, tc, x[i]);
  return fold(s, c, ts, tc);
}

double weighted_sum_neon(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) return scalar_kernels().weighted_sum(x, w);
  float64x2_t s = vdupq_n_f64(0.0), c = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= x.size(); i += 2)
    add2(s, c, vmulq_f64(vld1q_f64(w.data() + i), vld1q_f64(x.data() + i)));
  double ts = 0.0, tc = 0.0;
  for (; i < x.size(); ++i) neumaier_step(ts, tc, w[i] * x[i]);
  return fold(s, c, ts, tc);
}

double max_abs_neon(std::span<const double> x) {
  double best = 0.0;
  std::size_t i = 0;
  float64x2_t m = vdupq_n_f64(0.0);
  for (; i + 2 <= x.size(); i += 2) {
    const float64x2_t v = vabsq_f64(vld1q_f64(x.data() + i));
    // Keep m where v is not greater (also when v is NaN).
    m = vbslq_f64(vcgtq_f64(v, m), v, m);
  }
  double lanes[2];
  vst1q_f64(lanes, m);
  for (double v : lanes) if (v > best) best = v;
  for (; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a > best) best = a;
  }
  return best;
}

}  // namespace

const KernelTable* neon_kernels_impl() {
  static const KernelTable table{"neon", pairing_neon, sum_neon, weighted_sum_neon, max_abs_neon};
  return &table;
}

}  // namespace tnum::simd
