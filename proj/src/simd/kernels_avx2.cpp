// Built with -mavx2 -mno-fma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "tnum/simd.hpp"

namespace tnum::simd {

namespace detail {
void check_pairing_args(std::span<const double> a, const PointBatch& from, const PointBatch& to,
                        std::span<double> out);
}

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void pairing_avx2(std::span<const double> a, PointBatch from, PointBatch to, double shift,
                  std::span<double> out) {
  detail::check_pairing_args(a, from, to, out);
  const std::size_t n = from.count;
  const std::size_t dim = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d f = _mm256_loadu_pd(from.coords.data() + k * n + i);
      const __m256d t = _mm256_loadu_pd(to.coords.data() + k * n + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(a[k]), _mm256_sub_pd(t, f)));
    }
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(acc, _mm256_set1_pd(shift)));
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += a[k] * (to.coords[k * n + i] - from.coords[k * n + i]);
    out[i] = acc + shift;
  }
}

struct Neumaier4 {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d v) {
    const __m256d t = _mm256_add_pd(s, v);
    const __m256d big_s = _mm256_cmp_pd(abs_pd(s), abs_pd(v), _CMP_GE_OQ);
    const __m256d when_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
    const __m256d when_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(when_v, when_s, big_s));
    s = t;
  }

  // Folds the four lanes (and a scalar tail) into one compensated total.
  double finish(double tail_s, double tail_c) const {
    alignas(32) double ls[4], lc[4];
    _mm256_store_pd(ls, s);
    _mm256_store_pd(lc, c);
    double total = tail_s, comp = tail_c;
    for (int l = 0; l < 4; ++l) {
      const double t = total + ls[l];
      if (std::abs(total) >= std::abs(ls[l])) comp += (total - t) + ls[l];
      else comp += (ls[l] - t) + total;
      total = t;
      comp += lc[l];
    }
    return total + comp;
  }
};

void neumaier_step(double& s, double& c, double v) {
  const double t = s + v;
  if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
  else c += (v - t) + s;
  s = t;
}

double sum_avx2(std::span<const double> x) {
  Neumaier4 acc;
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) acc.add(_mm256_loadu_pd(x.data() + i));
  double s = 0.0, c = 0.0;
  for (; i < x.size(); ++i) neumaier_step(s, c, x[i]);
  return acc.finish(s, c);
}

double weighted_sum_avx2(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) return scalar_kernels().weighted_sum(x, w);  // reports the mismatch
  Neumaier4 acc;
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4)
    acc.add(_mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(x.data() + i)));
  double s = 0.0, c = 0.0;
  for (; i < x.size(); ++i) neumaier_step(s, c, w[i] * x[i]);
  return acc.finish(s, c);
}

double max_abs_avx2(std::span<const double> x) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  // max_pd returns its second operand when either is NaN, which skips NaNs
  // the same way the scalar comparison does.
  for (; i + 4 <= x.size(); i += 4) m = _mm256_max_pd(abs_pd(_mm256_loadu_pd(x.data() + i)), m);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double best = 0.0;
  for (double v : lanes) if (v > best) best = v;
  for (; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a > best) best = a;
  }
  return best;
}

}  // namespace

const KernelTable* avx2_kernels_impl() {
  static const KernelTable table{"avx2", pairing_avx2, sum_avx2, weighted_sum_avx2, max_abs_avx2};
  return &table;
}

}  // namespace tnum::simd
