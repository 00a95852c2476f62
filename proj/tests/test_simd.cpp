#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "tnum/simd.hpp"

using namespace tnum::simd;

namespace {

std::vector<const KernelTable*> vector_variants() {
  std::vector<const KernelTable*> out;
  if (auto* t = avx2_kernels()) out.push_back(t);
  if (auto* t = neon_kernels()) out.push_back(t);
  return out;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

}  // namespace

TEST_CASE("active kernel table is one of the compiled variants") {
  const KernelTable& k = active();
  CHECK(k.name != nullptr);
  bool known = &k == &scalar_kernels();
  for (auto* t : vector_variants()) known = known || &k == t;
  CHECK(known);
}

TEST_CASE("displacement_pairing is bit-identical to the scalar reference") {
  std::mt19937_64 rng(2024);
  for (auto* variant : vector_variants()) {
    INFO(variant->name);
    for (std::size_t dim : {1u, 2u, 3u}) {
      for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 1000u}) {
        auto a = random_values(rng, dim, 3.0);
        auto from = random_values(rng, dim * count, 1.0);
        auto to = random_values(rng, dim * count, 4.0);
        std::vector<double> ref(count), got(count);
        scalar_kernels().displacement_pairing(a, {from, count, dim}, {to, count, dim}, 0.25, ref);
        variant->displacement_pairing(a, {from, count, dim}, {to, count, dim}, 0.25, got);
        for (std::size_t i = 0; i < count; ++i) CHECK(same_bits(ref[i], got[i]));
      }
    }
  }
}

TEST_CASE("max_abs is bit-identical and sums agree within the compensated bound") {
  std::mt19937_64 rng(77);
  for (auto* variant : vector_variants()) {
    INFO(variant->name);
    for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 9u, 31u, 4096u, 100003u}) {
      auto x = random_values(rng, n, 1e3);
      auto w = random_values(rng, n, 1.0);
      CHECK(same_bits(scalar_kernels().max_abs(x), variant->max_abs(x)));
      double mag = 0.0, wmag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mag += std::abs(x[i]);
        wmag += std::abs(x[i] * w[i]);
      }
      CHECK(std::abs(scalar_kernels().sum(x) - variant->sum(x)) <= 8 * 2.3e-16 * mag + 1e-300);
      CHECK(std::abs(scalar_kernels().weighted_sum(x, w) - variant->weighted_sum(x, w)) <=
            8 * 2.3e-16 * wmag + 1e-300);
    }
  }
}

TEST_CASE("compensated sum recovers cancellation the naive sum loses") {
  std::vector<double> x = {1e16, 1.0, -1e16, 1.0};
  CHECK(scalar_kernels().sum(x) == 2.0);
  for (auto* variant : vector_variants()) CHECK(variant->sum(x) == 2.0);
}

TEST_CASE("pairing rejects mismatched shapes") {
  std::vector<double> a = {1.0, 2.0};
  std::vector<double> from(6), to(6), out(3);
  CHECK_THROWS(scalar_kernels().displacement_pairing(a, {from, 3, 2}, {to, 2, 3}, 0.0, out));
}
