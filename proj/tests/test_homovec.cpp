#include <doctest.h>

#include <cmath>

#include "tnum/errors.hpp"
#include "tnum/homovec.hpp"

using namespace tnum;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
}

TEST_CASE("linear isotopy by 1/2 on the circle") {
  const auto a = CohomologyClass::integral({1});
  const Isotopy iso = isotopies::linear({0.5});
  const auto h = homological_translation(a, iso, TorusPoint({0.1}), 1 << 12);
  CHECK(h.value == doctest::Approx(0.5).epsilon(1e-14));
  LocalOptions o;
  o.detect_periodic = false;
  const auto r = local_translation_number(a, iso.bundle_lift(), TorusPoint({0.1}), o);
  CHECK(std::abs(h.value - r.value) <= 1e-12);
}

TEST_CASE("delta_phi pairs the endpoints of the sampled arc") {
  const auto a = CohomologyClass::integral({2, -1});
  const Isotopy iso = isotopies::sin_shear(0.1, {0.3, 0.2});
  Vec x = {0.2, 0.4};
  auto path = arc(iso, x, 8);
  CHECK(path.size() == 9);
  Vec end = iso.terminal()(x);
  const double expected = 2 * (end[0] - x[0]) - (end[1] - x[1]);
  CHECK(delta_phi(a, path) == doctest::Approx(expected).epsilon(1e-14));
  // Arc starts at the identity.
  CHECK(path.front() == x);
}

TEST_CASE("homological translation equals the local translation number") {
  const auto a = CohomologyClass::integral({1, 1});
  TrigPolynomial c = TrigPolynomial::one_dim(0.3, {{{1}, 0.1, 0.0}});
  std::vector<Isotopy> isos = {isotopies::linear({kGolden, 0.2}), isotopies::skew(kGolden, c),
                               isotopies::sin_shear(0.15, {0.2, kGolden})};
  for (const auto& iso : isos) {
    INFO(iso.name());
    for (double t : {0.0, 0.37}) {
      const TorusPoint x({t, 0.5 * t});
      const auto h = homological_translation(a, iso, x, 1 << 14, 1e-9);
      LocalOptions o;
      o.max_iterations = 1 << 14;
      o.detect_periodic = false;
      const auto r = local_translation_number(a, iso.bundle_lift(), x, o);
      CHECK(h.iterations == r.iterations);
      CHECK(std::abs(h.value - r.value) <= 1e-9);
    }
  }
}

TEST_CASE("mean homological translation equals the mean translation number") {
  const auto a = CohomologyClass::integral({0, 1});
  TrigPolynomial c = TrigPolynomial::one_dim(0.3, {{{1}, 0.1, 0.0}});
  const Isotopy iso = isotopies::skew(kGolden, c);
  const auto h = mean_homological_translation(a, iso, InvariantMeasure::lebesgue(), 128);
  MeanOptions o;
  o.quadrature_points = 128;
  const auto r = mean_translation_number(a, iso.bundle_lift(), InvariantMeasure::lebesgue(), o);
  CHECK(std::abs(h.value - r.value) <= 1e-9);
  CHECK(std::abs(h.value - 0.3) <= 1e-9);
}

TEST_CASE("isotopies must start at the identity with M = I") {
  CHECK_THROWS_AS(Isotopy(2, [](double, std::span<const double> x) { return Vec(x.begin(), x.end()); },
                          maps::shear(1), "bad"),
                  ValidationError);
}
