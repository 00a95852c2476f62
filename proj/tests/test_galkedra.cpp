#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tnum/errors.hpp"
#include "tnum/galkedra.hpp"

using namespace tnum;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
}

TEST_CASE("the cocycle vanishes when g is affine") {
  const auto a = CohomologyClass::integral({1, 0});
  const LiftedMap g = maps::shear(2, {0.3, 0.1});
  const LiftedMap h = maps::sin_shear(0.2, {0.1, 0.7});
  for (double t : {0.0, 0.3, 0.77}) CHECK(std::abs(gal_kedra(a, g, h, TorusPoint({t, 1 - t}))) < 1e-14);
}

TEST_CASE("closed form against a hand computation") {
  // g = sin shear, h = rotation by (0, w): G = eps (sin 2pi(y + w) - sin 2pi y).
  const auto a = CohomologyClass::integral({1, 0});
  const double eps = 0.2, w = 0.15, y = 0.4;
  const double expected = eps * (std::sin(2 * std::numbers::pi * (y + w)) - std::sin(2 * std::numbers::pi * y));
  const double got = gal_kedra(a, maps::sin_shear(eps), maps::rotation({0.0, w}), TorusPoint({0.9, y}));
  CHECK(got == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("quadrature agrees with the closed form") {
  const auto a = CohomologyClass::real({0.5, -1.25});
  TrigPolynomial c = TrigPolynomial::one_dim(0.1, {{{1}, 0.2, 0.1}});
  const LiftedMap g = maps::skew(0.3, c);
  const LiftedMap h = maps::sin_shear(0.1, {0.2, 0.6});
  const TorusPoint x({0.35, 0.8});
  const double closed = gal_kedra(a, g, h, x);
  CHECK(std::abs(gal_kedra_quadrature(a, g, h, x, 10000) - closed) < 1e-6);
  auto ev = evaluate_gal_kedra(a, g, h, x, CocycleMethod::Quadrature, 2000);
  CHECK(ev.method == CocycleMethod::Quadrature);
  CHECK(ev.segments == 2000);
  CHECK(std::abs(ev.value - closed) < 1e-5);
}

TEST_CASE("pullback of the cocycle is minus the coboundary of rho") {
  const auto a = CohomologyClass::integral({1});
  BundleAutomorphism g{maps::arnold(0.2, 0.8), 2.0};
  BundleAutomorphism h{maps::arnold(kGolden, 0.4), -1.0};
  for (double t : {0.0, 0.1, 0.5, 0.9}) CHECK(coboundary_residual(a, g, h, TorusPoint({t})) <= 1e-12);
}

TEST_CASE("cocycle condition on a triple") {
  const auto a = CohomologyClass::integral({1, 1});
  CHECK(cocycle_residual(a, maps::sin_shear(0.2, {0.1, 0.2}), maps::rotation({0.3, 0.5}),
                         maps::sin_shear(-0.1, {0.4, 0.0}), TorusPoint({0.2, 0.6})) <= 1e-12);
}

TEST_CASE("residual suite is seeded and tight") {
  auto r1 = gal_kedra_residual_suite(200, 9);
  auto r2 = gal_kedra_residual_suite(200, 9);
  CHECK(r1.draws == 200);
  CHECK(r1.max_coboundary <= 1e-12);
  CHECK(r1.max_cocycle <= 1e-12);
  CHECK(r1.coboundary == r2.coboundary);
  CHECK(r1.cocycle == r2.cocycle);
}

TEST_CASE("mean translation number splits on measure-preserving subgroups") {
  SUBCASE("rotations of T^2 under Lebesgue") {
    const auto a = CohomologyClass::real({1.0, std::sqrt(2.0)});
    std::vector<BundleAutomorphism> gens = {{maps::rotation({0.3, 0.1}), 0.5},
                                            {maps::rotation({kGolden, 0.7}), -0.25}};
    auto r = splitting_check(a, gens, InvariantMeasure::lebesgue());
    CHECK(r.splitting_residual <= 1e-9);
    CHECK(r.descent_residual <= 1e-9);
    CHECK(r.pairs == 100);
  }
  SUBCASE("area-preserving shears under Lebesgue") {
    const auto a = CohomologyClass::integral({1, 0});
    std::vector<BundleAutomorphism> gens = {{maps::sin_shear(0.2, {0.1, 0.3}), 0.0},
                                            {maps::sin_shear(-0.1, {0.25, kGolden}), 1.0}};
    auto r = splitting_check(a, gens, InvariantMeasure::lebesgue());
    CHECK(r.splitting_residual <= 1e-6);
    CHECK(r.max_invariance_residual <= 1e-6);
  }
  SUBCASE("rational rotations on a common Dirac orbit") {
    const auto a = CohomologyClass::integral({1});
    std::vector<BundleAutomorphism> gens = {{maps::rotation({0.25}), 0.0}, {maps::rotation({0.5}), 1.0}};
    auto r = splitting_check(a, gens, InvariantMeasure::dirac_orbit(TorusPoint({0.1}), 4));
    CHECK(r.splitting_residual <= 1e-12);
    CHECK(r.generator_values[0] == doctest::Approx(0.25));
    CHECK(r.generator_values[1] == doctest::Approx(1.5));
  }
}

TEST_CASE("splitting check refuses non-invariant measures") {
  const auto a = CohomologyClass::integral({1});
  std::vector<BundleAutomorphism> gens = {{maps::arnold(0.1, 0.9), 0.0}};
  CHECK_THROWS_AS(splitting_check(a, gens, InvariantMeasure::lebesgue()), PreconditionError);
}

TEST_CASE("rho is a quasimorphism with bounded defect") {
  const auto a = CohomologyClass::integral({1});
  std::vector<BundleAutomorphism> gens = {{maps::arnold(0.1, 0.7), 0.0}, {maps::arnold(0.4, -0.5), 1.0}};
  const double d = quasimorphism_defect(a, gens, TorusPoint({0.3}), 200, 4);
  CHECK(d < 2.0);
  CHECK(d >= 0.0);
}
