#include <doctest.h>

#include <cmath>
#include <random>

#include "tnum/dynamics.hpp"
#include "tnum/errors.hpp"

using namespace tnum;

TEST_CASE("wrap_unit lands in [0,1) and reports the removed integer") {
  double removed = 0.0;
  CHECK(wrap_unit(2.25, &removed) == doctest::Approx(0.25));
  CHECK(removed == 2.0);
  CHECK(wrap_unit(-0.25, &removed) == doctest::Approx(0.75));
  CHECK(removed == -1.0);
  // -1e-18 rounds to 1.0 after adding 1; must still be < 1.
  const double w = wrap_unit(-1e-18, &removed);
  CHECK(w >= 0.0);
  CHECK(w < 1.0);
}

TEST_CASE("canonicalize is idempotent and preserves theta") {
  const auto a = CohomologyClass::integral({2, -1});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    BundlePoint p{{u(rng), u(rng)}, std::round(u(rng))};
    BundlePoint c = canonicalize(a, p);
    CHECK(theta(a, c) == doctest::Approx(theta(a, p)).epsilon(1e-12));
    BundlePoint cc = canonicalize(a, c);
    CHECK(cc.cover_point == c.cover_point);
    CHECK(cc.fiber == c.fiber);
    for (double v : c.cover_point) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("IntMatrix determinant and exact inverse") {
  IntMatrix m(2, {2, 1, 1, 1});
  CHECK(m.determinant() == 1);
  IntMatrix inv = m.inverse();
  CHECK((m * inv).is_identity());
  CHECK(IntMatrix(3, {1, 2, 3, 0, 1, 4, 0, 0, -1}).determinant() == -1);
  CHECK_THROWS_AS(IntMatrix(2, {2, 0, 0, 1}).inverse(), PreconditionError);
}

TEST_CASE("LiftedMap rejects matrices that are not unimodular") {
  CHECK_THROWS_AS(maps::affine(IntMatrix(2, {2, 0, 0, 1}), {0.0, 0.0}), ValidationError);
}

TEST_CASE("every built-in family is equivariant with its matrix") {
  TrigPolynomial c = TrigPolynomial::one_dim(0.3, {{{1}, 0.1, 0.05}});
  std::vector<LiftedMap> family = {
      maps::identity(2),          maps::rotation({0.3, 0.7}),
      maps::shear(3, {0.1, 0.2}), maps::affine(IntMatrix(2, {2, 1, 1, 1}), {0.5, 0.0}),
      maps::arnold(0.2, 0.9),     maps::sin_shear(0.15, {0.1, 0.4}),
      maps::skew(0.61, c)};
  for (const auto& g : family) {
    INFO(g.info().family);
    CHECK(check_equivariance(g, 200, 5).ok);
  }
}

TEST_CASE("class preservation follows M^T a = a") {
  const auto a = CohomologyClass::integral({1, 0});
  const auto b = CohomologyClass::integral({0, 1});
  // shear (x, y + k x): M^T (0,1) = (k, 1).
  CHECK(preserves_class(maps::shear(1), a));
  CHECK_FALSE(preserves_class(maps::shear(1), b));
  CHECK_THROWS_AS(require_preserves(maps::shear(1), b, "test"), PreconditionError);
}

TEST_CASE("inverses compose to the identity") {
  std::vector<LiftedMap> family = {maps::rotation({0.3}), maps::arnold(0.2, 0.8), maps::sin_shear(0.2, {0.1, 0.3}),
                                   maps::shear(2, {0.3, 0.1})};
  for (const auto& g : family) {
    INFO(g.info().family);
    const LiftedMap id = compose(g, g.inverse());
    for (double t : {0.0, 0.17, 0.5, 0.93}) {
      Vec x(g.dim(), t);
      Vec y = id(x);
      for (std::size_t k = 0; k < x.size(); ++k) CHECK(y[k] == doctest::Approx(x[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic Jacobians match central differences") {
  TrigPolynomial c = TrigPolynomial::one_dim(0.0, {{{2}, 0.1, 0.2}});
  std::vector<LiftedMap> family = {maps::arnold(0.1, 0.7), maps::sin_shear(0.2), maps::skew(0.3, c)};
  for (const auto& g : family) {
    INFO(g.info().family);
    Vec x(g.dim(), 0.37);
    Vec j = g.jacobian(x);
    const double h = 1e-6;
    for (std::size_t col = 0; col < g.dim(); ++col) {
      Vec xp = x, xm = x;
      xp[col] += h;
      xm[col] -= h;
      Vec fp = g(xp), fm = g(xm);
      for (std::size_t row = 0; row < g.dim(); ++row) {
        CHECK(j[row * g.dim() + col] == doctest::Approx((fp[row] - fm[row]) / (2 * h)).epsilon(1e-6));
      }
    }
  }
}
