#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tnum/distortion.hpp"
#include "tnum/errors.hpp"

using namespace tnum;

namespace {

Rational q(const char* s) { return parse_rational(s); }

// a = (1, 0), S = {T_1, r} with r the rotation by (1/3, 0); r^3 = T_1.
struct ThirdsGroup {
  CohomologyClass a = CohomologyClass::integral({1, 0});
  ExactAffineAutomorphism t1 = ExactAffineAutomorphism::fiber_translation(2, Rational(1));
  ExactAffineAutomorphism r = ExactAffineAutomorphism::rotation({q("1/3"), Rational(0)});
  std::vector<ExactAffineAutomorphism> gens() const { return {t1, r}; }
};

}  // namespace

TEST_CASE("seminorm of T_1 is exactly 1 and certified") {
  const auto a = CohomologyClass::integral({1});
  const auto s = seminorm(a, fiber_translation(1, 1.0), 16, SeminormMode::Certified);
  CHECK(s.estimate == 1.0);
  REQUIRE(s.certified_upper.has_value());
  CHECK(*s.certified_upper == 1.0);
}

TEST_CASE("seminorm of a rotation is |<a, v> + c|") {
  const auto a = CohomologyClass::real({2.0, -1.0});
  BundleAutomorphism g{maps::rotation({0.25, 0.125}), -0.5};
  const auto s = seminorm(a, g, 8, SeminormMode::Certified);
  CHECK(s.estimate == doctest::Approx(std::abs(2 * 0.25 - 0.125 - 0.5)));
  CHECK(*s.certified_upper == doctest::Approx(s.estimate));
}

TEST_CASE("seminorm estimate is monotone under grid doubling and bracketed by the certificate") {
  const auto a = CohomologyClass::integral({1});
  BundleAutomorphism g{maps::arnold(0.1, 0.8), 0.0};
  double previous = 0.0;
  // Exact sup of |0.1 + 0.8/(2 pi) sin 2 pi x|.
  const double sup = 0.1 + 0.8 / (2 * std::numbers::pi);
  for (std::size_t res = 4; res <= 1024; res *= 2) {
    const auto s = seminorm(a, g, res, SeminormMode::Certified);
    CHECK(s.estimate >= previous);
    CHECK(s.estimate <= sup + 1e-15);
    CHECK(*s.certified_upper >= sup - 1e-15);
    previous = s.estimate;
  }
}

TEST_CASE("certified mode needs a Lipschitz bound") {
  const auto a = CohomologyClass::integral({1});
  LiftedMap bare(1, [](std::span<const double> x) { return Vec{x[0] + 0.1}; }, IntMatrix::identity(1),
                 MapInfo{"bare", {}});
  CHECK_THROWS_AS(seminorm(a, {bare, 0.0}, 8, SeminormMode::Certified), PreconditionError);
  CHECK(seminorm(a, {bare, 0.0}, 8, SeminormMode::Estimate).estimate == doctest::Approx(0.1));
}

TEST_CASE("T_1 is certified undistorted against its own generating set") {
  const auto a = CohomologyClass::integral({1});
  const auto t1 = fiber_translation(1, 1.0);
  const auto cert = undistortion_certificate(a, t1, {t1}, TorusPoint({0.0}));
  CHECK(cert.constant_C == 1.0);
  CHECK(cert.tau_lower_bound >= 1.0);
  CHECK(cert.rigorous);
  CHECK(cert.verdict == CertificateVerdict::UndistortedCertified);
}

TEST_CASE("zero translation number gives no certificate") {
  const auto a = CohomologyClass::integral({1});
  BundleAutomorphism g{maps::rotation({0.5}), -1.0};
  BundleAutomorphism zero{maps::identity(1), 0.0};
  const auto cert = undistortion_certificate(a, zero, {g}, TorusPoint({0.0}));
  CHECK(cert.verdict == CertificateVerdict::NoCertificate);
  CHECK(cert.tau_lower_bound == 0.0);
}

TEST_CASE("canonical form carries deck translations into the fiber") {
  ThirdsGroup G;
  const auto r3 = power(G.r, 3, G.a);
  CHECK(r3.canonical(G.a) == G.t1);
  CHECK(r3.key(G.a) == G.t1.key(G.a));
  const auto rinv = inverse(G.r);
  CHECK(compose(G.r, rinv, G.a).canonical(G.a) == ExactAffineAutomorphism::identity(2));
}

TEST_CASE("symmetrize adds inverses once") {
  ThirdsGroup G;
  auto s = symmetrize({G.t1, G.r, G.t1}, G.a);
  CHECK(s.size() == 4);
  auto id = symmetrize({ExactAffineAutomorphism::identity(2)}, G.a);
  CHECK(id.size() == 1);
}

TEST_CASE("BFS word norms match the closed form on the thirds group") {
  ThirdsGroup G;
  WordMetric metric(G.a, G.gens(), 20);
  for (long n = -12; n <= 12; ++n) {
    // r^n has displacement n/3.
    ExactAffineAutomorphism g = n >= 0 ? power(G.r, static_cast<unsigned>(n), G.a)
                                       : power(inverse(G.r), static_cast<unsigned>(-n), G.a);
    auto len = metric.norm(g);
    REQUIRE(len.has_value());
    CHECK(static_cast<long>(*len) == oracle::cyclic_word_norm(n));
  }
  // T_2 r^2: displacement 8/3.
  auto t2r2 = compose(power(G.t1, 2, G.a), power(G.r, 2, G.a), G.a);
  CHECK(word_norm_bfs(G.a, G.gens(), t2r2) == std::optional<std::size_t>(4));
}

TEST_CASE("translation length of T_1 r is 4/3 and the certificate bound holds") {
  ThirdsGroup G;
  const auto g = compose(G.t1, G.r, G.a);
  const auto cert = undistortion_certificate(G.a, g.to_bundle(), {G.t1.to_bundle(), G.r.to_bundle()},
                                             TorusPoint({0.0, 0.0}));
  CHECK(cert.tau_lower_bound == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  const auto t = translation_length_estimate(G.a, G.gens(), g, 10, 20, cert.tau_lower_bound);
  CHECK_FALSE(t.partial);
  REQUIRE(t.norms.size() == 10);
  for (const auto& [n, len] : t.norms) {
    CHECK(static_cast<long>(len) == oracle::cyclic_word_norm(4 * static_cast<long>(n)));
    CHECK(static_cast<double>(len) >= static_cast<double>(n) * cert.tau_lower_bound - 1e-12);
  }
  CHECK(*t.estimate == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("word metric limits") {
  ThirdsGroup G;
  WordMetric small(G.a, G.gens(), 2);
  CHECK_FALSE(small.norm(power(G.r, 9, G.a)).has_value());
  WordMetric capped(G.a, G.gens(), 50, 10);
  CHECK_THROWS_AS(capped.norm(power(G.r, 40, G.a)), PreconditionError);
  const auto b = CohomologyClass::integral({0, 1});
  CHECK_THROWS_AS(WordMetric(b, {ExactAffineAutomorphism(IntMatrix(2, {1, 0, 1, 1}), {Rational(0), Rational(0)},
                                                         Rational(0))}),
                  PreconditionError);
}
