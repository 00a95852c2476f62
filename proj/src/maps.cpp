#include "tnum/maps.hpp"

#include <cmath>
#include <numbers>

#include "tnum/errors.hpp"

namespace tnum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase(const std::vector<int>& k, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * x[i];
  return kTwoPi * s;
}
}  // namespace

TrigPolynomial::TrigPolynomial(std::size_t dim, double constant, std::vector<Term> terms)
    : dim_(dim), constant_(constant), terms_(std::move(terms)) {
  if (dim_ == 0) throw ValidationError("trigonometric polynomial needs dimension >= 1");
  for (const Term& t : terms_) require_same_dim(dim_, t.frequency.size(), "trig term frequency");
}

double TrigPolynomial::operator()(std::span<const double> x) const {
  require_same_dim(dim_, x.size(), "trig polynomial");
  double v = constant_;
  for (const Term& t : terms_) {
    const double p = phase(t.frequency, x);
    v += t.sin_coef * std::sin(p) + t.cos_coef * std::cos(p);
  }
  return v;
}

Vec TrigPolynomial::gradient(std::span<const double> x) const {
  require_same_dim(dim_, x.size(), "trig polynomial gradient");
  Vec g(dim_, 0.0);
  for (const Term& t : terms_) {
    const double p = phase(t.frequency, x);
    const double d = kTwoPi * (t.sin_coef * std::cos(p) - t.cos_coef * std::sin(p));
    for (std::size_t i = 0; i < dim_; ++i) g[i] += d * t.frequency[i];
  }
  return g;
}

double TrigPolynomial::sup_bound() const {
  double s = std::abs(constant_);
  for (const Term& t : terms_) s += std::abs(t.sin_coef) + std::abs(t.cos_coef);
  return s;
}

double TrigPolynomial::lipschitz_bound() const {
  double s = 0.0;
  for (const Term& t : terms_) {
    double k1 = 0.0;
    for (int k : t.frequency) k1 += std::abs(k);
    s += kTwoPi * k1 * (std::abs(t.sin_coef) + std::abs(t.cos_coef));
  }
  return s;
}

namespace maps {

LiftedMap identity(std::size_t dim) {
  return rotation(Vec(dim, 0.0));
}

LiftedMap rotation(Vec v) {
  const std::size_t n = v.size();
  if (n == 0) throw ValidationError("rotation needs dimension >= 1");
  MapInfo info{"rotation", {}};
  for (std::size_t i = 0; i < n; ++i) info.params.emplace_back("v" + std::to_string(i), v[i]);
  LiftedMap g(
      n,
      [v](std::span<const double> x) {
        Vec y(x.begin(), x.end());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += v[i];
        return y;
      },
      IntMatrix::identity(n), std::move(info));
  g = g.with_lipschitz(1.0, 0.0);
  g = g.with_jacobian([n](std::span<const double>) {
    Vec j(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) j[i * n + i] = 1.0;
    return j;
  });
  return g.with_inverse([v] {
    Vec w(v);
    for (double& c : w) c = -c;
    return rotation(w);
  });
}

LiftedMap affine(IntMatrix m, Vec v) {
  const std::size_t n = m.dim();
  require_same_dim(n, v.size(), "affine translation");
  MapInfo info{"affine", {}};
  for (std::size_t i = 0; i < n * n; ++i)
    info.params.emplace_back("m" + std::to_string(i), static_cast<double>(m.entries()[i]));
  for (std::size_t i = 0; i < n; ++i) info.params.emplace_back("v" + std::to_string(i), v[i]);
  const double lip = m.inf_norm();
  const double disp = m.inf_norm_minus_identity();
  LiftedMap g(
      n,
      [m, v](std::span<const double> x) {
        Vec y = m.apply(x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += v[i];
        return y;
      },
      m, std::move(info));
  g = g.with_lipschitz(lip, disp);
  g = g.with_jacobian([m](std::span<const double>) {
    Vec j(m.entries().begin(), m.entries().end());
    return j;
  });
  return g.with_inverse([m, v] {
    IntMatrix inv = m.inverse();
    Vec w = inv.apply(v);
    for (double& c : w) c = -c;
    return affine(inv, w);
  });
}

LiftedMap shear(std::int64_t k, Vec v) {
  require_same_dim(2, v.size(), "shear translation");
  return affine(IntMatrix(2, {1, 0, k, 1}), std::move(v));
}

namespace {

// Solves y = x + omega + (K / 2pi) sin 2pi x for x; the lift is strictly
// increasing for |K| < 1 so bracketing plus Newton converges.
double arnold_preimage(double y, double omega, double k) {
  const double c = k / kTwoPi;
  double lo = y - omega - std::abs(c) - 1e-12;
  double hi = y - omega + std::abs(c) + 1e-12;
  double x = y - omega;
  for (int it = 0; it < 200; ++it) {
    const double f = x + omega + c * std::sin(kTwoPi * x) - y;
    if (f > 0) hi = x; else lo = x;
    const double df = 1.0 + k * std::cos(kTwoPi * x);
    double next = df > 1e-14 ? x - f / df : 0.5 * (lo + hi);
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-16 * (1.0 + std::abs(x)) || hi - lo < 1e-15) return next;
    x = next;
  }
  return x;
}

}  // namespace

LiftedMap arnold(double omega, double k) {
  if (std::abs(k) > 1.0) throw ValidationError("arnold family requires |K| <= 1 to be a homeomorphism");
  MapInfo info{"arnold", {{"omega", omega}, {"K", k}}};
  const double c = k / kTwoPi;
  LiftedMap g(
      1,
      [omega, c](std::span<const double> x) {
        return Vec{x[0] + omega + c * std::sin(kTwoPi * x[0])};
      },
      IntMatrix::identity(1), std::move(info));
  g = g.with_lipschitz(1.0 + std::abs(k), std::abs(k));
  g = g.with_jacobian([k](std::span<const double> x) { return Vec{1.0 + k * std::cos(kTwoPi * x[0])}; });
  return g.with_inverse([omega, k] {
    MapInfo inv_info{"arnold_inverse", {{"omega", omega}, {"K", k}}};
    LiftedMap inv(
        1, [omega, k](std::span<const double> y) { return Vec{arnold_preimage(y[0], omega, k)}; },
        IntMatrix::identity(1), std::move(inv_info));
    // Inverse of a map with derivative in [1-|K|, 1+|K|].
    std::optional<double> lip;
    if (std::abs(k) < 1.0) lip = 1.0 / (1.0 - std::abs(k));
    inv = inv.with_lipschitz(lip, lip ? std::optional<double>(*lip - 1.0) : std::nullopt);
    if (std::abs(k) < 1.0) {
      inv = inv.with_jacobian([omega, k](std::span<const double> y) {
        const double x = arnold_preimage(y[0], omega, k);
        return Vec{1.0 / (1.0 + k * std::cos(kTwoPi * x))};
      });
    }
    return inv.with_inverse([omega, k] { return arnold(omega, k); });
  });
}

LiftedMap sin_shear(double eps, Vec v) {
  require_same_dim(2, v.size(), "sin_shear translation");
  MapInfo info{"sin_shear", {{"eps", eps}, {"v0", v[0]}, {"v1", v[1]}}};
  LiftedMap g(
      2,
      [eps, v](std::span<const double> x) {
        return Vec{x[0] + eps * std::sin(kTwoPi * x[1]) + v[0], x[1] + v[1]};
      },
      IntMatrix::identity(2), std::move(info));
  const double d = kTwoPi * std::abs(eps);
  g = g.with_lipschitz(1.0 + d, d);
  g = g.with_jacobian([eps](std::span<const double> x) {
    return Vec{1.0, kTwoPi * eps * std::cos(kTwoPi * x[1]), 0.0, 1.0};
  });
  return g.with_inverse([eps, v] {
    MapInfo inv_info{"sin_shear_inverse", {{"eps", eps}, {"v0", v[0]}, {"v1", v[1]}}};
    LiftedMap inv(
        2,
        [eps, v](std::span<const double> y) {
          const double x1 = y[1] - v[1];
          return Vec{y[0] - v[0] - eps * std::sin(kTwoPi * x1), x1};
        },
        IntMatrix::identity(2), std::move(inv_info));
    const double dd = kTwoPi * std::abs(eps);
    inv = inv.with_lipschitz(1.0 + dd, dd);
    inv = inv.with_jacobian([eps, v](std::span<const double> y) {
      return Vec{1.0, -kTwoPi * eps * std::cos(kTwoPi * (y[1] - v[1])), 0.0, 1.0};
    });
    return inv.with_inverse([eps, v] { return sin_shear(eps, v); });
  });
}

LiftedMap skew(double omega, TrigPolynomial c) {
  require_same_dim(1, c.dim(), "skew cocycle");
  MapInfo info{"skew", {{"omega", omega}, {"c0", c.constant()}}};
  for (std::size_t j = 0; j < c.terms().size(); ++j) {
    const auto& t = c.terms()[j];
    info.params.emplace_back("k" + std::to_string(j), t.frequency[0]);
    info.params.emplace_back("sin" + std::to_string(j), t.sin_coef);
    info.params.emplace_back("cos" + std::to_string(j), t.cos_coef);
  }
  LiftedMap g(
      2,
      [omega, c](std::span<const double> x) {
        return Vec{x[0] + omega, x[1] + c(x.subspan(0, 1))};
      },
      IntMatrix::identity(2), std::move(info));
  const double lc = c.lipschitz_bound();
  g = g.with_lipschitz(1.0 + lc, lc);
  g = g.with_jacobian([c](std::span<const double> x) {
    return Vec{1.0, 0.0, c.gradient(x.subspan(0, 1))[0], 1.0};
  });
  return g.with_inverse([omega, c] {
    MapInfo inv_info{"skew_inverse", {{"omega", omega}, {"c0", c.constant()}}};
    LiftedMap inv(
        2,
        [omega, c](std::span<const double> y) {
          const double x0 = y[0] - omega;
          return Vec{x0, y[1] - c(std::span<const double>(&x0, 1))};
        },
        IntMatrix::identity(2), std::move(inv_info));
    const double l = c.lipschitz_bound();
    inv = inv.with_lipschitz(1.0 + l, l);
    inv = inv.with_jacobian([omega, c](std::span<const double> y) {
      const double x0 = y[0] - omega;
      return Vec{1.0, 0.0, -c.gradient(std::span<const double>(&x0, 1))[0], 1.0};
    });
    return inv.with_inverse([omega, c] { return skew(omega, c); });
  });
}

}  // namespace maps

LiftedMap random_builtin_map(std::mt19937_64& rng, const CohomologyClass& a) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> small(-0.15, 0.15);
  const std::size_t n = a.dim();
  if (n == 1) {
    std::uniform_int_distribution<int> pick(0, 1);
    if (pick(rng) == 0) return maps::rotation({unit(rng)});
    std::uniform_real_distribution<double> kk(-0.95, 0.95);
    return maps::arnold(unit(rng), kk(rng));
  }
  if (n != 2) throw ValidationError("random built-in maps are defined for n = 1 and n = 2");

  // The integer shear (x, y + kx) preserves a exactly when k a_2 = 0.
  const bool shear_ok = a.entries()[1] == 0.0;
  std::uniform_int_distribution<int> pick(0, shear_ok ? 3 : 2);
  switch (pick(rng)) {
    case 0:
      return maps::rotation({unit(rng), unit(rng)});
    case 1:
      return maps::sin_shear(small(rng), {unit(rng), unit(rng)});
    case 2: {
      std::uniform_int_distribution<int> freq(1, 3);
      TrigPolynomial c = TrigPolynomial::one_dim(
          unit(rng), {{{freq(rng)}, small(rng), small(rng)}, {{freq(rng)}, small(rng), 0.0}});
      return maps::skew(unit(rng), std::move(c));
    }
    default: {
      std::uniform_int_distribution<int> kdist(-2, 2);
      int k = kdist(rng);
      if (k == 0) k = 1;
      return maps::shear(k, {unit(rng), unit(rng)});
    }
  }
}

}  // namespace tnum
