#pragma once

// Built-in families of lifted torus maps.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tnum/torus.hpp"

namespace tnum {

/// constant + sum_j (s_j sin 2pi<k_j, x> + c_j cos 2pi<k_j, x>) on R^n.
class TrigPolynomial {
 public:
  struct Term {
    std::vector<int> frequency;
    double sin_coef = 0.0;
    double cos_coef = 0.0;
  };

  TrigPolynomial() = default;
  TrigPolynomial(std::size_t dim, double constant, std::vector<Term> terms);

  /// 0.3 + 0.1 sin 2pi x style helper in one variable.
  static TrigPolynomial one_dim(double constant, std::vector<Term> terms) {
    return TrigPolynomial(1, constant, std::move(terms));
  }

  std::size_t dim() const noexcept { return dim_; }
  double constant() const noexcept { return constant_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  double operator()(std::span<const double> x) const;
  Vec gradient(std::span<const double> x) const;

  /// |constant| + sum (|s_j| + |c_j|)
  double sup_bound() const;
  /// Sup-norm Lipschitz bound: sum 2pi |k_j|_1 (|s_j| + |c_j|).
  double lipschitz_bound() const;
  /// Integral over [0,1]^n; only the constant survives.
  double mean() const noexcept { return constant_; }

 private:
  std::size_t dim_ = 1;
  double constant_ = 0.0;
  std::vector<Term> terms_;
};

namespace maps {

LiftedMap identity(std::size_t dim);

/// x -> x + v
LiftedMap rotation(Vec v);

/// x -> M x + v
LiftedMap affine(IntMatrix m, Vec v);

/// (x, y) -> (x, y + k x) + v
LiftedMap shear(std::int64_t k, Vec v = {0.0, 0.0});

/// x -> x + omega + (K / 2pi) sin 2pi x on the circle, |K| <= 1.
LiftedMap arnold(double omega, double k);

/// (x, y) -> (x + eps sin 2pi y + v0, y + v1)
LiftedMap sin_shear(double eps, Vec v = {0.0, 0.0});

/// (x, y) -> (x + omega, y + c(x)) with c a one-variable trigonometric polynomial.
LiftedMap skew(double omega, TrigPolynomial c);

}  // namespace maps

/// A random built-in map of dimension a.dim() (1 or 2) that preserves a.
/// Covers every family that is admissible for a.
LiftedMap random_builtin_map(std::mt19937_64& rng, const CohomologyClass& a);

}  // namespace tnum
