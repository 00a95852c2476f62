#pragma once

// The Gal-Kedra two-cocycle G_x(g, h) = int_x^{h(x)} g*alpha - alpha and the
// identities tying it to rho.
//
// Coboundary convention: (delta f)(g, h) = f(h) - f(gh) + f(g). With it the
// pullback of G along the projection to the base equals -delta rho.

#include <cstdint>
#include <vector>

#include "tnum/dynamics.hpp"

namespace tnum {

enum class CocycleMethod { ClosedForm, Quadrature };

struct CocycleEvaluation {
  double value = 0.0;
  CocycleMethod method = CocycleMethod::ClosedForm;
  std::size_t segments = 0;  // Quadrature only
  TorusPoint base_point;
};

/// Closed form <a, g(h(x)) - g(x)> - <a, h(x) - x>, any lift of x.
double gal_kedra(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h, const TorusPoint& x);

/// Composite midpoint rule for the line integral of g*alpha - alpha along the
/// straight segment from x to h(x) in the cover.
double gal_kedra_quadrature(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h,
                            const TorusPoint& x, std::size_t segments);

CocycleEvaluation evaluate_gal_kedra(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h,
                                     const TorusPoint& x, CocycleMethod method,
                                     std::size_t segments = 10000);

/// |G(p g, p h) - (rho(gh) - rho(g) - rho(h))|, i.e. the defect of p*G = -delta rho.
double coboundary_residual(const CohomologyClass& a, const BundleAutomorphism& g,
                           const BundleAutomorphism& h, const TorusPoint& x);

/// |G(h,k) - G(gh,k) + G(g,hk) - G(g,h)|
double cocycle_residual(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h,
                        const LiftedMap& k, const TorusPoint& x);

struct SplittingOptions {
  std::size_t pairs = 100;
  std::size_t max_word_length = 3;
  std::size_t quadrature_points = 64;
  double invariance_tolerance = 1e-6;
  std::uint64_t seed = 1;
};

struct SplittingReport {
  /// max |F(gh) - F(g) - F(h)| with F the mean translation number.
  double splitting_residual = 0.0;
  /// max |int G_x(g, h) d mu(x)|: the averaged cocycle is the coboundary of F, which vanishes.
  double mean_cocycle_residual = 0.0;
  /// max |F(g T_r) - F(g) - r|: rho - F descends to the base group.
  double descent_residual = 0.0;
  double max_invariance_residual = 0.0;
  double max_quadrature_error = 0.0;
  std::size_t pairs = 0;
  /// F on each generator, in input order.
  std::vector<double> generator_values;
};

/// Checks that F = mean translation number is a homomorphism on the subgroup
/// generated by the inputs. Throws PreconditionError if a generator does not
/// preserve mu.
SplittingReport splitting_check(const CohomologyClass& a, const std::vector<BundleAutomorphism>& generators,
                                const InvariantMeasure& mu, const SplittingOptions& options = {});

/// max |delta rho_x| over sampled pairs of words in the generators.
double quasimorphism_defect(const CohomologyClass& a, const std::vector<BundleAutomorphism>& generators,
                            const TorusPoint& x, std::size_t samples, std::uint64_t seed,
                            std::size_t max_word_length = 4);

struct ResidualSuiteReport {
  std::size_t draws = 0;
  double max_coboundary = 0.0;
  double max_cocycle = 0.0;
  double max_shift_sensitivity = 0.0;  // |residual(shifts) - residual(0 shifts)|
  std::vector<double> coboundary;       // per draw, in draw order
  std::vector<double> cocycle;
};

/// Seeded random draws over every built-in family on T^1 and T^2, integral and
/// real classes, random base points and fiber shifts.
ResidualSuiteReport gal_kedra_residual_suite(std::size_t draws, std::uint64_t seed);

}  // namespace tnum
