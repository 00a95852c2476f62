#pragma once

// Homological translation vectors of isotopies from the identity.

#include <functional>

#include "tnum/dynamics.hpp"

namespace tnum {

/// {g_t} with g_0 = id, given through lifts (t, x) -> lift_t(x). Each slice is
/// equivariant with M = I.
class Isotopy {
 public:
  using LiftFamily = std::function<Vec(double, std::span<const double>)>;

  Isotopy(std::size_t dim, LiftFamily family, LiftedMap terminal, std::string name);

  std::size_t dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  Vec operator()(double t, std::span<const double> x) const { return family_(t, x); }
  const LiftedMap& terminal() const noexcept { return terminal_; }

  /// Endpoint automorphism lifted by continuity from the identity: fiber shift 0.
  BundleAutomorphism bundle_lift() const { return BundleAutomorphism{terminal_, 0.0}; }

 private:
  std::size_t dim_;
  LiftFamily family_;
  LiftedMap terminal_;
  std::string name_;
};

namespace isotopies {
/// x + t v
Isotopy linear(Vec v);
/// (x + t omega, y + t c(x))
Isotopy skew(double omega, TrigPolynomial c);
/// (x + t eps sin 2pi y + t v0, y + t v1)
Isotopy sin_shear(double eps, Vec v = {0.0, 0.0});
/// x + t omega + t (K/2pi) sin 2pi x, |K| <= 1
Isotopy arnold(double omega, double k);
}  // namespace isotopies

/// <a, path(1) - path(0)> for a sampled lift of the path (first/last samples).
double delta_phi(const CohomologyClass& a, std::span<const Vec> lifted_path);

/// Samples t -> lift_t(x) at `samples` + 1 evenly spaced times.
std::vector<Vec> arc(const Isotopy& iso, std::span<const double> x, std::size_t samples = 8);

/// (1/n) sum_{i<n} delta_phi of the arc t -> lift_t(g^i x), with doubling-window convergence.
ConvergenceReport homological_translation(const CohomologyClass& a, const Isotopy& iso,
                                          const TorusPoint& x, std::size_t max_iterations,
                                          double tolerance = 1e-9);

/// integral over mu of delta_phi(arc at x).
ConvergenceReport mean_homological_translation(const CohomologyClass& a, const Isotopy& iso,
                                               const InvariantMeasure& mu,
                                               std::size_t quadrature_points = 256);

}  // namespace tnum
