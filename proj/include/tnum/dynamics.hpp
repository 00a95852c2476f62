#pragma once

// Bundle automorphisms and their translation numbers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tnum/maps.hpp"
#include "tnum/torus.hpp"

namespace tnum {

/// An automorphism of the bundle: (x, k) -> (lift(x), k + fiber_shift).
/// It commutes with every fiber translation T_r.
struct BundleAutomorphism {
  LiftedMap base;
  double fiber_shift = 0.0;

  BundlePoint apply(const BundlePoint& p) const;
};

/// T_r: identity on the base, shift r on the fiber.
BundleAutomorphism fiber_translation(std::size_t dim, double r);

/// g o h
BundleAutomorphism compose(const BundleAutomorphism& g, const BundleAutomorphism& h);
BundleAutomorphism inverse(const BundleAutomorphism& g);
/// g^k for k >= 0.
BundleAutomorphism power(const BundleAutomorphism& g, unsigned k);

/// Throws unless g.base preserves a and, for integral a, the shift is an integer.
void require_admissible(const CohomologyClass& a, const BundleAutomorphism& g, const char* what);

struct Lebesgue {};

/// (1/q) sum_{i<q} delta_{g^i(point)}
struct DiracOrbit {
  TorusPoint point;
  std::size_t period = 1;
};

struct Empirical {
  std::vector<TorusPoint> samples;
  Vec weights;
};

class InvariantMeasure {
 public:
  using Variant = std::variant<Lebesgue, DiracOrbit, Empirical>;

  static InvariantMeasure lebesgue() { return InvariantMeasure(Lebesgue{}); }
  static InvariantMeasure dirac_orbit(TorusPoint point, std::size_t period);
  /// Weights must be nonnegative and sum to 1 within 1e-12.
  static InvariantMeasure empirical(std::vector<TorusPoint> samples, Vec weights);

  const Variant& variant() const noexcept { return variant_; }
  std::string kind() const;

 private:
  explicit InvariantMeasure(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

enum class Verdict { Converged, NotConverged, ExactPeriodic };

const char* to_string(Verdict v);

struct ConvergenceReport {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t iterations = 0;
  Verdict verdict = Verdict::NotConverged;
  /// Set when verdict == ExactPeriodic; value == numerator / denominator.
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  /// Last two window averages (the pair compared by the convergence test).
  std::optional<double> previous_window;
  std::optional<double> last_window;
  /// Period of the orbit the iteration settled on, when a return was seen.
  std::optional<std::size_t> detected_period;
  /// A point of that periodic orbit (the start point, or a later orbit point
  /// when the orbit was attracted to a cycle).
  std::optional<Vec> periodic_point;
  /// theta(g^n(x))/n for the configured zero-cochain; see LocalOptions.
  std::optional<double> gk_variant;
  std::vector<std::string> warnings;
};

/// beta: T^n -> R given by a trigonometric polynomial; alpha' = alpha + d beta.
struct CochainPerturbation {
  TrigPolynomial beta;
  double sup_bound = 0.0;

  explicit CochainPerturbation(TrigPolynomial b) : beta(std::move(b)), sup_bound(beta.sup_bound()) {}
};

/// theta([x, k]) = <a, x> + k
double theta(const CohomologyClass& a, const BundlePoint& p);

/// T_r(p)
BundlePoint translate_fiber(const BundlePoint& p, double r);

/// rho_x(g) = theta(g(x^)) - theta(x^) = <a, lift(x) - x> + c, for any lift of x.
double rho(const CohomologyClass& a, const BundleAutomorphism& g, const TorusPoint& x);
/// Same, at an explicit cover point (not reduced).
double rho_at_lift(const CohomologyClass& a, const BundleAutomorphism& g, std::span<const double> lift);

/// rho for the representative alpha + d beta: rho + beta(g x) - beta(x).
double perturbed_rho(const CohomologyClass& a, const CochainPerturbation& beta,
                     const BundleAutomorphism& g, const TorusPoint& x);

struct LocalOptions {
  std::size_t max_iterations = std::size_t{1} << 20;
  /// Convergence threshold on consecutive doubling-window averages.
  double tolerance = 1e-9;
  /// Sup-distance on T^n below which the orbit is considered to have returned.
  double orbit_tolerance = 1e-10;
  /// Fiber displacements this close to an integer count as exact (A = Z).
  double integrality_tolerance = 1e-9;
  /// First window length; windows double from here.
  std::size_t first_window = 4;
  bool detect_periodic = true;
  /// Also compare each orbit point with the previous max_cycle_length points,
  /// which catches orbits attracted to a cycle that misses the start point.
  std::size_t max_cycle_length = 64;
  std::optional<CochainPerturbation> perturbation;
  /// Locally constant correction C added to theta for the diagnostic
  /// lim theta'(g^n x^)/n with theta' = theta + C; zero when unset.
  std::function<double(const BundlePoint&)> theta_offset;
};

/// lim rho_x(g^n)/n via exact cocycle accumulation along the orbit.
ConvergenceReport local_translation_number(const CohomologyClass& a, const BundleAutomorphism& g,
                                           const TorusPoint& x, const LocalOptions& options = {});

/// rho_x(g^n)/n for exactly n steps (with the optional perturbation).
double birkhoff_average(const CohomologyClass& a, const BundleAutomorphism& g, const TorusPoint& x,
                        std::size_t n, const CochainPerturbation* perturbation = nullptr);

struct MeanOptions {
  /// Midpoint nodes per axis for Lebesgue measure.
  std::size_t quadrature_points = 256;
  double invariance_tolerance = 1e-6;
  bool check_invariance = true;
};

/// integral of rho_x(g) d mu(x).
ConvergenceReport mean_translation_number(const CohomologyClass& a, const BundleAutomorphism& g,
                                          const InvariantMeasure& mu, const MeanOptions& options = {});

struct PeriodicRotation {
  std::int64_t displacement = 0;  // fiber displacement of g^q
  std::int64_t period = 1;        // q
  std::int64_t numerator = 0;     // reduced displacement / period
  std::int64_t denominator = 1;
  double residual = 0.0;          // distance of the raw displacement from an integer
};

/// n/q for a q-periodic point x, A = Z.
PeriodicRotation periodic_rot(const CohomologyClass& a, const BundleAutomorphism& g,
                              const TorusPoint& x, std::size_t q, double orbit_tolerance = 1e-10,
                              double integrality_tolerance = 1e-9);

/// Low-order trigonometric test functions used by measure_invariance_residual.
std::vector<TrigPolynomial> default_test_functions(std::size_t dim);

/// max_f | int f o g d mu - int f d mu |
double measure_invariance_residual(const LiftedMap& g, const InvariantMeasure& mu,
                                   const std::vector<TrigPolynomial>& test_functions = {},
                                   std::size_t grid_points = 64);

/// Support points and weights of mu (DiracOrbit needs the base map).
struct DiscreteSupport {
  std::vector<Vec> points;
  Vec weights;
};
DiscreteSupport discrete_support(const InvariantMeasure& mu, const LiftedMap& base);

/// Integrates a batch integrand over the midpoint grid of [0,1)^dim with
/// points_per_axis nodes per axis. The callback receives coordinate-major
/// nodes and writes one value per node. Returns {value, richardson_error}.
struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t nodes = 0;
};
using BatchIntegrand = std::function<void(const Vec& coords, std::size_t count, std::span<double> out)>;
QuadratureResult integrate_lebesgue(std::size_t dim, std::size_t points_per_axis,
                                    const BatchIntegrand& integrand);

/// Coordinate-major midpoint grid ((i + 1/2)/m) with m^dim nodes.
Vec midpoint_grid(std::size_t dim, std::size_t points_per_axis);

/// Evaluates rho_x(g) for every node of a coordinate-major batch.
void rho_batch(const CohomologyClass& a, const BundleAutomorphism& g, const Vec& coords,
               std::size_t count, std::span<double> out);

}  // namespace tnum
