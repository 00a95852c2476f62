#include "tnum/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tnum/errors.hpp"
#include "tnum/simd.hpp"

namespace tnum {

namespace {

constexpr std::size_t kMaxQuadratureNodes = std::size_t{1} << 24;

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

// Neumaier accumulator for orbit sums.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
    else comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

Vec wrap_all(std::span<const double> x) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = wrap_unit(x[i]);
  return out;
}

}  // namespace

BundlePoint BundleAutomorphism::apply(const BundlePoint& p) const {
  require_same_dim(base.dim(), p.cover_point.size(), "bundle automorphism");
  return BundlePoint{base(p.cover_point), p.fiber + fiber_shift};
}

BundleAutomorphism fiber_translation(std::size_t dim, double r) {
  return BundleAutomorphism{maps::identity(dim), r};
}

BundleAutomorphism compose(const BundleAutomorphism& g, const BundleAutomorphism& h) {
  return BundleAutomorphism{compose(g.base, h.base), g.fiber_shift + h.fiber_shift};
}

BundleAutomorphism inverse(const BundleAutomorphism& g) {
  return BundleAutomorphism{g.base.inverse(), -g.fiber_shift};
}

BundleAutomorphism power(const BundleAutomorphism& g, unsigned k) {
  BundleAutomorphism out = fiber_translation(g.base.dim(), 0.0);
  for (unsigned i = 0; i < k; ++i) out = compose(g, out);
  return out;
}

void require_admissible(const CohomologyClass& a, const BundleAutomorphism& g, const char* what) {
  require_same_dim(a.dim(), g.base.dim(), what);
  require_preserves(g.base, a, what);
  if (a.is_integral() && !is_integer(g.fiber_shift)) {
    throw ValidationError(std::string(what) + ": fiber shift must be an integer when A = Z");
  }
}

InvariantMeasure InvariantMeasure::dirac_orbit(TorusPoint point, std::size_t period) {
  if (period == 0) throw ValidationError("DiracOrbit period must be >= 1");
  return InvariantMeasure(DiracOrbit{std::move(point), period});
}

InvariantMeasure InvariantMeasure::empirical(std::vector<TorusPoint> samples, Vec weights) {
  if (samples.empty()) throw ValidationError("empirical measure needs at least one sample");
  require_same_dim(samples.size(), weights.size(), "empirical weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("empirical weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("empirical weights must sum to 1");
  for (const auto& s : samples) require_same_dim(samples.front().dim(), s.dim(), "empirical samples");
  return InvariantMeasure(Empirical{std::move(samples), std::move(weights)});
}

std::string InvariantMeasure::kind() const {
  struct Visitor {
    std::string operator()(const Lebesgue&) const { return "lebesgue"; }
    std::string operator()(const DiracOrbit&) const { return "dirac_orbit"; }
    std::string operator()(const Empirical&) const { return "empirical"; }
  };
  return std::visit(Visitor{}, variant_);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::NotConverged: return "not-converged";
    case Verdict::ExactPeriodic: return "exact-periodic";
  }
  return "unknown";
}

double theta(const CohomologyClass& a, const BundlePoint& p) {
  return a.pair(p.cover_point) + p.fiber;
}

BundlePoint translate_fiber(const BundlePoint& p, double r) { return BundlePoint{p.cover_point, p.fiber + r}; }

double rho_at_lift(const CohomologyClass& a, const BundleAutomorphism& g, std::span<const double> lift) {
  require_same_dim(a.dim(), lift.size(), "rho");
  Vec image = g.base(lift);
  double s = 0.0;
  for (std::size_t i = 0; i < lift.size(); ++i) s += a.entries()[i] * (image[i] - lift[i]);
  return s + g.fiber_shift;
}

double rho(const CohomologyClass& a, const BundleAutomorphism& g, const TorusPoint& x) {
  require_admissible(a, g, "rho");
  return rho_at_lift(a, g, x.coords());
}

double perturbed_rho(const CohomologyClass& a, const CochainPerturbation& beta,
                     const BundleAutomorphism& g, const TorusPoint& x) {
  require_admissible(a, g, "perturbed_rho");
  require_same_dim(a.dim(), beta.beta.dim(), "perturbation");
  Vec image = g.base(x.coords());
  double s = 0.0;
  for (std::size_t i = 0; i < image.size(); ++i) s += a.entries()[i] * (image[i] - x[i]);
  return s + g.fiber_shift + beta.beta(image) - beta.beta(x.coords());
}

double birkhoff_average(const CohomologyClass& a, const BundleAutomorphism& g, const TorusPoint& x,
                        std::size_t n, const CochainPerturbation* perturbation) {
  require_admissible(a, g, "birkhoff_average");
  if (n == 0) throw ValidationError("birkhoff_average needs n >= 1");
  Accumulator acc;
  Vec y(x.coords().begin(), x.coords().end());
  for (std::size_t i = 0; i < n; ++i) {
    Vec gy = g.base(y);
    double inc = g.fiber_shift;
    for (std::size_t k = 0; k < y.size(); ++k) inc += a.entries()[k] * (gy[k] - y[k]);
    // beta is Z^n-periodic, so evaluating at the unreduced image is fine.
    if (perturbation) inc += perturbation->beta(gy) - perturbation->beta(y);
    acc.add(inc);
    y = wrap_all(gy);
  }
  return acc.value() / static_cast<double>(n);
}

ConvergenceReport local_translation_number(const CohomologyClass& a, const BundleAutomorphism& g,
                                           const TorusPoint& x, const LocalOptions& options) {
  require_admissible(a, g, "local_translation_number");
  if (options.max_iterations < 2) throw ValidationError("max_iterations must be >= 2");
  if (options.first_window == 0) throw ValidationError("first_window must be >= 1");
  if (options.perturbation) require_same_dim(a.dim(), options.perturbation->beta.dim(), "perturbation");

  ConvergenceReport report;
  const Vec start(x.coords().begin(), x.coords().end());
  Vec y = start;
  Accumulator acc;
  std::size_t next_check = options.first_window;
  std::size_t n = 0;

  // Ring of recent orbit points and running sums, for cycle detection.
  const std::size_t ring = options.detect_periodic ? options.max_cycle_length : 0;
  std::vector<Vec> recent(ring);
  std::vector<Accumulator> recent_sum(ring);

  auto finish_gk = [&](double displacement) {
    // theta(g^n x^) with x^ = [x, 0] equals theta(x^) + rho_x(g^n).
    const double theta0 = a.pair(start);
    double value = theta0 + displacement;
    if (options.theta_offset) {
      BundlePoint end{y, value - a.pair(y)};
      value += options.theta_offset(end);
    }
    report.gk_variant = value / static_cast<double>(n);
  };

  // Fiber displacement `displacement` over a cycle of length q; true if exact.
  auto try_periodic = [&](double displacement, std::size_t q) {
    if (!report.detected_period) report.detected_period = q;
    const double nearest = std::round(displacement);
    if (!a.is_integral() || std::abs(displacement - nearest) > options.integrality_tolerance) return false;
    const auto num = static_cast<std::int64_t>(nearest);
    const auto den = static_cast<std::int64_t>(q);
    const std::int64_t d = std::gcd(num, den);
    report.detected_period = q;
    report.periodic_point = y;
    report.numerator = num / d;
    report.denominator = den / d;
    report.value = static_cast<double>(report.numerator) / static_cast<double>(report.denominator);
    report.error_bound = 0.0;
    report.iterations = n;
    report.verdict = Verdict::ExactPeriodic;
    report.last_window = displacement / static_cast<double>(q);
    finish_gk(acc.value());
    return true;
  };

  if (ring > 0) {
    recent[0] = y;
    recent_sum[0] = acc;
  }

  while (n < options.max_iterations) {
    Vec gy = g.base(y);
    double inc = g.fiber_shift;
    for (std::size_t k = 0; k < y.size(); ++k) inc += a.entries()[k] * (gy[k] - y[k]);
    if (options.perturbation) inc += options.perturbation->beta(gy) - options.perturbation->beta(y);
    acc.add(inc);
    y = wrap_all(gy);
    ++n;

    if (options.detect_periodic) {
      if (torus_distance(y, start) <= options.orbit_tolerance && try_periodic(acc.value(), n)) return report;
      // Shortest cycle among the recent points; q == n is the start test above.
      for (std::size_t q = 1; q <= ring && q < n; ++q) {
        const std::size_t slot = (n - q) % ring;
        if (torus_distance(y, recent[slot]) <= options.orbit_tolerance) {
          const Accumulator& then = recent_sum[slot];
          const double displacement = (acc.sum - then.sum) + (acc.comp - then.comp);
          if (try_periodic(displacement, q)) return report;
          break;
        }
      }
      if (ring > 0) {
        recent[n % ring] = y;
        recent_sum[n % ring] = acc;
      }
    }

    if (n == next_check) {
      const double avg = acc.value() / static_cast<double>(n);
      report.previous_window = report.last_window;
      report.last_window = avg;
      if (report.previous_window && std::abs(avg - *report.previous_window) < options.tolerance) {
        report.value = avg;
        report.error_bound = std::abs(avg - *report.previous_window);
        report.iterations = n;
        report.verdict = Verdict::Converged;
        finish_gk(acc.value());
        return report;
      }
      next_check *= 2;
    }
  }

  const double avg = acc.value() / static_cast<double>(n);
  if (report.last_window && n != next_check / 2) {
    report.previous_window = report.last_window;
    report.last_window = avg;
  }
  report.value = avg;
  report.error_bound = report.previous_window ? std::abs(avg - *report.previous_window)
                                              : std::numeric_limits<double>::infinity();
  report.iterations = n;
  report.verdict = Verdict::NotConverged;
  report.warnings.push_back("limit not reached within max_iterations");
  finish_gk(acc.value());
  return report;
}

Vec midpoint_grid(std::size_t dim, std::size_t m) {
  if (dim == 0 || m == 0) throw ValidationError("grid needs dim >= 1 and >= 1 point per axis");
  std::size_t count = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (count > kMaxQuadratureNodes / m) throw ValidationError("grid exceeds the node cap (2^24)");
    count *= m;
  }
  Vec coords(dim * count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t idx = rest % m;
      rest /= m;
      coords[k * count + i] = (static_cast<double>(idx) + 0.5) / static_cast<double>(m);
    }
  }
  return coords;
}

QuadratureResult integrate_lebesgue(std::size_t dim, std::size_t m, const BatchIntegrand& integrand) {
  const auto& kernels = simd::active();
  auto run = [&](std::size_t per_axis) {
    Vec coords = midpoint_grid(dim, per_axis);
    const std::size_t count = coords.size() / dim;
    Vec values(count);
    integrand(coords, count, values);
    return std::pair{kernels.sum(values) / static_cast<double>(count), count};
  };
  QuadratureResult result;
  auto [fine, count] = run(m);
  result.value = fine;
  result.nodes = count;
  if (m >= 2) {
    auto [coarse, coarse_count] = run(m / 2);
    result.nodes += coarse_count;
    // Midpoint rule is O(h^2): error(fine) ~ (fine - coarse) / 3.
    result.error_bound = std::abs(fine - coarse) / 3.0;
  } else {
    result.error_bound = std::numeric_limits<double>::infinity();
  }
  return result;
}

void rho_batch(const CohomologyClass& a, const BundleAutomorphism& g, const Vec& coords,
               std::size_t count, std::span<double> out) {
  const std::size_t dim = a.dim();
  require_same_dim(dim * count, coords.size(), "rho_batch");
  Vec images(coords.size());
  Vec point(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < dim; ++k) point[k] = coords[k * count + i];
    Vec gy = g.base(point);
    for (std::size_t k = 0; k < dim; ++k) images[k * count + i] = gy[k];
  }
  simd::active().displacement_pairing(a.entries(), {coords, count, dim}, {images, count, dim},
                                      g.fiber_shift, out);
}

DiscreteSupport discrete_support(const InvariantMeasure& mu, const LiftedMap& base) {
  DiscreteSupport support;
  if (const auto* orbit = std::get_if<DiracOrbit>(&mu.variant())) {
    require_same_dim(base.dim(), orbit->point.dim(), "dirac orbit");
    Vec y(orbit->point.coords().begin(), orbit->point.coords().end());
    for (std::size_t i = 0; i < orbit->period; ++i) {
      support.points.push_back(y);
      y = wrap_all(base(y));
    }
    support.weights.assign(orbit->period, 1.0 / static_cast<double>(orbit->period));
  } else if (const auto* emp = std::get_if<Empirical>(&mu.variant())) {
    for (const auto& s : emp->samples) {
      require_same_dim(base.dim(), s.dim(), "empirical sample");
      support.points.emplace_back(s.coords().begin(), s.coords().end());
    }
    support.weights = emp->weights;
  } else {
    throw InternalError("Lebesgue measure has no discrete support");
  }
  return support;
}

ConvergenceReport mean_translation_number(const CohomologyClass& a, const BundleAutomorphism& g,
                                          const InvariantMeasure& mu, const MeanOptions& options) {
  require_admissible(a, g, "mean_translation_number");
  const std::size_t dim = a.dim();
  ConvergenceReport report;
  const auto& kernels = simd::active();

  if (std::holds_alternative<Lebesgue>(mu.variant())) {
    if (options.quadrature_points == 0) throw ValidationError("quadrature_points must be >= 1");
    QuadratureResult q = integrate_lebesgue(
        dim, options.quadrature_points,
        [&](const Vec& coords, std::size_t count, std::span<double> out) { rho_batch(a, g, coords, count, out); });
    report.value = q.value;
    report.error_bound = q.error_bound;
    report.iterations = q.nodes;
    report.verdict = std::isfinite(q.value) && std::isfinite(q.error_bound) ? Verdict::Converged
                                                                            : Verdict::NotConverged;
    if (report.verdict == Verdict::NotConverged) report.warnings.push_back("quadrature failed");
  } else {
    DiscreteSupport support = discrete_support(mu, g.base);
    const std::size_t count = support.points.size();
    Vec coords(dim * count);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t k = 0; k < dim; ++k) coords[k * count + i] = support.points[i][k];
    Vec values(count);
    rho_batch(a, g, coords, count, values);
    report.value = kernels.weighted_sum(values, support.weights);
    report.error_bound = 0.0;
    report.iterations = count;
    report.verdict = Verdict::Converged;
  }

  if (options.check_invariance) {
    const double residual = measure_invariance_residual(g.base, mu);
    if (residual > options.invariance_tolerance) {
      report.warnings.push_back("measure is not invariant under the base map (residual " +
                                std::to_string(residual) + ")");
    }
  }
  return report;
}

PeriodicRotation periodic_rot(const CohomologyClass& a, const BundleAutomorphism& g,
                              const TorusPoint& x, std::size_t q, double orbit_tolerance,
                              double integrality_tolerance) {
  require_admissible(a, g, "periodic_rot");
  if (!a.is_integral()) throw PreconditionError("periodic_rot requires integer coefficients (A = Z)");
  if (q == 0) throw ValidationError("period must be >= 1");
  Accumulator acc;
  Vec y(x.coords().begin(), x.coords().end());
  for (std::size_t i = 0; i < q; ++i) {
    Vec gy = g.base(y);
    double inc = g.fiber_shift;
    for (std::size_t k = 0; k < y.size(); ++k) inc += a.entries()[k] * (gy[k] - y[k]);
    acc.add(inc);
    y = wrap_all(gy);
  }
  const double dist = torus_distance(y, x.coords());
  if (dist > orbit_tolerance) {
    throw PreconditionError("point is not " + std::to_string(q) + "-periodic (distance " +
                            std::to_string(dist) + ")");
  }
  const double displacement = acc.value();
  const double nearest = std::round(displacement);
  PeriodicRotation out;
  out.residual = std::abs(displacement - nearest);
  if (out.residual > integrality_tolerance) {
    throw PreconditionError("fiber displacement " + std::to_string(displacement) +
                            " is not an integer; A = Z is violated");
  }
  out.displacement = static_cast<std::int64_t>(nearest);
  out.period = static_cast<std::int64_t>(q);
  const std::int64_t d = std::gcd(out.displacement, out.period);
  out.numerator = out.displacement / d;
  out.denominator = out.period / d;
  return out;
}

std::vector<TrigPolynomial> default_test_functions(std::size_t dim) {
  std::vector<TrigPolynomial> fs;
  for (std::size_t i = 0; i < dim; ++i) {
    for (int j = 1; j <= 2; ++j) {
      std::vector<int> k(dim, 0);
      k[i] = j;
      fs.emplace_back(dim, 0.0, std::vector<TrigPolynomial::Term>{{k, 1.0, 0.0}});
      fs.emplace_back(dim, 0.0, std::vector<TrigPolynomial::Term>{{k, 0.0, 1.0}});
    }
  }
  if (dim >= 2) {
    std::vector<int> k(dim, 0);
    k[0] = 1;
    k[1] = 1;
    fs.emplace_back(dim, 0.0, std::vector<TrigPolynomial::Term>{{k, 1.0, 0.0}});
    fs.emplace_back(dim, 0.0, std::vector<TrigPolynomial::Term>{{k, 0.0, 1.0}});
  }
  return fs;
}

double measure_invariance_residual(const LiftedMap& g, const InvariantMeasure& mu,
                                   const std::vector<TrigPolynomial>& test_functions,
                                   std::size_t grid_points) {
  const std::size_t dim = g.dim();
  const std::vector<TrigPolynomial> fs = test_functions.empty() ? default_test_functions(dim) : test_functions;
  for (const auto& f : fs) require_same_dim(dim, f.dim(), "test function");
  const auto& kernels = simd::active();

  // Nodes and their images; the integrals of f and f o g are then weighted sums.
  std::vector<Vec> nodes;
  Vec weights;
  if (std::holds_alternative<Lebesgue>(mu.variant())) {
    Vec coords = midpoint_grid(dim, grid_points);
    const std::size_t count = coords.size() / dim;
    nodes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      Vec p(dim);
      for (std::size_t k = 0; k < dim; ++k) p[k] = coords[k * count + i];
      nodes.push_back(std::move(p));
    }
    weights.assign(count, 1.0 / static_cast<double>(count));
  } else {
    DiscreteSupport support = discrete_support(mu, g);
    nodes = std::move(support.points);
    weights = std::move(support.weights);
  }
  std::vector<Vec> images;
  images.reserve(nodes.size());
  for (const auto& p : nodes) images.push_back(g(p));

  Vec before(nodes.size()), after(nodes.size());
  double worst = 0.0;
  for (const auto& f : fs) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      before[i] = f(nodes[i]);
      after[i] = f(images[i]);
    }
    worst = std::max(worst, std::abs(kernels.weighted_sum(after, weights) -
                                     kernels.weighted_sum(before, weights)));
  }
  return worst;
}

}  // namespace tnum
