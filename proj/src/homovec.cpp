#include "tnum/homovec.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tnum/errors.hpp"
#include "tnum/simd.hpp"

namespace tnum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Isotopy::Isotopy(std::size_t dim, LiftFamily family, LiftedMap terminal, std::string name)
    : dim_(dim), family_(std::move(family)), terminal_(std::move(terminal)), name_(std::move(name)) {
  require_same_dim(dim_, terminal_.dim(), "isotopy terminal map");
  if (!terminal_.matrix().is_identity()) {
    throw ValidationError("isotopies from the identity must have M = I");
  }
}

namespace isotopies {

Isotopy linear(Vec v) {
  const std::size_t n = v.size();
  LiftedMap end = maps::rotation(v);
  return Isotopy(
      n,
      [v](double t, std::span<const double> x) {
        Vec y(x.begin(), x.end());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += t * v[i];
        return y;
      },
      std::move(end), "linear");
}

Isotopy skew(double omega, TrigPolynomial c) {
  LiftedMap end = maps::skew(omega, c);
  return Isotopy(
      2,
      [omega, c](double t, std::span<const double> x) {
        return Vec{x[0] + t * omega, x[1] + t * c(x.subspan(0, 1))};
      },
      std::move(end), "skew");
}

Isotopy sin_shear(double eps, Vec v) {
  require_same_dim(2, v.size(), "sin_shear isotopy");
  LiftedMap end = maps::sin_shear(eps, v);
  return Isotopy(
      2,
      [eps, v](double t, std::span<const double> x) {
        return Vec{x[0] + t * (eps * std::sin(kTwoPi * x[1]) + v[0]), x[1] + t * v[1]};
      },
      std::move(end), "sin_shear");
}

Isotopy arnold(double omega, double k) {
  LiftedMap end = maps::arnold(omega, k);
  const double c = k / kTwoPi;
  return Isotopy(
      1,
      [omega, c](double t, std::span<const double> x) {
        return Vec{x[0] + t * (omega + c * std::sin(kTwoPi * x[0]))};
      },
      std::move(end), "arnold");
}

}  // namespace isotopies

double delta_phi(const CohomologyClass& a, std::span<const Vec> lifted_path) {
  if (lifted_path.empty()) throw ValidationError("delta_phi needs a nonempty path");
  const Vec& first = lifted_path.front();
  const Vec& last = lifted_path.back();
  require_same_dim(a.dim(), first.size(), "delta_phi");
  require_same_dim(a.dim(), last.size(), "delta_phi");
  double s = 0.0;
  for (std::size_t i = 0; i < first.size(); ++i) s += a.entries()[i] * (last[i] - first[i]);
  return s;
}

std::vector<Vec> arc(const Isotopy& iso, std::span<const double> x, std::size_t samples) {
  if (samples == 0) throw ValidationError("arc needs samples >= 1");
  std::vector<Vec> path;
  path.reserve(samples + 1);
  for (std::size_t s = 0; s <= samples; ++s) {
    path.push_back(iso(static_cast<double>(s) / static_cast<double>(samples), x));
  }
  return path;
}

ConvergenceReport homological_translation(const CohomologyClass& a, const Isotopy& iso,
                                          const TorusPoint& x, std::size_t max_iterations,
                                          double tolerance) {
  require_same_dim(a.dim(), iso.dim(), "homological_translation");
  if (max_iterations == 0) throw ValidationError("homological_translation needs n >= 1");
  ConvergenceReport report;
  Vec y(x.coords().begin(), x.coords().end());
  double sum = 0.0, comp = 0.0;
  std::size_t next_check = 4;
  std::size_t n = 0;
  while (n < max_iterations) {
    // Only the endpoints of each arc enter delta_phi.
    const Vec from = iso(0.0, y);
    const Vec to = iso(1.0, y);
    const Vec endpoints[2] = {from, to};
    const double d = delta_phi(a, endpoints);
    const double t = sum + d;
    comp += std::abs(sum) >= std::abs(d) ? (sum - t) + d : (d - t) + sum;
    sum = t;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = wrap_unit(to[i]);
    ++n;
    if (n == next_check) {
      const double avg = (sum + comp) / static_cast<double>(n);
      report.previous_window = report.last_window;
      report.last_window = avg;
      if (report.previous_window && std::abs(avg - *report.previous_window) < tolerance) {
        report.value = avg;
        report.error_bound = std::abs(avg - *report.previous_window);
        report.iterations = n;
        report.verdict = Verdict::Converged;
        return report;
      }
      next_check *= 2;
    }
  }
  const double avg = (sum + comp) / static_cast<double>(n);
  if (report.last_window && n != next_check / 2) {
    report.previous_window = report.last_window;
    report.last_window = avg;
  }
  report.value = avg;
  report.error_bound = report.previous_window ? std::abs(avg - *report.previous_window)
                                              : std::numeric_limits<double>::infinity();
  report.iterations = n;
  report.verdict = Verdict::NotConverged;
  report.warnings.push_back("limit not reached within the iteration budget");
  return report;
}

ConvergenceReport mean_homological_translation(const CohomologyClass& a, const Isotopy& iso,
                                               const InvariantMeasure& mu, std::size_t quadrature_points) {
  require_same_dim(a.dim(), iso.dim(), "mean_homological_translation");
  const std::size_t dim = a.dim();
  // Delta_phi at each node is a pairing of arc endpoints, batched.
  auto arcs = [&](const Vec& coords, std::size_t count, std::span<double> out) {
    Vec starts(coords.size()), ends(coords.size());
    Vec p(dim);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t k = 0; k < dim; ++k) p[k] = coords[k * count + i];
      Vec s = iso(0.0, p);
      Vec e = iso(1.0, p);
      for (std::size_t k = 0; k < dim; ++k) {
        starts[k * count + i] = s[k];
        ends[k * count + i] = e[k];
      }
    }
    simd::active().displacement_pairing(a.entries(), {starts, count, dim}, {ends, count, dim}, 0.0, out);
  };

  ConvergenceReport report;
  if (std::holds_alternative<Lebesgue>(mu.variant())) {
    QuadratureResult q = integrate_lebesgue(dim, quadrature_points, arcs);
    report.value = q.value;
    report.error_bound = q.error_bound;
    report.iterations = q.nodes;
  } else {
    DiscreteSupport support = discrete_support(mu, iso.terminal());
    const std::size_t count = support.points.size();
    Vec coords(dim * count);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t k = 0; k < dim; ++k) coords[k * count + i] = support.points[i][k];
    Vec values(count);
    arcs(coords, count, values);
    report.value = simd::active().weighted_sum(values, support.weights);
    report.error_bound = 0.0;
    report.iterations = count;
  }
  report.verdict = std::isfinite(report.value) ? Verdict::Converged : Verdict::NotConverged;
  return report;
}

}  // namespace tnum
