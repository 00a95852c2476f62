#include "tnum/galkedra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tnum/errors.hpp"

namespace tnum {

namespace {

double pair_diff(const CohomologyClass& a, std::span<const double> to, std::span<const double> from) {
  double s = 0.0;
  for (std::size_t i = 0; i < to.size(); ++i) s += a.entries()[i] * (to[i] - from[i]);
  return s;
}

double closed_form_at(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h,
                      std::span<const double> x) {
  Vec hx = h(x);
  Vec ghx = g(hx);
  Vec gx = g(x);
  return pair_diff(a, ghx, gx) - pair_diff(a, hx, x);
}

void check_pair(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h, const char* what) {
  require_same_dim(a.dim(), g.dim(), what);
  require_same_dim(a.dim(), h.dim(), what);
  require_preserves(g, a, what);
  require_preserves(h, a, what);
}

BundleAutomorphism random_word(std::mt19937_64& rng, const std::vector<BundleAutomorphism>& letters,
                               std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(1, max_length);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  BundleAutomorphism w = letters[pick(rng)];
  const std::size_t l = len(rng);
  for (std::size_t i = 1; i < l; ++i) w = compose(w, letters[pick(rng)]);
  return w;
}

std::vector<BundleAutomorphism> symmetrize(const std::vector<BundleAutomorphism>& gens) {
  std::vector<BundleAutomorphism> letters = gens;
  for (const auto& g : gens)
    if (g.base.has_inverse()) letters.push_back(inverse(g));
  return letters;
}

}  // namespace

double gal_kedra(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h, const TorusPoint& x) {
  check_pair(a, g, h, "gal_kedra");
  return closed_form_at(a, g, h, x.coords());
}

double gal_kedra_quadrature(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h,
                            const TorusPoint& x, std::size_t segments) {
  check_pair(a, g, h, "gal_kedra_quadrature");
  if (segments == 0) throw ValidationError("segments must be >= 1");
  const std::size_t n = a.dim();
  const Vec start(x.coords().begin(), x.coords().end());
  const Vec end = h(start);
  Vec dir(n);
  for (std::size_t i = 0; i < n; ++i) dir[i] = end[i] - start[i];

  // (g* alpha - alpha)(v) = <a, (Dg - I) v> along gamma(t) = start + t dir.
  double sum = 0.0, comp = 0.0;
  Vec p(n);
  for (std::size_t s = 0; s < segments; ++s) {
    const double t = (static_cast<double>(s) + 0.5) / static_cast<double>(segments);
    for (std::size_t i = 0; i < n; ++i) p[i] = start[i] + t * dir[i];
    Vec jac = g.jacobian(p);
    double v = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double row = -dir[r];
      for (std::size_t c = 0; c < n; ++c) row += jac[r * n + c] * dir[c];
      v += a.entries()[r] * row;
    }
    const double tt = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - tt) + v : (v - tt) + sum;
    sum = tt;
  }
  return (sum + comp) / static_cast<double>(segments);
}

CocycleEvaluation evaluate_gal_kedra(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h,
                                     const TorusPoint& x, CocycleMethod method, std::size_t segments) {
  if (method == CocycleMethod::ClosedForm) {
    return CocycleEvaluation{gal_kedra(a, g, h, x), method, 0, x};
  }
  return CocycleEvaluation{gal_kedra_quadrature(a, g, h, x, segments), method, segments, x};
}

double coboundary_residual(const CohomologyClass& a, const BundleAutomorphism& g,
                           const BundleAutomorphism& h, const TorusPoint& x) {
  require_admissible(a, g, "coboundary_residual");
  require_admissible(a, h, "coboundary_residual");
  const double cocycle = gal_kedra(a, g.base, h.base, x);
  const BundleAutomorphism gh = compose(g, h);
  // -delta rho (g, h) = rho(gh) - rho(g) - rho(h)
  const double minus_delta_rho = rho(a, gh, x) - rho(a, g, x) - rho(a, h, x);
  return std::abs(cocycle - minus_delta_rho);
}

double cocycle_residual(const CohomologyClass& a, const LiftedMap& g, const LiftedMap& h,
                        const LiftedMap& k, const TorusPoint& x) {
  check_pair(a, g, h, "cocycle_residual");
  check_pair(a, h, k, "cocycle_residual");
  const LiftedMap gh = compose(g, h);
  const LiftedMap hk = compose(h, k);
  return std::abs(gal_kedra(a, h, k, x) - gal_kedra(a, gh, k, x) + gal_kedra(a, g, hk, x) -
                  gal_kedra(a, g, h, x));
}

SplittingReport splitting_check(const CohomologyClass& a, const std::vector<BundleAutomorphism>& generators,
                                const InvariantMeasure& measure, const SplittingOptions& options) {
  if (generators.empty()) throw ValidationError("splitting_check needs at least one generator");
  // A Dirac orbit is tied to the first generator; freeze it as an empirical
  // measure so that words in the generators all integrate against the same mu.
  InvariantMeasure mu = measure;
  if (std::holds_alternative<DiracOrbit>(measure.variant())) {
    require_same_dim(a.dim(), generators.front().base.dim(), "splitting_check");
    DiscreteSupport support = discrete_support(measure, generators.front().base);
    std::vector<TorusPoint> pts;
    for (auto& p : support.points) pts.emplace_back(p);
    mu = InvariantMeasure::empirical(std::move(pts), support.weights);
  }
  if (options.max_word_length == 0) throw ValidationError("max_word_length must be >= 1");
  SplittingReport report;
  for (const auto& g : generators) {
    require_admissible(a, g, "splitting_check");
    const double r = measure_invariance_residual(g.base, mu);
    report.max_invariance_residual = std::max(report.max_invariance_residual, r);
    if (r > options.invariance_tolerance) {
      throw PreconditionError("generator '" + g.base.info().family +
                              "' does not preserve the measure (residual " + std::to_string(r) + ")");
    }
  }

  MeanOptions mean_opts;
  mean_opts.quadrature_points = options.quadrature_points;
  mean_opts.check_invariance = false;
  auto F = [&](const BundleAutomorphism& g) {
    ConvergenceReport r = mean_translation_number(a, g, mu, mean_opts);
    report.max_quadrature_error = std::max(report.max_quadrature_error, r.error_bound);
    return r.value;
  };

  for (const auto& g : generators) report.generator_values.push_back(F(g));

  const bool lebesgue = std::holds_alternative<Lebesgue>(mu.variant());
  auto mean_cocycle = [&](const BundleAutomorphism& g, const BundleAutomorphism& h) {
    if (lebesgue) {
      QuadratureResult q = integrate_lebesgue(
          a.dim(), options.quadrature_points, [&](const Vec& coords, std::size_t count, std::span<double> out) {
            Vec p(a.dim());
            for (std::size_t i = 0; i < count; ++i) {
              for (std::size_t k = 0; k < a.dim(); ++k) p[k] = coords[k * count + i];
              out[i] = closed_form_at(a, g.base, h.base, p);
            }
          });
      return q.value;
    }
    DiscreteSupport support = discrete_support(mu, h.base);
    double s = 0.0;
    for (std::size_t i = 0; i < support.points.size(); ++i)
      s += support.weights[i] * closed_form_at(a, g.base, h.base, support.points[i]);
    return s;
  };

  const std::vector<BundleAutomorphism> letters = symmetrize(generators);
  std::mt19937_64 rng(options.seed);
  const double r = a.is_integral() ? 1.0 : 0.5;
  for (std::size_t p = 0; p < options.pairs; ++p) {
    BundleAutomorphism g = random_word(rng, letters, options.max_word_length);
    BundleAutomorphism h = random_word(rng, letters, options.max_word_length);
    const double fg = F(g), fh = F(h), fgh = F(compose(g, h));
    report.splitting_residual = std::max(report.splitting_residual, std::abs(fgh - fg - fh));
    report.mean_cocycle_residual = std::max(report.mean_cocycle_residual, std::abs(mean_cocycle(g, h)));
    const double shifted = F(compose(g, fiber_translation(a.dim(), r)));
    report.descent_residual = std::max(report.descent_residual, std::abs(shifted - fg - r));
    ++report.pairs;
  }
  return report;
}

double quasimorphism_defect(const CohomologyClass& a, const std::vector<BundleAutomorphism>& generators,
                            const TorusPoint& x, std::size_t samples, std::uint64_t seed,
                            std::size_t max_word_length) {
  if (generators.empty()) throw ValidationError("quasimorphism_defect needs generators");
  for (const auto& g : generators) require_admissible(a, g, "quasimorphism_defect");
  const std::vector<BundleAutomorphism> letters = symmetrize(generators);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    BundleAutomorphism g = random_word(rng, letters, max_word_length);
    BundleAutomorphism h = random_word(rng, letters, max_word_length);
    const double delta = rho(a, h, x) - rho(a, compose(g, h), x) + rho(a, g, x);
    worst = std::max(worst, std::abs(delta));
  }
  return worst;
}

ResidualSuiteReport gal_kedra_residual_suite(std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> real_shift(-3.0, 3.0);
  std::uniform_int_distribution<int> int_shift(-3, 3);
  std::uniform_int_distribution<int> int_entry(-3, 3);
  std::uniform_int_distribution<int> which(0, 3);

  ResidualSuiteReport report;
  report.draws = draws;
  for (std::size_t d = 0; d < draws; ++d) {
    // Classes: T^1 integral/real, T^2 integral/real (some with a_2 = 0 so the
    // integer shear is admissible).
    CohomologyClass a = CohomologyClass::integral({1});
    switch (which(rng)) {
      case 0: {
        std::int64_t e = int_entry(rng);
        a = CohomologyClass::integral({e == 0 ? 1 : e});
        break;
      }
      case 1: a = CohomologyClass::real({0.25 + unit(rng)}); break;
      case 2: {
        const std::int64_t a2 = (d % 2 == 0) ? 0 : int_entry(rng);
        a = CohomologyClass::integral({int_entry(rng), a2});
        break;
      }
      default: {
        const double a2 = (d % 2 == 0) ? 0.0 : unit(rng) - 0.5;
        a = CohomologyClass::real({unit(rng) * 2.0 - 1.0, a2});
        break;
      }
    }
    auto shift = [&] { return a.is_integral() ? static_cast<double>(int_shift(rng)) : real_shift(rng); };
    const LiftedMap g = random_builtin_map(rng, a);
    const LiftedMap h = random_builtin_map(rng, a);
    const LiftedMap k = random_builtin_map(rng, a);
    Vec xc(a.dim());
    for (double& c : xc) c = unit(rng);
    const TorusPoint x(xc);

    const BundleAutomorphism gh0{g, 0.0}, hh0{h, 0.0};
    const BundleAutomorphism gh{g, shift()}, hh{h, shift()};
    const double base = coboundary_residual(a, gh0, hh0, x);
    const double shifted = coboundary_residual(a, gh, hh, x);
    const double cocycle = cocycle_residual(a, g, h, k, x);
    report.coboundary.push_back(shifted);
    report.cocycle.push_back(cocycle);
    report.max_coboundary = std::max({report.max_coboundary, base, shifted});
    report.max_cocycle = std::max(report.max_cocycle, cocycle);
    report.max_shift_sensitivity = std::max(report.max_shift_sensitivity, std::abs(shifted - base));
  }
  return report;
}

}  // namespace tnum
