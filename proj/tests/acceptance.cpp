// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tnum/distortion.hpp"
#include "tnum/galkedra.hpp"
#include "tnum/homovec.hpp"
#include "tnum/run.hpp"
#include "tnum/seifert.hpp"

using namespace tnum;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // <= 0: untimed
  std::function<Outcome()> check;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome coboundary_identity() {
  const auto r = gal_kedra_residual_suite(1000, 20240101);
  return {r.max_coboundary <= 1e-12, "1000 draws, max residual " + fmt("%.3g", r.max_coboundary)};
}

Outcome cocycle_condition() {
  const auto r = gal_kedra_residual_suite(1000, 20240202);
  return {r.max_cocycle <= 1e-12, "1000 triples, max residual " + fmt("%.3g", r.max_cocycle)};
}

Outcome rotation_recovery() {
  const auto a = CohomologyClass::integral({1});
  bool ok = true;
  std::string detail;
  for (const char* pq : {"1/2", "2/5", "3/7"}) {
    const Rational want = parse_rational(pq);
    const auto r = local_translation_number(a, {maps::rotation({want.get_d()}), 0.0}, TorusPoint({0.0}));
    const Rational got(mpz_class(std::to_string(r.numerator)), mpz_class(std::to_string(r.denominator)));
    const bool hit = r.verdict == Verdict::ExactPeriodic && got == want;
    ok = ok && hit;
    detail += std::string(pq) + (hit ? " exact, " : " WRONG, ");
  }
  const auto g = local_translation_number(a, {maps::rotation({kGolden}), 0.0}, TorusPoint({0.0}));
  const double err = std::abs(g.value - kGolden);
  ok = ok && g.verdict == Verdict::Converged && err <= 1e-12 && g.iterations <= 16;
  detail += "golden err " + fmt("%.2g", err) + " after " + std::to_string(g.iterations) + " iterations";
  return {ok, detail};
}

Outcome periodic_rationality() {
  struct Case {
    CohomologyClass a;
    BundleAutomorphism g;
  };
  std::vector<Case> cases;
  const auto a1 = CohomologyClass::integral({1});
  for (double w : {0.5, 0.4, 3.0 / 7.0, 0.25, 5.0 / 8.0}) cases.push_back({a1, {maps::rotation({w}), 0.0}});
  for (double w : {0.0, 0.05, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.95}) cases.push_back({a1, {maps::arnold(w, 0.95), 0.0}});
  cases.push_back({a1, {maps::identity(1), 3.0}});
  cases.push_back({a1, {maps::arnold(0.5, 0.9), 2.0}});
  const auto a2 = CohomologyClass::integral({1, 1});
  cases.push_back({a2, {maps::rotation({0.5, 1.0 / 3.0}), 0.0}});
  cases.push_back({a2, {maps::sin_shear(0.2, {0.0, 0.5}), 1.0}});
  const auto a3 = CohomologyClass::integral({1, 0});
  cases.push_back({a3, {maps::shear(1, {0.5, 0.0}), 0.0}});
  cases.push_back({CohomologyClass::integral({0, 1}), {maps::sin_shear(0.2, {0.0, 0.5}), 0.0}});

  std::size_t detected = 0;
  bool ok = true;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& c : cases) {
    for (int trial = 0; trial < 3; ++trial) {
      Vec x(c.a.dim());
      for (double& v : x) v = trial == 0 ? 0.0 : unit(rng);
      LocalOptions o;
      o.max_iterations = 1 << 16;
      const auto r = local_translation_number(c.a, c.g, TorusPoint(x), o);
      if (r.verdict != Verdict::ExactPeriodic) continue;
      ++detected;
      const std::size_t q = *r.detected_period;
      const bool divides = q % static_cast<std::size_t>(r.denominator) == 0;
      const auto pr = periodic_rot(c.a, c.g, TorusPoint(*r.periodic_point), q);
      ok = ok && divides && pr.numerator == r.numerator && pr.denominator == r.denominator;
    }
  }
  return {ok && detected >= 20, std::to_string(detected) + " periodic orbits, all denominators divide q and match periodic_rot"};
}

Outcome mean_local_consistency() {
  const auto a = CohomologyClass::integral({0, 1});
  const BundleAutomorphism g{maps::skew(kGolden, TrigPolynomial::one_dim(0.3, {{{1}, 0.1, 0.0}})), 0.0};
  MeanOptions mo;
  mo.quadrature_points = 1 << 10;
  const auto mean = mean_translation_number(a, g, InvariantMeasure::lebesgue(), mo);
  const double mean_err = std::abs(mean.value - 0.3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double v = birkhoff_average(a, g, TorusPoint({unit(rng), unit(rng)}), 100000);
    worst = std::max(worst, std::abs(v - 0.3));
  }
  return {mean_err <= 1e-9 && worst <= 1e-3,
          "mean err " + fmt("%.2g", mean_err) + ", worst local err " + fmt("%.2g", worst) + " at N = 1e5"};
}

Outcome alpha_independence() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = 10000;
  double worst_margin = -1.0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const std::size_t dim = i % 2 == 0 ? 1 : 2;
    const auto a = dim == 1 ? CohomologyClass::integral({1}) : CohomologyClass::integral({1, 0});
    std::vector<int> k(dim, 0);
    k[0] = 1;
    const CochainPerturbation beta(TrigPolynomial(dim, 0.0, {{k, 0.2, 0.0}}));
    const BundleAutomorphism g{random_builtin_map(rng, a), 0.0};
    Vec x(dim);
    for (double& v : x) v = unit(rng);
    const double plain = birkhoff_average(a, g, TorusPoint(x), n);
    const double pert = birkhoff_average(a, g, TorusPoint(x), n, &beta);
    const double bound = 2.0 * 0.2 / static_cast<double>(n) + 1e-9;
    ok = ok && std::abs(plain - pert) <= bound;
    worst_margin = std::max(worst_margin, std::abs(plain - pert) / bound);
  }
  return {ok, "10 maps, worst |diff| / bound = " + fmt("%.3f", worst_margin)};
}

Outcome homological_equality() {
  const auto a = CohomologyClass::integral({1, 1});
  TrigPolynomial c = TrigPolynomial::one_dim(0.3, {{{1}, 0.1, 0.0}});
  std::vector<Isotopy> isos = {isotopies::linear({kGolden, 0.2}), isotopies::linear({0.5, 0.25}),
                               isotopies::skew(kGolden, c)};
  double worst_local = 0.0, worst_mean = 0.0;
  for (const auto& iso : isos) {
    for (double t : {0.0, 0.3, 0.71}) {
      const TorusPoint x({t, 1.0 - t});
      const auto h = homological_translation(a, iso, x, 1 << 16, 1e-10);
      LocalOptions o;
      o.max_iterations = 1 << 16;
      o.tolerance = 1e-10;
      o.detect_periodic = false;
      const auto r = local_translation_number(a, iso.bundle_lift(), x, o);
      worst_local = std::max(worst_local, std::abs(h.value - r.value));
    }
    const auto hm = mean_homological_translation(a, iso, InvariantMeasure::lebesgue(), 256);
    MeanOptions mo;
    mo.quadrature_points = 256;
    const auto rm = mean_translation_number(a, iso.bundle_lift(), InvariantMeasure::lebesgue(), mo);
    worst_mean = std::max(worst_mean, std::abs(hm.value - rm.value));
  }
  return {worst_local <= 1e-9 && worst_mean <= 1e-9,
          "max local diff " + fmt("%.2g", worst_local) + ", max mean diff " + fmt("%.2g", worst_mean)};
}

Outcome splitting() {
  struct Family {
    const char* name;
    CohomologyClass a;
    std::vector<BundleAutomorphism> gens;
  };
  TrigPolynomial c = TrigPolynomial::one_dim(0.2, {{{1}, 0.1, 0.05}});
  std::vector<Family> families = {
      {"rotations", CohomologyClass::real({1.0, std::sqrt(2.0)}),
       {{maps::rotation({0.3, 0.1}), 0.5}, {maps::rotation({kGolden, 0.7}), -0.25}}},
      {"sin shears", CohomologyClass::integral({1, 0}),
       {{maps::sin_shear(0.2, {0.1, 0.3}), 0.0}, {maps::sin_shear(-0.1, {0.25, kGolden}), 1.0}}},
      {"skew products", CohomologyClass::integral({0, 1}),
       {{maps::skew(kGolden, c), 0.0}, {maps::rotation({0.2, 0.4}), 2.0}}},
  };
  double worst = 0.0;
  std::string detail;
  for (const auto& f : families) {
    SplittingOptions o;
    o.pairs = 100;
    const auto r = splitting_check(f.a, f.gens, InvariantMeasure::lebesgue(), o);
    worst = std::max(worst, r.splitting_residual);
  }
  return {worst <= 1e-6, "3 families x 100 pairs, max additivity residual " + fmt("%.3g", worst)};
}

Outcome undistortion() {
  const auto a1 = CohomologyClass::integral({1});
  const auto t1 = fiber_translation(1, 1.0);
  const auto cert = undistortion_certificate(a1, t1, {t1}, TorusPoint({0.0}));
  bool ok = cert.tau_lower_bound >= 1.0 && cert.verdict == CertificateVerdict::UndistortedCertified;
  std::string detail = "tau(T_1) >= " + fmt("%.6g", cert.tau_lower_bound);

  // |T_1^n| against {T_1^{+-1}}.
  const auto et1 = ExactAffineAutomorphism::fiber_translation(1, Rational(1));
  const auto tl = translation_length_estimate(a1, {et1}, et1, 10, 12, cert.tau_lower_bound);
  for (const auto& [n, len] : tl.norms) ok = ok && static_cast<double>(len) >= n * cert.tau_lower_bound;
  ok = ok && tl.norms.size() == 10;

  // T_1 r on the group generated by T_1 and the third rotation.
  const auto a2 = CohomologyClass::integral({1, 0});
  const auto T = ExactAffineAutomorphism::fiber_translation(2, Rational(1));
  const auto r = ExactAffineAutomorphism::rotation({parse_rational("1/3"), Rational(0)});
  const auto g = compose(T, r, a2);
  const auto c2 = undistortion_certificate(a2, g.to_bundle(), {T.to_bundle(), r.to_bundle()}, TorusPoint({0.0, 0.0}));
  const auto tl2 = translation_length_estimate(a2, {T, r}, g, 10, 20, c2.tau_lower_bound);
  for (const auto& [n, len] : tl2.norms) ok = ok && static_cast<double>(len) >= n * c2.tau_lower_bound - 1e-12;
  ok = ok && tl2.norms.size() == 10 && c2.tau_lower_bound > 0.0;
  detail += "; T_1 r: tau >= " + fmt("%.6g", c2.tau_lower_bound) + ", min |g^n|/n = " + fmt("%.6g", *tl2.estimate);
  return {ok, detail};
}

Outcome seifert_constructor() {
  std::vector<SeifertData> corpus = {
      {0, {{2, 1}, {2, -1}}},
      {0, {{1, 0}}},
      {0, {{2, 1}, {3, 1}, {6, 1}, {1, -1}}},
  };
  for (auto& d : euler_zero_corpus(40, 10)) corpus.push_back(d);
  bool ok = true;
  for (const auto& d : corpus) {
    const auto phi = construct_h1_class(d);
    mpz_class prod = 1;
    for (const auto& p : d.pairs) prod *= p.alpha;
    ok = ok && euler_number(d) == 0 && verify_homomorphism(d, phi).all_zero() && phi.value_h == Rational(prod) &&
         phi.value_h != 0;
  }
  std::size_t refused = 0;
  std::vector<SeifertData> bad = {{1, {{3, 1}}}, {0, {{2, 1}, {3, 1}}}, {2, {{5, -2}, {7, 3}, {1, 1}}}};
  for (const auto& d : bad) {
    const std::string e = euler_number(d).get_str();
    try {
      construct_h1_class(d);
    } catch (const PreconditionError& err) {
      if (std::string(err.what()).find(e) != std::string::npos) ++refused;
    }
  }
  ok = ok && refused == bad.size();
  return {ok, std::to_string(corpus.size()) + " e = 0 datasets verified exactly, " + std::to_string(refused) +
                  "/" + std::to_string(bad.size()) + " e != 0 refused with the sum"};
}

Outcome oracle_agreement() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto a = i % 2 == 0 ? CohomologyClass::integral({1}) : CohomologyClass::real({0.7, -1.3});
    const LiftedMap g = random_builtin_map(rng, a);
    const LiftedMap h = random_builtin_map(rng, a);
    Vec x(a.dim());
    for (double& v : x) v = unit(rng);
    const double closed = gal_kedra(a, g, h, TorusPoint(x));
    const double quad = gal_kedra_quadrature(a, g, h, TorusPoint(x), 10000);
    worst = std::max(worst, std::abs(closed - quad));
  }
  return {worst <= 1e-6, "100 pairs, max |closed - quadrature| " + fmt("%.3g", worst)};
}

Outcome determinism() {
  using namespace tnum::cli;
  bool ok = true;
  std::size_t compared = 0;
  for (const char* name : {"gk_check.json", "gk_eval.json", "split_check.json", "word_norm.json",
                           "rot_local_rotation.json", "seifert.json", "sweep_arnold.json"}) {
    std::ifstream in(std::string(TNUM_CONFIG_DIR) + "/" + name);
    const RunConfig c = load_config(json::parse(in), "");
    const Report first = run(c);
    const Report second = run(c);
    ok = ok && payload_text(first) == payload_text(second) && first.csv_lines == second.csv_lines;
    ++compared;
  }
  return {ok, std::to_string(compared) + " configs run twice, payloads byte-identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "coboundary identity", 5.0, coboundary_identity},
      {2, "cocycle condition", 5.0, cocycle_condition},
      {3, "rotation recovery", 1.0, rotation_recovery},
      {4, "periodic rationality", 0.0, periodic_rationality},
      {5, "mean/local consistency", 10.0, mean_local_consistency},
      {6, "cochain independence", 0.0, alpha_independence},
      {7, "homological translation equality", 0.0, homological_equality},
      {8, "splitting residual", 0.0, splitting},
      {9, "undistortion certificate", 0.0, undistortion},
      {10, "Seifert constructor", 0.0, seifert_constructor},
      {11, "cocycle quadrature oracle", 0.0, oracle_agreement},
      {12, "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      out.pass = false;
      out.detail += " (over the " + fmt("%.0f", c.time_limit_s) + " s budget)";
    }
    std::printf("[%s] %2d %-34s %s (%.3f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
    if (!out.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
