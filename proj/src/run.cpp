#include "tnum/run.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tnum/galkedra.hpp"
#include "tnum/simd.hpp"
#include "tnum/sweep.hpp"

namespace tnum::cli {

using namespace tnum::config;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return kExitValidation;
    case ErrorKind::NotConverged: return kExitNotConverged;
    case ErrorKind::Precondition: return kExitPrecondition;
    case ErrorKind::Internal: return kExitInternal;
  }
  return kExitInternal;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {
      "rot-local", "rot-mean",  "rot-homovec",     "gk-eval",   "gk-check",      "split-check",
      "seminorm",  "distortion-cert", "word-norm", "seifert-class", "sweep"};
  return names;
}

json measured(double value, double error_bound) {
  json j;
  j["value"] = value;
  if (std::isfinite(error_bound)) j["error_bound"] = error_bound;
  else j["error_bound"] = "inf";
  return j;
}

json exact_value(double value, const std::string& rational) {
  json j;
  j["value"] = value;
  j["exact"] = true;
  if (!rational.empty()) j["rational"] = rational;
  return j;
}

std::string inputs_digest(const json& body) {
  const std::string text = body.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

struct Outcome {
  json results;
  int status = kExitSuccess;
};

using Job = std::function<Outcome()>;

// Accessor for the "options" object of a config.
class Options {
 public:
  Options(const json& body, std::initializer_list<const char*> allowed) {
    if (body.contains("options")) {
      check_keys(body["options"], allowed, "options");
      opts_ = body["options"];
    } else {
      opts_ = json::object();
    }
  }
  bool has(const char* key) const { return opts_.contains(key); }
  double real(const char* key, double fallback) const {
    return has(key) ? get_double(opts_[key], std::string("options.") + key) : fallback;
  }
  std::size_t count(const char* key, std::size_t fallback) const {
    return has(key) ? get_count(opts_[key], std::string("options.") + key) : fallback;
  }
  bool flag(const char* key, bool fallback) const {
    return has(key) ? get_bool(opts_[key], std::string("options.") + key) : fallback;
  }
  std::string text(const char* key, const std::string& fallback) const {
    return has(key) ? get_string(opts_[key], std::string("options.") + key) : fallback;
  }

 private:
  json opts_;
};

LocalOptions local_options(const Options& o) {
  LocalOptions lo;
  lo.tolerance = o.real("tolerance", lo.tolerance);
  lo.max_iterations = o.count("max_iterations", lo.max_iterations);
  lo.first_window = o.count("first_window", lo.first_window);
  lo.detect_periodic = o.flag("detect_periodic", lo.detect_periodic);
  lo.orbit_tolerance = o.real("orbit_tolerance", lo.orbit_tolerance);
  lo.integrality_tolerance = o.real("integrality_tolerance", lo.integrality_tolerance);
  lo.max_cycle_length = o.count("max_cycle_length", lo.max_cycle_length);
  if (!(lo.tolerance > 0.0)) throw ValidationError("options.tolerance must be > 0");
  if (lo.max_iterations < 2) throw ValidationError("options.max_iterations must be >= 2");
  if (lo.first_window == 0) throw ValidationError("options.first_window must be >= 1");
  return lo;
}

TorusPoint point_or_origin(const json& body, const char* key, std::size_t dim, std::mt19937_64& rng) {
  if (!body.contains(key)) return TorusPoint(Vec(dim, 0.0));
  return parse_point(body[key], dim, rng, key);
}

std::vector<BundleAutomorphism> parse_generators(const json& body, const CohomologyClass& a, const char* what) {
  const json& gens = require(body, "generators", "config");
  if (!gens.is_array() || gens.empty()) throw ValidationError("generators: expected a nonempty array");
  std::vector<BundleAutomorphism> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    out.push_back(parse_automorphism(gens[i], "generators[" + std::to_string(i) + "]"));
    require_admissible(a, out.back(), what);
  }
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json convergence_json(const ConvergenceReport& r) {
  json j;
  if (r.verdict == Verdict::ExactPeriodic) {
    j["rot"] = exact_value(r.value, std::to_string(r.numerator) + "/" + std::to_string(r.denominator));
  } else {
    j["rot"] = measured(r.value, r.error_bound);
  }
  j["verdict"] = to_string(r.verdict);
  j["iterations"] = r.iterations;
  j["previous_window"] = optional_number(r.previous_window);
  j["last_window"] = optional_number(r.last_window);
  j["detected_period"] = r.detected_period ? json(*r.detected_period) : json(nullptr);
  j["periodic_point"] = r.periodic_point ? json(*r.periodic_point) : json(nullptr);
  j["warnings"] = r.warnings;
  return j;
}

json primary_from(const json& number, const std::string& verdict, std::size_t iterations) {
  json p = number;
  p["verdict"] = verdict;
  p["iterations"] = iterations;
  return p;
}

int status_of(const ConvergenceReport& r) {
  return r.verdict == Verdict::NotConverged ? kExitNotConverged : kExitSuccess;
}

Job prepare_rot_local(const json& body, std::uint64_t seed) {
  check_keys(body, {"command", "seed", "class", "map", "point", "perturbation", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const BundleAutomorphism g = parse_automorphism(require(body, "map", "config"));
  require_admissible(a, g, "rot-local");
  std::mt19937_64 rng(seed);
  const TorusPoint x = point_or_origin(body, "point", a.dim(), rng);
  LocalOptions lo = local_options(Options(body, {"tolerance", "max_iterations", "first_window", "detect_periodic",
                                                 "orbit_tolerance", "integrality_tolerance", "max_cycle_length"}));
  if (body.contains("perturbation")) {
    lo.perturbation = CochainPerturbation(parse_trig(body["perturbation"], a.dim(), "perturbation"));
  }
  return [a, g, x, lo] {
    const ConvergenceReport r = local_translation_number(a, g, x, lo);
    Outcome out;
    out.results = convergence_json(r);
    out.results["gk_variant"] = optional_number(r.gk_variant);
    out.results["point"] = Vec(x.coords().begin(), x.coords().end());
    out.results["primary"] = primary_from(out.results["rot"], to_string(r.verdict), r.iterations);
    out.status = status_of(r);
    return out;
  };
}

Job prepare_rot_mean(const json& body, std::uint64_t) {
  check_keys(body, {"command", "seed", "class", "map", "measure", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const BundleAutomorphism g = parse_automorphism(require(body, "map", "config"));
  require_admissible(a, g, "rot-mean");
  const InvariantMeasure mu = body.contains("measure") ? parse_measure(body["measure"], a.dim())
                                                       : InvariantMeasure::lebesgue();
  const Options o(body, {"grid", "invariance_tolerance", "check_invariance"});
  MeanOptions mo;
  mo.quadrature_points = o.count("grid", mo.quadrature_points);
  mo.invariance_tolerance = o.real("invariance_tolerance", mo.invariance_tolerance);
  mo.check_invariance = o.flag("check_invariance", mo.check_invariance);
  if (mo.quadrature_points == 0) throw ValidationError("options.grid must be >= 1");
  return [a, g, mu, mo] {
    const ConvergenceReport r = mean_translation_number(a, g, mu, mo);
    Outcome out;
    out.results["rot"] = measured(r.value, r.error_bound);
    out.results["verdict"] = to_string(r.verdict);
    out.results["nodes"] = r.iterations;
    out.results["measure"] = mu.kind();
    out.results["invariance_residual"] = measure_invariance_residual(g.base, mu);
    out.results["warnings"] = r.warnings;
    out.results["primary"] = primary_from(out.results["rot"], to_string(r.verdict), r.iterations);
    out.status = status_of(r);
    return out;
  };
}

Job prepare_rot_homovec(const json& body, std::uint64_t seed) {
  check_keys(body, {"command", "seed", "class", "isotopy", "point", "measure", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const Isotopy iso = parse_isotopy(require(body, "isotopy", "config"));
  require_same_dim(a.dim(), iso.dim(), "isotopy");
  require_admissible(a, iso.bundle_lift(), "rot-homovec");
  std::mt19937_64 rng(seed);
  const bool want_local = body.contains("point") || !body.contains("measure");
  const TorusPoint x = point_or_origin(body, "point", a.dim(), rng);
  std::optional<InvariantMeasure> mu;
  if (body.contains("measure")) mu = parse_measure(body["measure"], a.dim());
  const Options o(body, {"tolerance", "max_iterations", "grid"});
  LocalOptions lo;
  lo.tolerance = o.real("tolerance", lo.tolerance);
  lo.max_iterations = o.count("max_iterations", lo.max_iterations);
  const std::size_t grid = o.count("grid", 256);
  if (grid == 0) throw ValidationError("options.grid must be >= 1");
  if (lo.max_iterations < 2) throw ValidationError("options.max_iterations must be >= 2");

  return [a, iso, want_local, x, mu, lo, grid] {
    Outcome out;
    const BundleAutomorphism g = iso.bundle_lift();
    if (want_local) {
      const ConvergenceReport h = homological_translation(a, iso, x, lo.max_iterations, lo.tolerance);
      LocalOptions plain = lo;
      plain.detect_periodic = false;
      const ConvergenceReport r = local_translation_number(a, g, x, plain);
      out.results["homological"] = convergence_json(h);
      out.results["endpoint_rot"] = convergence_json(r);
      out.results["difference"] = std::abs(h.value - r.value);
      out.results["primary"] = primary_from(out.results["homological"]["rot"], to_string(h.verdict), h.iterations);
      out.status = std::max(status_of(h), status_of(r));
    }
    if (mu) {
      const ConvergenceReport h = mean_homological_translation(a, iso, *mu, grid);
      MeanOptions mo;
      mo.quadrature_points = grid;
      const ConvergenceReport r = mean_translation_number(a, g, *mu, mo);
      out.results["mean_homological"] = measured(h.value, h.error_bound);
      out.results["mean_rot"] = measured(r.value, r.error_bound);
      out.results["mean_difference"] = std::abs(h.value - r.value);
      out.results["mean_warnings"] = r.warnings;
      if (!want_local) {
        out.results["primary"] = primary_from(out.results["mean_homological"], to_string(h.verdict), h.iterations);
        out.status = std::max(status_of(h), status_of(r));
      }
    }
    return out;
  };
}

Job prepare_gk_eval(const json& body, std::uint64_t seed) {
  check_keys(body, {"command", "seed", "class", "g", "h", "point", "method", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const BundleAutomorphism g = parse_automorphism(require(body, "g", "config"), "g");
  const BundleAutomorphism h = parse_automorphism(require(body, "h", "config"), "h");
  require_admissible(a, g, "gk-eval");
  require_admissible(a, h, "gk-eval");
  std::mt19937_64 rng(seed);
  const TorusPoint x = point_or_origin(body, "point", a.dim(), rng);
  const std::string method = body.contains("method") ? get_string(body["method"], "method") : "both";
  if (method != "closed_form" && method != "quadrature" && method != "both") {
    throw ValidationError("method: expected \"closed_form\", \"quadrature\" or \"both\"");
  }
  const std::size_t segments = Options(body, {"segments"}).count("segments", 10000);
  if (segments < 2) throw ValidationError("options.segments must be >= 2");

  return [a, g, h, x, method, segments] {
    Outcome out;
    const double closed = gal_kedra(a, g.base, h.base, x);
    // Four pairings of cover points of size at most |ghx|.
    const Vec hx = h.base(x.coords());
    const Vec ghx = g.base(hx);
    double scale = 1.0;
    for (double c : ghx) scale = std::max(scale, std::abs(c));
    for (double c : hx) scale = std::max(scale, std::abs(c));
    const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * a.l1_norm() * scale;
    if (method != "quadrature") out.results["closed_form"] = measured(closed, rounding);
    if (method != "closed_form") {
      const double fine = gal_kedra_quadrature(a, g.base, h.base, x, segments);
      const double coarse = gal_kedra_quadrature(a, g.base, h.base, x, segments / 2);
      out.results["quadrature"] = measured(fine, std::abs(fine - coarse) / 3.0);
      out.results["segments"] = segments;
      out.results["method_difference"] = std::abs(fine - closed);
    }
    out.results["coboundary_residual"] = coboundary_residual(a, g, h, x);
    out.results["point"] = Vec(x.coords().begin(), x.coords().end());
    const json& headline = out.results.contains("closed_form") ? out.results["closed_form"]
                                                                : out.results["quadrature"];
    out.results["primary"] = primary_from(headline, "evaluated", 1);
    return out;
  };
}

Job prepare_gk_check(const json& body, std::uint64_t seed) {
  check_keys(body, {"command", "seed", "options"}, "config");
  const Options o(body, {"draws", "tolerance"});
  const std::size_t draws = o.count("draws", 100);
  const double tolerance = o.real("tolerance", 1e-12);
  if (draws == 0) throw ValidationError("options.draws must be >= 1");
  return [draws, tolerance, seed] {
    const ResidualSuiteReport r = gal_kedra_residual_suite(draws, seed);
    Outcome out;
    json rows = json::array();
    for (std::size_t i = 0; i < r.draws; ++i) {
      rows.push_back({{"draw", i}, {"coboundary", r.coboundary[i]}, {"cocycle", r.cocycle[i]}});
    }
    out.results["residuals"] = std::move(rows);
    out.results["max_coboundary"] = r.max_coboundary;
    out.results["max_cocycle"] = r.max_cocycle;
    out.results["max_shift_sensitivity"] = r.max_shift_sensitivity;
    out.results["tolerance"] = tolerance;
    const bool pass = r.max_coboundary <= tolerance && r.max_cocycle <= tolerance;
    out.results["pass"] = pass;
    out.results["primary"] = {{"value", std::max(r.max_coboundary, r.max_cocycle)},
                              {"error_bound", 0.0},
                              {"verdict", pass ? "pass" : "fail"},
                              {"iterations", r.draws}};
    // A violated identity is a defect in the library, not in the input.
    out.status = pass ? kExitSuccess : kExitInternal;
    return out;
  };
}

Job prepare_split_check(const json& body, std::uint64_t seed) {
  check_keys(body, {"command", "seed", "class", "generators", "measure", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const std::vector<BundleAutomorphism> gens = parse_generators(body, a, "split-check");
  const InvariantMeasure mu = body.contains("measure") ? parse_measure(body["measure"], a.dim())
                                                       : InvariantMeasure::lebesgue();
  const Options o(body, {"pairs", "max_word_length", "grid", "invariance_tolerance", "tolerance"});
  SplittingOptions so;
  so.pairs = o.count("pairs", so.pairs);
  so.max_word_length = o.count("max_word_length", so.max_word_length);
  so.quadrature_points = o.count("grid", so.quadrature_points);
  so.invariance_tolerance = o.real("invariance_tolerance", so.invariance_tolerance);
  so.seed = seed;
  const double tolerance = o.real("tolerance", 1e-6);
  if (so.pairs == 0 || so.max_word_length == 0 || so.quadrature_points == 0) {
    throw ValidationError("options.pairs, max_word_length and grid must be >= 1");
  }
  return [a, gens, mu, so, tolerance] {
    const SplittingReport r = splitting_check(a, gens, mu, so);
    Outcome out;
    json values = json::array();
    for (double v : r.generator_values) values.push_back(measured(v, r.max_quadrature_error));
    out.results["generator_values"] = std::move(values);
    out.results["splitting_residual"] = r.splitting_residual;
    out.results["mean_cocycle_residual"] = r.mean_cocycle_residual;
    out.results["descent_residual"] = r.descent_residual;
    out.results["max_invariance_residual"] = r.max_invariance_residual;
    out.results["max_quadrature_error"] = r.max_quadrature_error;
    out.results["pairs"] = r.pairs;
    out.results["tolerance"] = tolerance;
    const bool pass = r.splitting_residual <= tolerance;
    out.results["pass"] = pass;
    out.results["primary"] = {{"value", r.splitting_residual},
                              {"error_bound", r.max_quadrature_error},
                              {"verdict", pass ? "pass" : "fail"},
                              {"iterations", r.pairs}};
    out.status = pass ? kExitSuccess : kExitInternal;
    return out;
  };
}

Job prepare_seminorm(const json& body, std::uint64_t) {
  check_keys(body, {"command", "seed", "class", "map", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const BundleAutomorphism g = parse_automorphism(require(body, "map", "config"));
  require_admissible(a, g, "seminorm");
  const Options o(body, {"grid", "mode"});
  const std::size_t grid = o.count("grid", 256);
  const std::string mode_name = o.text("mode", "certified");
  if (grid == 0) throw ValidationError("options.grid must be >= 1");
  if (mode_name != "estimate" && mode_name != "certified") {
    throw ValidationError("options.mode: expected \"estimate\" or \"certified\"");
  }
  const SeminormMode mode = mode_name == "certified" ? SeminormMode::Certified : SeminormMode::Estimate;
  return [a, g, grid, mode, mode_name] {
    const SeminormReport r = seminorm(a, g, grid, mode);
    Outcome out;
    // The true sup lies in [estimate, estimate + cell_bound].
    out.results["seminorm"] = r.cell_bound ? measured(r.estimate, *r.cell_bound)
                                           : measured(r.estimate, std::numeric_limits<double>::infinity());
    out.results["lower_bound"] = r.estimate;
    out.results["certified_upper"] = optional_number(r.certified_upper);
    out.results["grid_resolution"] = r.grid_resolution;
    out.results["nodes"] = r.nodes;
    out.results["mode"] = mode_name;
    out.results["primary"] = primary_from(out.results["seminorm"], mode_name, r.nodes);
    return out;
  };
}

Job prepare_distortion_cert(const json& body, std::uint64_t seed) {
  check_keys(body, {"command", "seed", "class", "map", "generators", "point", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const BundleAutomorphism g = parse_automorphism(require(body, "map", "config"));
  require_admissible(a, g, "distortion-cert");
  const std::vector<BundleAutomorphism> gens = parse_generators(body, a, "distortion-cert");
  std::mt19937_64 rng(seed);
  const TorusPoint x = point_or_origin(body, "point", a.dim(), rng);
  const Options o(body, {"grid", "tolerance", "max_iterations", "first_window", "detect_periodic",
                         "orbit_tolerance", "integrality_tolerance", "max_cycle_length"});
  CertificateOptions co;
  co.grid_resolution = o.count("grid", co.grid_resolution);
  co.local = local_options(o);
  if (co.grid_resolution == 0) throw ValidationError("options.grid must be >= 1");
  return [a, g, gens, x, co] {
    const UndistortionCertificate c = undistortion_certificate(a, g, gens, x, co);
    Outcome out;
    json bounds = json::array();
    for (const auto& b : c.generator_bounds) {
      bounds.push_back({{"generator", b.name}, {"upper_bound", b.upper_bound}, {"rigorous", b.rigorous}});
    }
    out.results["generator_bounds"] = std::move(bounds);
    out.results["constant_C"] = c.constant_C;
    out.results["rot"] = c.rot_verdict == Verdict::ExactPeriodic ? exact_value(c.rot_value)
                                                                 : measured(c.rot_value, c.rot_error);
    out.results["rot_verdict"] = to_string(c.rot_verdict);
    out.results["tau_lower_bound"] = c.tau_lower_bound;
    out.results["rigorous"] = c.rigorous;
    out.results["verdict"] = to_string(c.verdict);
    out.results["scope"] = "lower bound for the word norm of the supplied generating set only";
    out.results["primary"] = {{"value", c.tau_lower_bound},
                              {"error_bound", 0.0},
                              {"verdict", to_string(c.verdict)},
                              {"iterations", 0}};
    return out;
  };
}

Job prepare_word_norm(const json& body, std::uint64_t) {
  check_keys(body, {"command", "seed", "class", "generators", "target", "options"}, "config");
  const CohomologyClass a = parse_class(require(body, "class", "config"));
  const json& gj = require(body, "generators", "config");
  if (!gj.is_array() || gj.empty()) throw ValidationError("generators: expected a nonempty array");
  std::vector<ExactAffineAutomorphism> gens;
  for (std::size_t i = 0; i < gj.size(); ++i) {
    gens.push_back(parse_exact(gj[i], a.dim(), "generators[" + std::to_string(i) + "]"));
    if (!gens.back().preserves(a)) throw PreconditionError("generator " + std::to_string(i) + " does not preserve the class");
  }
  const ExactAffineAutomorphism target = parse_exact(require(body, "target", "config"), a.dim(), "target");
  if (!target.preserves(a)) throw PreconditionError("target does not preserve the class");
  const Options o(body, {"radius", "max_power", "ball_cap", "certify", "grid"});
  const std::size_t radius = o.count("radius", 12);
  const std::size_t max_power = o.count("max_power", 0);
  const std::size_t ball_cap = o.count("ball_cap", 2'000'000);
  const bool certify = o.flag("certify", false);
  const std::size_t grid = o.count("grid", 256);
  if (grid == 0) throw ValidationError("options.grid must be >= 1");

  return [a, gens, target, radius, max_power, ball_cap, certify, grid] {
    Outcome out;
    WordMetric metric(a, gens, radius, ball_cap);
    const std::optional<std::size_t> n = metric.norm(target);
    out.results["norm"] = n ? json(*n) : json(nullptr);
    out.results["exact"] = true;
    out.results["radius"] = radius;
    out.results["explored"] = metric.explored();

    std::optional<double> tau;
    if (certify) {
      std::vector<BundleAutomorphism> fl;
      for (const auto& s : gens) fl.push_back(s.to_bundle());
      CertificateOptions co;
      co.grid_resolution = grid;
      const UndistortionCertificate c =
          undistortion_certificate(a, target.to_bundle(), fl, TorusPoint(Vec(a.dim(), 0.0)), co);
      tau = c.tau_lower_bound;
      out.results["tau_lower_bound"] = c.tau_lower_bound;
      out.results["certificate_verdict"] = to_string(c.verdict);
    }
    if (max_power > 0) {
      const TranslationLengthReport t = translation_length_estimate(a, gens, target, max_power, radius, tau);
      json rows = json::array();
      bool holds = true;
      for (std::size_t i = 0; i < t.norms.size(); ++i) {
        const auto [power, len] = t.norms[i];
        rows.push_back({{"n", power}, {"norm", len}, {"ratio", t.ratios[i]}});
        // Strict for the certificate: |g^n| >= n tau - rounding.
        if (tau && static_cast<double>(len) < static_cast<double>(power) * *tau - 1e-12) holds = false;
      }
      out.results["powers"] = std::move(rows);
      out.results["tau_estimate"] = optional_number(t.estimate);
      out.results["partial"] = t.partial;
      if (tau) out.results["certificate_bound_holds"] = holds;
    }
    out.results["primary"] = {{"value", n ? json(*n) : json(nullptr)},
                              {"exact", true},
                              {"verdict", n ? "found" : "beyond-radius"},
                              {"iterations", metric.explored()}};
    return out;
  };
}

Job prepare_seifert_class(const json& body, std::uint64_t) {
  check_keys(body, {"command", "seed", "seifert", "options"}, "config");
  const SeifertData data = parse_seifert(require(body, "seifert", "config"));
  const Options o(body, {"convention", "force"});
  const std::string conv = o.text("convention", "h_positive");
  if (conv != "h_positive" && conv != "h_negative") {
    throw ValidationError("options.convention: expected \"h_positive\" or \"h_negative\"");
  }
  const RelationConvention convention =
      conv == "h_positive" ? RelationConvention::HPositive : RelationConvention::HNegative;
  const bool force = o.flag("force", false);
  return [data, convention, force] {
    Outcome out;
    const Rational e = euler_number(data);
    out.results["euler_number"] = exact_value(e.get_d(), e.get_str());
    out.results["euler_convention"] = "e = -sum beta_j / alpha_j";
    const FiberClassHomomorphism phi = force ? force_h1_class(data, convention)
                                             : construct_h1_class(data, convention);
    const RelationResiduals r = verify_homomorphism(data, phi);
    auto strs = [](const std::vector<Rational>& v) {
      json a = json::array();
      for (const auto& q : v) a.push_back(q.get_str());
      return a;
    };
    out.results["phi"] = {{"h", phi.value_h.get_str()}, {"q", strs(phi.values_q)}, {"ab", strs(phi.values_ab)}};
    out.results["relation_convention"] = to_string(phi.convention);
    out.results["literal_sign"] = phi.literal_sign;
    out.results["residuals"] = {{"fiber_relations", strs(r.fiber_relations)},
                                {"long_relation", r.long_relation.get_str()},
                                {"centrality", strs(r.centrality)}};
    out.results["all_residuals_zero"] = r.all_zero();
    out.results["forced"] = force;
    out.results["primary"] = primary_from(exact_value(phi.value_h.get_d(), phi.value_h.get_str()),
                                          r.all_zero() ? "verified" : "relations-violated", 0);
    if (!r.all_zero() && !force) out.status = kExitInternal;
    return out;
  };
}

Job prepare(const std::string& command, const json& body, std::uint64_t seed) {
  if (command == "rot-local") return prepare_rot_local(body, seed);
  if (command == "rot-mean") return prepare_rot_mean(body, seed);
  if (command == "rot-homovec") return prepare_rot_homovec(body, seed);
  if (command == "gk-eval") return prepare_gk_eval(body, seed);
  if (command == "gk-check") return prepare_gk_check(body, seed);
  if (command == "split-check") return prepare_split_check(body, seed);
  if (command == "seminorm") return prepare_seminorm(body, seed);
  if (command == "distortion-cert") return prepare_distortion_cert(body, seed);
  if (command == "word-norm") return prepare_word_norm(body, seed);
  if (command == "seifert-class") return prepare_seifert_class(body, seed);
  if (command == "sweep") {
    SweepPlan plan = parse_sweep(body, seed);
    return [plan, seed] {
      Outcome out;
      std::vector<std::string> csv;
      out.results = run_sweep(plan, seed, csv);
      out.results["csv"] = csv;
      return out;
    };
  }
  throw ValidationError("unknown command '" + command + "'");
}

void apply_override(json& doc, const char* key, const json& value) {
  if (!doc.contains("options")) doc["options"] = json::object();
  if (!doc["options"].is_object()) throw ValidationError("options: expected an object");
  doc["options"][key] = value;
}

}  // namespace

RunConfig load_config(json document, const std::string& command, const Overrides& overrides) {
  if (document.is_null()) document = json::object();
  if (!document.is_object()) throw ValidationError("config: expected a JSON object");
  std::string cmd = command;
  if (document.contains("command")) {
    const std::string declared = get_string(document["command"], "command");
    if (!cmd.empty() && declared != cmd) {
      throw ValidationError("config declares command '" + declared + "' but '" + cmd + "' was requested");
    }
    cmd = declared;
  }
  if (cmd.empty()) throw ValidationError("no command given");
  document["command"] = cmd;

  std::uint64_t seed = 1;
  if (document.contains("seed")) {
    const std::int64_t s = get_int(document["seed"], "seed");
    if (s < 0) throw ValidationError("seed must be nonnegative");
    seed = static_cast<std::uint64_t>(s);
  }
  if (overrides.seed) seed = *overrides.seed;
  document["seed"] = seed;

  // Sweeps pass numeric overrides through to the base config.
  json& target = cmd == "sweep" && document.contains("base") ? document["base"] : document;
  if (overrides.tolerance) apply_override(target, "tolerance", *overrides.tolerance);
  if (overrides.max_iterations) apply_override(target, "max_iterations", *overrides.max_iterations);
  if (overrides.grid) apply_override(target, "grid", *overrides.grid);

  prepare(cmd, document, seed);
  return RunConfig{cmd, seed, std::move(document)};
}

Report run(const RunConfig& config) {
  Report report;
  report.payload["command"] = config.command;
  report.payload["inputs_digest"] = inputs_digest(config.body);
  report.payload["config"] = config.body;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome out = prepare(config.command, config.body, config.seed)();
    report.payload["results"] = out.results;
    report.exit_code = out.status;
  } catch (const Error& e) {
    report.payload["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    report.exit_code = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report.payload["error"] = {{"kind", "internal"}, {"message", e.what()}};
    report.exit_code = kExitInternal;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  report.provenance = {{"version", TNUM_VERSION},
                       {"seed", config.seed},
                       {"kernels", simd::active().name},
                       {"elapsed_ms", elapsed.count()}};
  if (report.payload.contains("results") && report.payload["results"].contains("csv")) {
    report.csv_lines = report.payload["results"]["csv"].get<std::vector<std::string>>();
    report.payload["results"].erase("csv");
  }
  return report;
}

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "record") return Format::Record;
  if (name == "csv") return Format::Csv;
  throw ValidationError("unknown format '" + name + "' (expected table, record or csv)");
}

std::string payload_text(const Report& report) { return report.payload.dump(); }

namespace {

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_number_record(const json& v) {
  return v.is_object() && v.contains("value") && (v.contains("error_bound") || v.contains("exact")) &&
         !v.contains("verdict");
}

std::string number_text(const json& v) {
  std::string s = scalar_text(v["value"]);
  if (v.contains("exact")) {
    s += "  (exact";
    if (v.contains("rational")) s += " " + scalar_text(v["rational"]);
    s += ")";
  } else {
    s += "  +/- " + scalar_text(v["error_bound"]);
  }
  return s;
}

void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (is_number_record(v)) {
    out.emplace_back(prefix, number_text(v));
  } else if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, out);
  } else if (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array())) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
    out.emplace_back(prefix, "[" + s + "]");
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render(const Report& report, Format format) {
  std::ostringstream os;
  if (format == Format::Record) {
    json doc = report.payload;
    doc["provenance"] = report.provenance;
    if (!report.csv_lines.empty()) doc["results"]["csv"] = report.csv_lines;
    os << doc.dump(2) << '\n';
    return os.str();
  }
  if (format == Format::Csv && !report.csv_lines.empty()) {
    for (const auto& line : report.csv_lines) os << line << '\n';
    return os.str();
  }
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("command", report.payload["command"].get<std::string>());
  rows.emplace_back("inputs_digest", report.payload["inputs_digest"].get<std::string>());
  if (report.payload.contains("error")) flatten(report.payload["error"], "error", rows);
  if (report.payload.contains("results")) {
    json results = report.payload["results"];
    if (results.contains("rows")) results.erase("rows");  // sweep rows go to the CSV view
    flatten(results, "", rows);
  }
  if (format == Format::Csv) {
    os << "key,value\n";
    for (const auto& [k, v] : rows) os << csv_escape(k) << ',' << csv_escape(v) << '\n';
    return os.str();
  }
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  if (!report.csv_lines.empty()) {
    os << '\n';
    for (const auto& line : report.csv_lines) os << line << '\n';
  }
  return os.str();
}

}  // namespace tnum::cli
