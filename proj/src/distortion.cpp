#include "tnum/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "tnum/errors.hpp"
#include "tnum/simd.hpp"

namespace tnum {

// --- seminorm ----------------------------------------------------------------

SeminormReport seminorm(const CohomologyClass& a, const BundleAutomorphism& g,
                        std::size_t grid_resolution, SeminormMode mode) {
  require_admissible(a, g, "seminorm");
  if (grid_resolution == 0) throw ValidationError("grid_resolution must be >= 1");
  std::optional<double> lip;
  if (mode == SeminormMode::Certified) {
    lip = g.base.displacement_lipschitz_bound();
    if (!lip) {
      throw PreconditionError("certified seminorm requires a Lipschitz bound for map '" +
                              g.base.info().family + "'");
    }
  }

  // Vertex grid: resolution r is a subgrid of resolution 2r.
  const std::size_t dim = a.dim();
  Vec coords = midpoint_grid(dim, grid_resolution);
  const double half = 0.5 / static_cast<double>(grid_resolution);
  for (double& c : coords) c -= half;
  const std::size_t count = coords.size() / dim;
  Vec values(count);
  rho_batch(a, g, coords, count, values);

  SeminormReport report;
  report.estimate = simd::active().max_abs(values);
  report.grid_resolution = grid_resolution;
  report.nodes = count;
  if (lip) {
    // Every point lies within h/2 (sup-norm) of a vertex, and rho is
    // |a|_1 Lip(lift - id)-Lipschitz.
    report.cell_bound = a.l1_norm() * *lip * half;
    report.certified_upper = report.estimate + *report.cell_bound;
  }
  return report;
}

const char* to_string(CertificateVerdict v) {
  return v == CertificateVerdict::UndistortedCertified ? "undistorted-certified" : "no-certificate";
}

UndistortionCertificate undistortion_certificate(const CohomologyClass& a, const BundleAutomorphism& g,
                                                 const std::vector<BundleAutomorphism>& generators,
                                                 const TorusPoint& x, const CertificateOptions& options) {
  if (generators.empty()) throw ValidationError("undistortion_certificate needs a generating set");
  require_admissible(a, g, "undistortion_certificate");
  for (const auto& s : generators) require_admissible(a, s, "undistortion_certificate");

  UndistortionCertificate cert;
  // ||s^-1|| = ||s||, so bounding S also bounds its symmetrization.
  std::vector<std::future<GeneratorBound>> jobs;
  for (const auto& s : generators) {
    jobs.push_back(std::async(std::launch::async, [&a, &s, &options] {
      GeneratorBound b;
      b.name = s.base.info().family;
      if (s.base.displacement_lipschitz_bound()) {
        b.upper_bound = *seminorm(a, s, options.grid_resolution, SeminormMode::Certified).certified_upper;
        b.rigorous = true;
      } else {
        b.upper_bound = seminorm(a, s, options.grid_resolution, SeminormMode::Estimate).estimate;
        b.rigorous = false;
      }
      return b;
    }));
  }
  cert.rigorous = true;
  for (auto& job : jobs) {
    GeneratorBound b = job.get();
    cert.constant_C = std::max(cert.constant_C, b.upper_bound);
    cert.rigorous = cert.rigorous && b.rigorous;
    cert.generator_bounds.push_back(std::move(b));
  }

  ConvergenceReport rot = local_translation_number(a, g, x, options.local);
  if (rot.verdict == Verdict::NotConverged) {
    throw NotConvergedError("local translation number did not converge after " +
                            std::to_string(rot.iterations) + " iterations");
  }
  cert.rot_value = rot.value;
  cert.rot_error = rot.error_bound;
  cert.rot_verdict = rot.verdict;
  if (cert.constant_C > 0.0) {
    cert.tau_lower_bound = std::max(0.0, (std::abs(rot.value) - rot.error_bound) / cert.constant_C);
  }
  cert.verdict = cert.tau_lower_bound > 0.0 ? CertificateVerdict::UndistortedCertified
                                            : CertificateVerdict::NoCertificate;
  return cert;
}

// --- exact affine automorphisms ----------------------------------------------

namespace {

std::vector<Rational> exact_class(const CohomologyClass& a) {
  std::vector<Rational> out;
  for (double e : a.entries()) out.push_back(rational_from_double(e));
  return out;
}

Rational exact_pair(const std::vector<Rational>& a, const std::vector<Rational>& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * v[i];
  return s;
}

std::vector<Rational> apply_matrix(const IntMatrix& m, const std::vector<Rational>& v) {
  std::vector<Rational> out(m.dim(), Rational(0));
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) out[r] += Rational(static_cast<long>(m(r, c))) * v[c];
  return out;
}

}  // namespace

ExactAffineAutomorphism::ExactAffineAutomorphism(IntMatrix matrix, std::vector<Rational> translation,
                                                 Rational fiber_shift)
    : matrix_(std::move(matrix)), translation_(std::move(translation)), fiber_shift_(std::move(fiber_shift)) {
  require_same_dim(matrix_.dim(), translation_.size(), "exact affine translation");
  const std::int64_t det = matrix_.determinant();
  if (det != 1 && det != -1) throw ValidationError("exact affine automorphism needs |det M| = 1");
  for (auto& t : translation_) t.canonicalize();
  fiber_shift_.canonicalize();
}

ExactAffineAutomorphism ExactAffineAutomorphism::identity(std::size_t dim) {
  return ExactAffineAutomorphism(IntMatrix::identity(dim), std::vector<Rational>(dim, Rational(0)), Rational(0));
}

ExactAffineAutomorphism ExactAffineAutomorphism::fiber_translation(std::size_t dim, Rational r) {
  return ExactAffineAutomorphism(IntMatrix::identity(dim), std::vector<Rational>(dim, Rational(0)), std::move(r));
}

ExactAffineAutomorphism ExactAffineAutomorphism::rotation(std::vector<Rational> v) {
  const std::size_t n = v.size();
  return ExactAffineAutomorphism(IntMatrix::identity(n), std::move(v), Rational(0));
}

bool ExactAffineAutomorphism::preserves(const CohomologyClass& a) const {
  require_same_dim(a.dim(), dim(), "exact preserves");
  const std::vector<Rational> ea = exact_class(a);
  for (std::size_t c = 0; c < dim(); ++c) {
    Rational s = 0;
    for (std::size_t r = 0; r < dim(); ++r) s += Rational(static_cast<long>(matrix_(r, c))) * ea[r];
    if (s != ea[c]) return false;
  }
  return true;
}

ExactAffineAutomorphism ExactAffineAutomorphism::canonical(const CohomologyClass& a) const {
  require_same_dim(a.dim(), dim(), "canonical form");
  const std::vector<Rational> ea = exact_class(a);
  std::vector<Rational> reduced(dim());
  std::vector<Rational> carried(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    carried[i] = floor(translation_[i]);
    reduced[i] = translation_[i] - carried[i];
  }
  // (M, v + m, c) and (M, v, c + <a, m>) act identically on the bundle.
  return ExactAffineAutomorphism(matrix_, std::move(reduced), fiber_shift_ + exact_pair(ea, carried));
}

std::string ExactAffineAutomorphism::key(const CohomologyClass& a) const {
  const ExactAffineAutomorphism c = canonical(a);
  std::ostringstream os;
  for (auto e : c.matrix_.entries()) os << e << ',';
  os << '|';
  for (const auto& t : c.translation_) os << t.get_str() << ',';
  os << '|' << c.fiber_shift_.get_str();
  return os.str();
}

BundleAutomorphism ExactAffineAutomorphism::to_bundle() const {
  Vec v;
  for (const auto& t : translation_) v.push_back(t.get_d());
  return BundleAutomorphism{maps::affine(matrix_, std::move(v)), fiber_shift_.get_d()};
}

bool ExactAffineAutomorphism::operator==(const ExactAffineAutomorphism& rhs) const {
  if (!(matrix_ == rhs.matrix_) || fiber_shift_ != rhs.fiber_shift_) return false;
  return std::equal(translation_.begin(), translation_.end(), rhs.translation_.begin(), rhs.translation_.end(),
                    [](const Rational& x, const Rational& y) { return x == y; });
}

ExactAffineAutomorphism compose(const ExactAffineAutomorphism& f, const ExactAffineAutomorphism& g,
                                const CohomologyClass& a) {
  require_same_dim(f.dim(), g.dim(), "exact compose");
  if (!f.preserves(a) || !g.preserves(a)) {
    throw PreconditionError("exact compose: factor does not preserve the cohomology class");
  }
  std::vector<Rational> v = apply_matrix(f.matrix(), g.translation());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += f.translation()[i];
  ExactAffineAutomorphism out(f.matrix() * g.matrix(), std::move(v), f.fiber_shift() + g.fiber_shift());
  if (!out.preserves(a)) throw InternalError("product of class-preserving maps lost the class");
  return out;
}

ExactAffineAutomorphism inverse(const ExactAffineAutomorphism& f) {
  IntMatrix inv = f.matrix().inverse();
  std::vector<Rational> v = apply_matrix(inv, f.translation());
  for (auto& t : v) t = -t;
  return ExactAffineAutomorphism(std::move(inv), std::move(v), -f.fiber_shift());
}

ExactAffineAutomorphism power(const ExactAffineAutomorphism& f, unsigned k, const CohomologyClass& a) {
  ExactAffineAutomorphism out = ExactAffineAutomorphism::identity(f.dim());
  for (unsigned i = 0; i < k; ++i) out = compose(f, out, a);
  return out;
}

std::vector<ExactAffineAutomorphism> symmetrize(const std::vector<ExactAffineAutomorphism>& generators,
                                                const CohomologyClass& a) {
  std::vector<ExactAffineAutomorphism> out;
  std::vector<std::string> keys;
  auto add = [&](const ExactAffineAutomorphism& e) {
    std::string k = e.key(a);
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      keys.push_back(std::move(k));
      out.push_back(e);
    }
  };
  for (const auto& g : generators) add(g);
  for (const auto& g : generators) add(inverse(g));
  return out;
}

// --- word metric ---------------------------------------------------------------

WordMetric::WordMetric(CohomologyClass a, std::vector<ExactAffineAutomorphism> generators,
                       std::size_t radius, std::size_t ball_cap)
    : a_(std::move(a)), radius_(radius), ball_cap_(ball_cap) {
  if (generators.empty()) throw ValidationError("word metric needs a generating set");
  for (const auto& g : generators) {
    require_same_dim(a_.dim(), g.dim(), "word metric generator");
    if (!g.preserves(a_)) throw PreconditionError("generator does not preserve the cohomology class");
  }
  letters_ = symmetrize(generators, a_);
  ExactAffineAutomorphism id = ExactAffineAutomorphism::identity(a_.dim());
  distance_.emplace(id.key(a_), 0);
  frontier_.push_back(std::move(id));
}

bool WordMetric::grow_one_layer() {
  if (reached_ >= radius_ || frontier_.empty()) return false;
  std::vector<ExactAffineAutomorphism> next;
  for (const auto& f : frontier_) {
    for (const auto& s : letters_) {
      ExactAffineAutomorphism h = compose(f, s, a_).canonical(a_);
      auto [it, inserted] = distance_.emplace(h.key(a_), reached_ + 1);
      if (inserted) {
        if (distance_.size() > ball_cap_) {
          throw PreconditionError("word-norm ball exceeded the size cap of " + std::to_string(ball_cap_));
        }
        next.push_back(std::move(h));
      }
    }
  }
  frontier_ = std::move(next);
  ++reached_;
  return true;
}

std::optional<std::size_t> WordMetric::norm(const ExactAffineAutomorphism& g) {
  require_same_dim(a_.dim(), g.dim(), "word norm");
  const std::string k = g.key(a_);
  for (;;) {
    if (auto it = distance_.find(k); it != distance_.end()) return it->second;
    if (!grow_one_layer()) return std::nullopt;
  }
}

std::optional<std::size_t> word_norm_bfs(const CohomologyClass& a,
                                         const std::vector<ExactAffineAutomorphism>& generators,
                                         const ExactAffineAutomorphism& g, std::size_t radius,
                                         std::size_t ball_cap) {
  WordMetric metric(a, generators, radius, ball_cap);
  return metric.norm(g);
}

TranslationLengthReport translation_length_estimate(const CohomologyClass& a,
                                                    const std::vector<ExactAffineAutomorphism>& generators,
                                                    const ExactAffineAutomorphism& g, std::size_t max_power,
                                                    std::size_t radius,
                                                    std::optional<double> certificate_lower_bound) {
  if (max_power == 0) throw ValidationError("max_power must be >= 1");
  WordMetric metric(a, generators, radius);
  TranslationLengthReport report;
  report.certificate_lower_bound = certificate_lower_bound;
  ExactAffineAutomorphism gn = ExactAffineAutomorphism::identity(g.dim());
  for (std::size_t n = 1; n <= max_power; ++n) {
    gn = compose(g, gn, a);
    std::optional<std::size_t> len = metric.norm(gn);
    if (!len) {
      report.partial = true;
      break;
    }
    report.norms.emplace_back(n, *len);
    const double ratio = static_cast<double>(*len) / static_cast<double>(n);
    report.ratios.push_back(ratio);
    report.estimate = report.estimate ? std::min(*report.estimate, ratio) : ratio;
  }
  return report;
}

}  // namespace tnum
