#pragma once

// Word norms, the sup-seminorm of rho, and undistortion certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tnum/dynamics.hpp"
#include "tnum/rational.hpp"

namespace tnum {

enum class SeminormMode { Estimate, Certified };

struct SeminormReport {
  /// max |rho| over the vertex grid {i / resolution}^n; a lower bound on the sup.
  double estimate = 0.0;
  /// estimate + cell_bound; an upper bound on the sup (Certified mode only).
  std::optional<double> certified_upper;
  /// |a|_1 * Lip(lift - id) * h / 2 with h = 1 / resolution.
  std::optional<double> cell_bound;
  std::size_t grid_resolution = 0;
  std::size_t nodes = 0;
};

/// sup_x |rho_x(g)|. Certified mode needs a Lipschitz bound on the lift.
SeminormReport seminorm(const CohomologyClass& a, const BundleAutomorphism& g,
                        std::size_t grid_resolution, SeminormMode mode);

enum class CertificateVerdict { UndistortedCertified, NoCertificate };

const char* to_string(CertificateVerdict v);

struct GeneratorBound {
  std::string name;
  double upper_bound = 0.0;
  bool rigorous = false;
};

struct UndistortionCertificate {
  std::vector<GeneratorBound> generator_bounds;
  double constant_C = 0.0;
  double rot_value = 0.0;
  double rot_error = 0.0;
  Verdict rot_verdict = Verdict::NotConverged;
  double tau_lower_bound = 0.0;
  bool rigorous = false;
  CertificateVerdict verdict = CertificateVerdict::NoCertificate;
};

struct CertificateOptions {
  std::size_t grid_resolution = 256;
  LocalOptions local;
};

/// tau(g) >= |rot_x(g)| / C with C = max_s ||s|| over the symmetrized set S.
/// Throws NotConvergedError if rot_x(g) does not converge.
UndistortionCertificate undistortion_certificate(const CohomologyClass& a, const BundleAutomorphism& g,
                                                 const std::vector<BundleAutomorphism>& generators,
                                                 const TorusPoint& x, const CertificateOptions& options = {});

/// (x, k) -> (M x + v, k + c) with exact rational v and c.
class ExactAffineAutomorphism {
 public:
  ExactAffineAutomorphism(IntMatrix matrix, std::vector<Rational> translation, Rational fiber_shift);

  static ExactAffineAutomorphism identity(std::size_t dim);
  static ExactAffineAutomorphism fiber_translation(std::size_t dim, Rational r);
  static ExactAffineAutomorphism rotation(std::vector<Rational> v);

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const IntMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<Rational>& translation() const noexcept { return translation_; }
  const Rational& fiber_shift() const noexcept { return fiber_shift_; }

  bool preserves(const CohomologyClass& a) const;

  /// Translation reduced to [0,1)^n with the deck shift carried into the fiber.
  ExactAffineAutomorphism canonical(const CohomologyClass& a) const;
  /// Hash key of the canonical form.
  std::string key(const CohomologyClass& a) const;

  /// Floating-point counterpart for the dynamics routines.
  BundleAutomorphism to_bundle() const;

  bool operator==(const ExactAffineAutomorphism& rhs) const;

 private:
  IntMatrix matrix_;
  std::vector<Rational> translation_;
  Rational fiber_shift_;
};

/// f o g = (M_f M_g, M_f v_g + v_f, c_f + c_g)
ExactAffineAutomorphism compose(const ExactAffineAutomorphism& f, const ExactAffineAutomorphism& g,
                                const CohomologyClass& a);
ExactAffineAutomorphism inverse(const ExactAffineAutomorphism& f);
ExactAffineAutomorphism power(const ExactAffineAutomorphism& f, unsigned k, const CohomologyClass& a);

/// S together with the inverses not already present.
std::vector<ExactAffineAutomorphism> symmetrize(const std::vector<ExactAffineAutomorphism>& generators,
                                                const CohomologyClass& a);

/// Breadth-first ball in the Cayley graph of <S>, grown on demand.
class WordMetric {
 public:
  WordMetric(CohomologyClass a, std::vector<ExactAffineAutomorphism> generators,
             std::size_t radius = 12, std::size_t ball_cap = 2'000'000);

  /// |g|_S if it is at most the radius; nullopt otherwise. Throws
  /// PreconditionError if the ball outgrows ball_cap first.
  std::optional<std::size_t> norm(const ExactAffineAutomorphism& g);

  std::size_t explored() const noexcept { return distance_.size(); }
  std::size_t radius() const noexcept { return radius_; }

 private:
  bool grow_one_layer();

  CohomologyClass a_;
  std::vector<ExactAffineAutomorphism> letters_;
  std::size_t radius_;
  std::size_t ball_cap_;
  std::size_t reached_ = 0;
  std::unordered_map<std::string, std::size_t> distance_;
  std::vector<ExactAffineAutomorphism> frontier_;
};

/// One-shot BFS query.
std::optional<std::size_t> word_norm_bfs(const CohomologyClass& a,
                                         const std::vector<ExactAffineAutomorphism>& generators,
                                         const ExactAffineAutomorphism& g, std::size_t radius = 12,
                                         std::size_t ball_cap = 2'000'000);

struct TranslationLengthReport {
  /// (n, |g^n|_S) for every power reached.
  std::vector<std::pair<std::size_t, std::size_t>> norms;
  std::vector<double> ratios;
  /// min_n |g^n|/n, the subadditive estimate of tau.
  std::optional<double> estimate;
  bool partial = false;
  std::optional<double> certificate_lower_bound;
};

TranslationLengthReport translation_length_estimate(const CohomologyClass& a,
                                                    const std::vector<ExactAffineAutomorphism>& generators,
                                                    const ExactAffineAutomorphism& g, std::size_t max_power,
                                                    std::size_t radius = 12,
                                                    std::optional<double> certificate_lower_bound = std::nullopt);

}  // namespace tnum
