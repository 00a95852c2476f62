#pragma once

// The base space T^n, its universal cover R^n, and the flat bundle
// R^n x_{Z^n} A over T^n determined by a class a in H^1(T^n; A).
//
// The deck group Z^n acts on the bundle by m.(x, k) = (x + m, k - <a, m>),
// so theta([x, k]) = <a, x> + k is a well defined primitive of the standard
// cocycle sum_i a_i dx_i.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tnum {

using Vec = std::vector<double>;

enum class Coefficients { Integer, Real };

const char* to_string(Coefficients kind);

/// An element a of A^n, A in {Z, R}, standing for a class in H^1(T^n; A).
class CohomologyClass {
 public:
  static CohomologyClass integral(std::vector<std::int64_t> entries);
  static CohomologyClass real(std::vector<double> entries);

  Coefficients kind() const noexcept { return kind_; }
  bool is_integral() const noexcept { return kind_ == Coefficients::Integer; }
  std::size_t dim() const noexcept { return entries_.size(); }

  std::span<const double> entries() const noexcept { return entries_; }
  /// Only meaningful for integral classes; empty otherwise.
  std::span<const std::int64_t> integer_entries() const noexcept { return integer_entries_; }

  /// <a, v>
  double pair(std::span<const double> v) const;
  double l1_norm() const noexcept;

 private:
  CohomologyClass() = default;

  Coefficients kind_ = Coefficients::Real;
  std::vector<double> entries_;
  std::vector<std::int64_t> integer_entries_;
};

/// A point of T^n; coordinates are kept in [0, 1).
class TorusPoint {
 public:
  explicit TorusPoint(Vec coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// x mod 1 in [0, 1) together with the integer part that was removed.
double wrap_unit(double x, double* removed = nullptr);

/// Sup-norm distance on T^n.
double torus_distance(std::span<const double> x, std::span<const double> y);

/// A point [cover_point, fiber] of the bundle.
struct BundlePoint {
  Vec cover_point;
  double fiber = 0.0;
};

/// Reduces cover_point into [0,1)^n and carries the deck translation into the
/// fiber coordinate. Idempotent; preserves theta.
BundlePoint canonicalize(const CohomologyClass& a, const BundlePoint& p);

/// n x n integer matrix, row major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t n, std::vector<std::int64_t> entries);

  static IntMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }
  std::span<const std::int64_t> entries() const noexcept { return entries_; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix& rhs) const = default;

  Vec apply(std::span<const double> v) const;
  std::vector<std::int64_t> apply(std::span<const std::int64_t> v) const;
  std::vector<std::int64_t> transpose_apply(std::span<const std::int64_t> v) const;
  Vec transpose_apply(std::span<const double> v) const;

  std::int64_t determinant() const;
  /// Exact inverse; throws PreconditionError unless |det| = 1.
  IntMatrix inverse() const;
  bool is_identity() const;
  /// max_r sum_c |M_rc|
  double inf_norm() const;
  /// max_r sum_c |M_rc - delta_rc|
  double inf_norm_minus_identity() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> entries_;
};

struct MapInfo {
  std::string family;
  std::vector<std::pair<std::string, double>> params;
};

/// A homeomorphism of T^n given by a lift to R^n that is equivariant with
/// respect to an integer matrix: lift(x + m) = lift(x) + M m.
class LiftedMap {
 public:
  using Evaluator = std::function<Vec(std::span<const double>)>;
  /// Row-major n x n Jacobian of the lift.
  using Jacobian = std::function<Vec(std::span<const double>)>;

  LiftedMap(std::size_t dim, Evaluator evaluator, IntMatrix matrix, MapInfo info);

  std::size_t dim() const noexcept { return dim_; }
  const IntMatrix& matrix() const noexcept { return *matrix_; }
  const MapInfo& info() const noexcept { return *info_; }

  Vec operator()(std::span<const double> x) const { return (*evaluator_)(x); }

  /// Sup-norm Lipschitz constant of the lift, when known.
  std::optional<double> lipschitz_bound() const noexcept { return lipschitz_; }
  /// Sup-norm Lipschitz constant of lift - id. Falls back to 1 + L.
  std::optional<double> displacement_lipschitz_bound() const noexcept;

  bool has_jacobian() const noexcept { return static_cast<bool>(jacobian_); }
  /// Analytic Jacobian when registered, else central differences with step 1e-6.
  Vec jacobian(std::span<const double> x) const;

  bool has_inverse() const noexcept { return static_cast<bool>(inverse_); }
  LiftedMap inverse() const;

  LiftedMap with_lipschitz(std::optional<double> map_bound,
                           std::optional<double> displacement_bound) const;
  LiftedMap with_jacobian(Jacobian jacobian) const;
  LiftedMap with_inverse(std::function<LiftedMap()> make_inverse) const;

 private:
  std::size_t dim_;
  std::shared_ptr<const Evaluator> evaluator_;
  std::shared_ptr<const IntMatrix> matrix_;
  std::shared_ptr<const MapInfo> info_;
  std::optional<double> lipschitz_;
  std::optional<double> displacement_lipschitz_;
  Jacobian jacobian_;
  std::function<LiftedMap()> inverse_;
};

/// g o h
LiftedMap compose(const LiftedMap& g, const LiftedMap& h);

/// True iff M^T a = a (exact for integral classes).
bool preserves_class(const LiftedMap& g, const CohomologyClass& a);

/// Throws PreconditionError unless g preserves a.
void require_preserves(const LiftedMap& g, const CohomologyClass& a, const char* what);

struct EquivarianceReport {
  double max_residual = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  bool ok = true;
};

/// max over random (x, m) of |lift(x + m) - lift(x) - M m|_inf.
EquivarianceReport check_equivariance(const LiftedMap& g, std::size_t samples,
                                      std::uint64_t seed = 0x5eed,
                                      double tolerance = 1e-9);

}  // namespace tnum
