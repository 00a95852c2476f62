#include "tnum/torus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tnum/errors.hpp"

namespace tnum {

const char* to_string(Coefficients kind) {
  return kind == Coefficients::Integer ? "integer" : "real";
}

CohomologyClass CohomologyClass::integral(std::vector<std::int64_t> entries) {
  if (entries.empty()) throw ValidationError("cohomology class must have dimension >= 1");
  CohomologyClass a;
  a.kind_ = Coefficients::Integer;
  a.entries_.assign(entries.begin(), entries.end());
  a.integer_entries_ = std::move(entries);
  return a;
}

CohomologyClass CohomologyClass::real(std::vector<double> entries) {
  if (entries.empty()) throw ValidationError("cohomology class must have dimension >= 1");
  for (double e : entries) {
    if (!std::isfinite(e)) throw ValidationError("cohomology class entries must be finite");
  }
  CohomologyClass a;
  a.kind_ = Coefficients::Real;
  a.entries_ = std::move(entries);
  return a;
}

double CohomologyClass::pair(std::span<const double> v) const {
  require_same_dim(dim(), v.size(), "class pairing");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += entries_[i] * v[i];
  return s;
}

double CohomologyClass::l1_norm() const noexcept {
  double s = 0.0;
  for (double e : entries_) s += std::abs(e);
  return s;
}

double wrap_unit(double x, double* removed) {
  double m = std::floor(x);
  double r = x - m;
  // x slightly below an integer can round up to exactly 1.
  if (r >= 1.0) {
    r -= 1.0;
    m += 1.0;
  }
  if (removed) *removed = m;
  return r;
}

TorusPoint::TorusPoint(Vec coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ValidationError("torus point must have dimension >= 1");
  for (double& c : coords_) {
    if (!std::isfinite(c)) throw ValidationError("torus point coordinates must be finite");
    c = wrap_unit(c);
  }
}

double torus_distance(std::span<const double> x, std::span<const double> y) {
  require_same_dim(x.size(), y.size(), "torus distance");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double diff = wrap_unit(x[i] - y[i]);
    d = std::max(d, std::min(diff, 1.0 - diff));
  }
  return d;
}

BundlePoint canonicalize(const CohomologyClass& a, const BundlePoint& p) {
  require_same_dim(a.dim(), p.cover_point.size(), "canonicalize");
  BundlePoint out;
  out.cover_point.resize(p.cover_point.size());
  Vec shift(p.cover_point.size());
  for (std::size_t i = 0; i < shift.size(); ++i) {
    out.cover_point[i] = wrap_unit(p.cover_point[i], &shift[i]);
  }
  out.fiber = p.fiber + a.pair(shift);
  return out;
}

// --- IntMatrix ---------------------------------------------------------------

IntMatrix::IntMatrix(std::size_t n, std::vector<std::int64_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0 || entries_.size() != n_ * n_) {
    throw ValidationError("matrix must be square with n >= 1");
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  std::vector<std::int64_t> e(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1;
  return IntMatrix(n, std::move(e));
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  require_same_dim(n_, rhs.n_, "matrix product");
  std::vector<std::int64_t> e(n_ * n_, 0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t c = 0; c < n_; ++c) e[r * n_ + c] += (*this)(r, k) * rhs(k, c);
  return IntMatrix(n_, std::move(e));
}

Vec IntMatrix::apply(std::span<const double> v) const {
  require_same_dim(n_, v.size(), "matrix apply");
  Vec out(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out[r] += static_cast<double>((*this)(r, c)) * v[c];
  return out;
}

std::vector<std::int64_t> IntMatrix::apply(std::span<const std::int64_t> v) const {
  require_same_dim(n_, v.size(), "matrix apply");
  std::vector<std::int64_t> out(n_, 0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

std::vector<std::int64_t> IntMatrix::transpose_apply(std::span<const std::int64_t> v) const {
  require_same_dim(n_, v.size(), "matrix transpose apply");
  std::vector<std::int64_t> out(n_, 0);
  for (std::size_t c = 0; c < n_; ++c)
    for (std::size_t r = 0; r < n_; ++r) out[c] += (*this)(r, c) * v[r];
  return out;
}

Vec IntMatrix::transpose_apply(std::span<const double> v) const {
  require_same_dim(n_, v.size(), "matrix transpose apply");
  Vec out(n_, 0.0);
  for (std::size_t c = 0; c < n_; ++c)
    for (std::size_t r = 0; r < n_; ++r) out[c] += static_cast<double>((*this)(r, c)) * v[r];
  return out;
}

std::int64_t IntMatrix::determinant() const {
  // Bareiss fraction-free elimination; every intermediate is an exact minor.
  std::vector<__int128> m(entries_.begin(), entries_.end());
  const std::size_t n = n_;
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap * n + k] == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m[k * n + c], m[swap * n + c]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
    prev = m[k * n + k];
  }
  return static_cast<std::int64_t>(sign * m[n * n - 1]);
}

IntMatrix IntMatrix::inverse() const {
  const std::int64_t det = determinant();
  if (det != 1 && det != -1) {
    throw PreconditionError("matrix is not invertible over Z (det = " + std::to_string(det) + ")");
  }
  // Cofactor expansion: inverse = adj / det, small n only.
  const std::size_t n = n_;
  std::vector<std::int64_t> inv(n * n);
  if (n == 1) return IntMatrix(1, {det});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::int64_t> minor;
      minor.reserve((n - 1) * (n - 1));
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (j != c) minor.push_back((*this)(i, j));
      }
      std::int64_t cof = IntMatrix(n - 1, std::move(minor)).determinant();
      if ((r + c) % 2 == 1) cof = -cof;
      inv[c * n + r] = cof * det;
    }
  }
  return IntMatrix(n, std::move(inv));
}

bool IntMatrix::is_identity() const { return *this == identity(n_); }

double IntMatrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n_; ++c) s += std::abs(static_cast<double>((*this)(r, c)));
    best = std::max(best, s);
  }
  return best;
}

double IntMatrix::inf_norm_minus_identity() const {
  double best = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n_; ++c)
      s += std::abs(static_cast<double>((*this)(r, c) - (r == c ? 1 : 0)));
    best = std::max(best, s);
  }
  return best;
}

// --- LiftedMap ---------------------------------------------------------------

LiftedMap::LiftedMap(std::size_t dim, Evaluator evaluator, IntMatrix matrix, MapInfo info)
    : dim_(dim),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      matrix_(std::make_shared<const IntMatrix>(std::move(matrix))),
      info_(std::make_shared<const MapInfo>(std::move(info))) {
  require_same_dim(dim_, matrix_->dim(), "lifted map matrix");
  const std::int64_t det = matrix_->determinant();
  if (det != 1 && det != -1) {
    throw ValidationError("lifted map matrix must satisfy |det M| = 1, got det = " +
                          std::to_string(det));
  }
}

std::optional<double> LiftedMap::displacement_lipschitz_bound() const noexcept {
  if (displacement_lipschitz_) return displacement_lipschitz_;
  if (lipschitz_) return 1.0 + *lipschitz_;
  return std::nullopt;
}

Vec LiftedMap::jacobian(std::span<const double> x) const {
  require_same_dim(dim_, x.size(), "jacobian");
  if (jacobian_) return jacobian_(x);
  constexpr double step = 1e-6;
  Vec jac(dim_ * dim_);
  Vec probe(x.begin(), x.end());
  for (std::size_t c = 0; c < dim_; ++c) {
    probe[c] = x[c] + step;
    Vec plus = (*this)(probe);
    probe[c] = x[c] - step;
    Vec minus = (*this)(probe);
    probe[c] = x[c];
    for (std::size_t r = 0; r < dim_; ++r) jac[r * dim_ + c] = (plus[r] - minus[r]) / (2.0 * step);
  }
  return jac;
}

LiftedMap LiftedMap::inverse() const {
  if (!inverse_) throw PreconditionError("map '" + info_->family + "' has no registered inverse");
  return inverse_();
}

LiftedMap LiftedMap::with_lipschitz(std::optional<double> map_bound,
                                    std::optional<double> displacement_bound) const {
  LiftedMap copy = *this;
  copy.lipschitz_ = map_bound;
  copy.displacement_lipschitz_ = displacement_bound;
  return copy;
}

LiftedMap LiftedMap::with_jacobian(Jacobian jacobian) const {
  LiftedMap copy = *this;
  copy.jacobian_ = std::move(jacobian);
  return copy;
}

LiftedMap LiftedMap::with_inverse(std::function<LiftedMap()> make_inverse) const {
  LiftedMap copy = *this;
  copy.inverse_ = std::move(make_inverse);
  return copy;
}

LiftedMap compose(const LiftedMap& g, const LiftedMap& h) {
  require_same_dim(g.dim(), h.dim(), "compose");
  const std::size_t n = g.dim();
  MapInfo info{"compose(" + g.info().family + "," + h.info().family + ")", {}};
  LiftedMap out(
      n, [g, h](std::span<const double> x) { return g(h(x)); }, g.matrix() * h.matrix(),
      std::move(info));

  std::optional<double> lip;
  if (g.lipschitz_bound() && h.lipschitz_bound()) lip = *g.lipschitz_bound() * *h.lipschitz_bound();
  std::optional<double> disp;
  // g h - id = (g - id) h + (h - id)
  if (g.displacement_lipschitz_bound() && h.displacement_lipschitz_bound() && h.lipschitz_bound()) {
    disp = *g.displacement_lipschitz_bound() * *h.lipschitz_bound() +
           *h.displacement_lipschitz_bound();
  }
  out = out.with_lipschitz(lip, disp);

  if (g.has_jacobian() && h.has_jacobian()) {
    out = out.with_jacobian([g, h, n](std::span<const double> x) {
      Vec jh = h.jacobian(x);
      Vec jg = g.jacobian(h(x));
      Vec j(n * n, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t c = 0; c < n; ++c) j[r * n + c] += jg[r * n + k] * jh[k * n + c];
      return j;
    });
  }
  if (g.has_inverse() && h.has_inverse()) {
    out = out.with_inverse([g, h] { return compose(h.inverse(), g.inverse()); });
  }
  return out;
}

bool preserves_class(const LiftedMap& g, const CohomologyClass& a) {
  require_same_dim(a.dim(), g.dim(), "preserves_class");
  if (a.is_integral()) {
    auto image = g.matrix().transpose_apply(a.integer_entries());
    return std::equal(image.begin(), image.end(), a.integer_entries().begin());
  }
  Vec image = g.matrix().transpose_apply(a.entries());
  return std::equal(image.begin(), image.end(), a.entries().begin());
}

void require_preserves(const LiftedMap& g, const CohomologyClass& a, const char* what) {
  if (!preserves_class(g, a)) {
    throw PreconditionError(std::string(what) + ": map '" + g.info().family +
                            "' does not preserve the cohomology class (M^T a != a)");
  }
}

EquivarianceReport check_equivariance(const LiftedMap& g, std::size_t samples,
                                      std::uint64_t seed, double tolerance) {
  if (samples == 0) throw ValidationError("check_equivariance needs samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_int_distribution<int> shift(-3, 3);
  const std::size_t n = g.dim();

  EquivarianceReport report;
  report.samples = samples;
  report.tolerance = tolerance;
  Vec x(n), xm(n), m(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = coord(rng);
      m[i] = shift(rng);
      xm[i] = x[i] + m[i];
    }
    Vec gx = g(x);
    Vec gxm = g(xm);
    Vec mm = g.matrix().apply(m);
    for (std::size_t i = 0; i < n; ++i) {
      report.max_residual = std::max(report.max_residual, std::abs(gxm[i] - gx[i] - mm[i]));
    }
  }
  report.ok = report.max_residual <= tolerance;
  return report;
}

}  // namespace tnum
