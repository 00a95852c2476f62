#include "tnum/seifert.hpp"

#include <random>

#include "tnum/errors.hpp"

namespace tnum {

void SeifertData::validate() const {
  if (genus < 0) {
    throw ValidationError("genus " + std::to_string(genus) +
                          " < 0: non-orientable bases are not supported");
  }
  if (pairs.empty()) throw ValidationError("Seifert data needs at least one pair (alpha, beta)");
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    if (pairs[j].alpha == 0) throw ValidationError("alpha_" + std::to_string(j + 1) + " is zero");
  }
}

Rational euler_number(const SeifertData& data) {
  data.validate();
  Rational sum = 0;
  for (const auto& p : data.pairs) sum += ratio(p.beta, p.alpha);
  sum.canonicalize();
  return -sum;
}

const char* to_string(RelationConvention c) {
  return c == RelationConvention::HPositive ? "q^alpha h^beta = 1" : "q^alpha = h^beta";
}

bool RelationResiduals::all_zero() const { return max_abs() == 0; }

Rational RelationResiduals::max_abs() const {
  Rational worst = abs(long_relation);
  for (const auto& r : fiber_relations) worst = std::max(worst, Rational(abs(r)));
  for (const auto& r : centrality) worst = std::max(worst, Rational(abs(r)));
  return worst;
}

RelationResiduals verify_homomorphism(const SeifertData& data, const FiberClassHomomorphism& phi) {
  data.validate();
  require_same_dim(data.pairs.size(), phi.values_q.size(), "phi(q_j)");
  require_same_dim(static_cast<std::size_t>(2 * data.genus), phi.values_ab.size(), "phi(a_i), phi(b_i)");
  const int sign = phi.convention == RelationConvention::HPositive ? 1 : -1;

  RelationResiduals r;
  r.long_relation = 0;
  for (std::size_t j = 0; j < data.pairs.size(); ++j) {
    const auto& p = data.pairs[j];
    Rational res = Rational(mpz_class(p.alpha)) * phi.values_q[j] +
                   sign * Rational(mpz_class(p.beta)) * phi.value_h;
    r.fiber_relations.push_back(res);
    r.long_relation += phi.values_q[j];
  }
  // Commutators in an abelian target: phi(x) + phi(h) - phi(x) - phi(h).
  auto commutator = [&](const Rational& x) { return Rational(x + phi.value_h - x - phi.value_h); };
  for (const auto& v : phi.values_ab) r.centrality.push_back(commutator(v));
  for (const auto& v : phi.values_q) r.centrality.push_back(commutator(v));
  return r;
}

FiberClassHomomorphism candidate_homomorphism(const SeifertData& data, RelationConvention convention,
                                              bool literal_sign) {
  data.validate();
  mpz_class product = 1;
  for (const auto& p : data.pairs) product *= p.alpha;

  FiberClassHomomorphism phi;
  phi.convention = convention;
  phi.literal_sign = literal_sign;
  phi.value_h = Rational(product);
  phi.values_ab.assign(static_cast<std::size_t>(2 * data.genus), Rational(0));
  for (const auto& p : data.pairs) {
    Rational v = phi.value_h * ratio(p.beta, p.alpha);
    v.canonicalize();
    phi.values_q.push_back(literal_sign ? v : Rational(-v));
  }
  return phi;
}

FiberClassHomomorphism construct_h1_class(const SeifertData& data, RelationConvention preferred) {
  const Rational e = euler_number(data);
  if (e != 0) {
    throw PreconditionError("Euler number is " + e.get_str() + " (-sum beta_j/alpha_j); it must be 0");
  }
  const RelationConvention other = preferred == RelationConvention::HPositive ? RelationConvention::HNegative
                                                                              : RelationConvention::HPositive;
  for (RelationConvention c : {preferred, other}) {
    for (bool literal : {true, false}) {
      FiberClassHomomorphism phi = candidate_homomorphism(data, c, literal);
      if (verify_homomorphism(data, phi).all_zero()) return phi;
    }
  }
  throw InternalError("no sign convention satisfies the relations although e = 0");
}

FiberClassHomomorphism force_h1_class(const SeifertData& data, RelationConvention convention) {
  // Under HPositive the fiber relations force phi(q_j) = -phi(h) beta_j / alpha_j.
  return candidate_homomorphism(data, convention, convention == RelationConvention::HNegative);
}

std::vector<SeifertData> euler_zero_corpus(std::size_t count, std::uint64_t seed, std::size_t max_pairs) {
  if (max_pairs < 1) throw ValidationError("max_pairs must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> genus_dist(0, 3);
  std::uniform_int_distribution<std::int64_t> alpha_dist(1, 7);
  std::uniform_int_distribution<std::int64_t> beta_dist(-6, 6);
  std::uniform_int_distribution<std::size_t> size_dist(0, max_pairs - 1);

  std::vector<SeifertData> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SeifertData d;
    d.genus = genus_dist(rng);
    const std::size_t free_pairs = size_dist(rng);
    Rational sum = 0;
    for (std::size_t j = 0; j < free_pairs; ++j) {
      std::int64_t alpha = alpha_dist(rng);
      if (rng() & 1) alpha = -alpha;
      const std::int64_t beta = beta_dist(rng);
      d.pairs.push_back({alpha, beta});
      sum += ratio(beta, alpha);
    }
    sum.canonicalize();
    // beta / alpha = -sum closes the Euler number.
    d.pairs.push_back({sum.get_den().get_si(), -sum.get_num().get_si()});
    corpus.push_back(std::move(d));
  }
  return corpus;
}

}  // namespace tnum
