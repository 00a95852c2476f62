#pragma once

// Euler number of Seifert data and a homomorphism pi_1 -> A that is nonzero on
// the regular fiber class h.
//
// Presentation: generators a_i, b_i (i <= genus), q_j, h with h central,
// prod [a_i, b_i] prod q_j = 1 and one relation per exceptional fiber.

#include <cstdint>
#include <string>
#include <vector>

#include "tnum/rational.hpp"

namespace tnum {

struct SeifertPair {
  std::int64_t alpha = 1;
  std::int64_t beta = 0;
};

struct SeifertData {
  std::int64_t genus = 0;
  std::vector<SeifertPair> pairs;

  /// Throws ValidationError on genus < 0, an empty list, or alpha = 0.
  void validate() const;
};

/// e = -sum beta_j / alpha_j
Rational euler_number(const SeifertData& data);

/// HPositive: q_j^alpha_j h^beta_j = 1.  HNegative: q_j^alpha_j = h^beta_j.
enum class RelationConvention { HPositive, HNegative };

const char* to_string(RelationConvention c);

struct FiberClassHomomorphism {
  std::vector<Rational> values_q;
  Rational value_h;
  /// phi(a_i), phi(b_i); always zero.
  std::vector<Rational> values_ab;
  RelationConvention convention = RelationConvention::HPositive;
  /// True when phi(q_j) = +alpha beta_j / alpha_j was the sign that verified.
  bool literal_sign = false;
};

/// Every entry must be exactly zero for a homomorphism.
struct RelationResiduals {
  /// alpha_j phi(q_j) + beta_j phi(h) (HPositive) or minus (HNegative).
  std::vector<Rational> fiber_relations;
  /// sum_j phi(q_j); commutators vanish in an abelian target.
  Rational long_relation;
  /// [h, a_i], [h, b_i], [h, q_j]; vacuous in an abelian target.
  std::vector<Rational> centrality;

  bool all_zero() const;
  Rational max_abs() const;
};

RelationResiduals verify_homomorphism(const SeifertData& data, const FiberClassHomomorphism& phi);

/// phi(h) = prod alpha_j, phi(q_j) = sign * phi(h) beta_j / alpha_j with the
/// sign fixed by the convention. No Euler-number check.
FiberClassHomomorphism candidate_homomorphism(const SeifertData& data, RelationConvention convention,
                                              bool literal_sign);

/// Refuses (PreconditionError) when e != 0, quoting the sum. Tries the
/// preferred convention first, then the other one, and returns the first
/// candidate whose residuals vanish.
FiberClassHomomorphism construct_h1_class(const SeifertData& data,
                                          RelationConvention preferred = RelationConvention::HPositive);

/// Builds the candidate for the preferred convention even when e != 0.
FiberClassHomomorphism force_h1_class(const SeifertData& data,
                                      RelationConvention convention = RelationConvention::HPositive);

/// Seeded random data with e = 0: pairs (alpha, beta) drawn freely, then
/// balanced with a final pair. Each dataset has 1..max_pairs pairs.
std::vector<SeifertData> euler_zero_corpus(std::size_t count, std::uint64_t seed, std::size_t max_pairs = 5);

}  // namespace tnum
