#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "quadtmf/bilform.hpp"
#include "quadtmf/error.hpp"
#include "quadtmf/linalg.hpp"

namespace quadtmf {

/// Finite abelian group Z/d_1 + ... + Z/d_k (d_i | d_{i+1}, d_i >= 2) with a
/// symmetric Q/Z-valued pairing given on the cyclic generators.
class TorsionLinkingForm {
 public:
  TorsionLinkingForm() = default;
  /// Entries of `pairing` are reduced into [0,1). Throws ValidationError when
  /// shapes disagree, the chain is broken, the matrix is asymmetric, or some
  /// d_i * pairing(i,j) is not integral.
  TorsionLinkingForm(std::vector<BigInt> factors, RatMatrix pairing);

  /// <p/q> on Z/q.
  static TorsionLinkingForm cyclic(const BigInt& order, const Rational& self_pairing);

  const std::vector<BigInt>& factors() const noexcept { return factors_; }
  const RatMatrix& pairing() const noexcept { return pairing_; }
  std::size_t size() const noexcept { return factors_.size(); }
  bool trivial() const noexcept { return factors_.empty(); }
  BigInt order() const;

  /// lambda(x, y) in [0,1) for coordinate vectors with respect to the generators.
  Rational evaluate(const std::vector<BigInt>& x, const std::vector<BigInt>& y) const;

  TorsionLinkingForm negated() const;

  /// Entrywise equality in the generator basis (not isomorphism).
  friend bool operator==(const TorsionLinkingForm&, const TorsionLinkingForm&) = default;

 private:
  std::vector<BigInt> factors_;
  RatMatrix pairing_;
};

/// Orthogonal sum; the result is rediagonalized into invariant-factor form.
TorsionLinkingForm orthogonal_sum(const TorsionLinkingForm& a, const TorsionLinkingForm& b);

/// x mod 1, in [0,1).
Rational mod_one(const Rational& x);

struct DiscriminantData {
  std::size_t free_rank = 0;
  TorsionLinkingForm torsion;

  const std::vector<BigInt>& factors() const noexcept { return torsion.factors(); }
};

/// When set, every linking value produced by discriminant() is negated.
void set_linking_orientation_negated(bool negated);
bool linking_orientation_negated();

/// Cokernel of the nondegenerate core with lambda(x, y) = x^T C^{-1} y mod 1.
DiscriminantData discriminant(const BilinearForm& b);

/// Same as discriminant(), also returning the generator lifts: column i of
/// `lifts` is a vector w_i in Q^r (coordinates of the core) with C w_i integral
/// and [C w_i] generating the i-th cyclic factor.
struct DiscriminantWithLifts {
  DiscriminantData data;
  RadicalSplit split;
  RatMatrix lifts;
};
DiscriminantWithLifts discriminant_with_lifts(const BilinearForm& b);

inline constexpr std::uint64_t kDefaultIsomorphismBudget = 10000;

/// Exhaustive isomorphism test for torsion forms. Throws BudgetExceeded when
/// the group order exceeds `budget`.
Decision torsion_forms_isomorphic(const TorsionLinkingForm& a, const TorsionLinkingForm& b,
                                  std::uint64_t budget = kDefaultIsomorphismBudget);

/// Equal nullity and isomorphic torsion linking forms. Budget exhaustion
/// yields Inconclusive.
Decision pm_equivalent(const BilinearForm& b, const BilinearForm& c,
                       std::uint64_t budget = kDefaultIsomorphismBudget);

/// "p/q" with the fraction in lowest terms ("0" for zero).
std::string format_rational(const Rational& x);

}  // namespace quadtmf
