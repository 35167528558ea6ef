#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadtmf/error.hpp"
#include "quadtmf/linalg.hpp"

namespace quadtmf {

/// Truncated Laurent series sum_{n >= lowest} c_n q^n over Q, known for
/// exponents in [lowest, truncation). Optionally tagged with a modular weight.
class QSeries {
 public:
  QSeries() = default;
  QSeries(long lowest, std::vector<Rational> coeffs, std::optional<Rational> weight = std::nullopt);

  static QSeries from_integers(long lowest, const std::vector<BigInt>& coeffs,
                               std::optional<Rational> weight = std::nullopt);
  /// c * q^exponent, known up to `truncation`.
  static QSeries monomial(long exponent, const Rational& c, long truncation);
  static QSeries one(long truncation) { return monomial(0, 1, truncation); }

  long lowest() const noexcept { return lowest_; }
  long truncation() const noexcept { return lowest_ + static_cast<long>(coeffs_.size()); }
  /// Coefficient of q^n: zero below lowest(), OutOfRange at or above truncation().
  Rational coefficient(long n) const;
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  const std::optional<Rational>& weight() const noexcept { return weight_; }
  QSeries with_weight(std::optional<Rational> w) const;

  /// Exponent of the first nonzero coefficient, or truncation() when none is known.
  long valuation() const;
  bool is_integral() const;
  /// Drops leading zeros so that lowest() == valuation().
  QSeries normalized() const;
  QSeries truncated(long truncation) const;

  QSeries operator-() const;
  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  /// Product; known window [la+lb, min(Na+lb, Nb+la)); weights add when both are tagged.
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  QSeries scaled(const Rational& c) const;

  /// Throws NonUnitLeading when the coefficient at lowest() vanishes.
  QSeries invert_unit() const;
  /// Integer power; negative exponents go through invert_unit().
  QSeries pow(long k) const;

  /// Same known window after normalization and equal coefficients; weights ignored.
  friend bool operator==(const QSeries& a, const QSeries& b);

  std::string to_string(std::size_t max_terms = 8) const;

 private:
  long lowest_ = 0;
  std::vector<Rational> coeffs_;
  std::optional<Rational> weight_;
};

/// Delta = q * prod_{n>=1} (1 - q^n)^24 on [1, truncation), weight 12. Requires truncation >= 2.
QSeries delta_series(long truncation);

/// 1 + 240 sum sigma_3(n) q^n on [0, truncation), weight 4.
QSeries eisenstein_e4(long truncation);

/// Sum of k-th powers of the positive divisors of n.
BigInt divisor_sigma(unsigned k, unsigned long n);

}  // namespace quadtmf
