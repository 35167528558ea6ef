#include "quadtmf/qseries.hpp"

#include <algorithm>

namespace quadtmf {

namespace {

std::optional<Rational> add_weights(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (a && b) return *a + *b;
  return std::nullopt;
}

std::optional<Rational> common_weight(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (a && b && *a == *b) return a;
  return std::nullopt;
}

}  // namespace

QSeries::QSeries(long lowest, std::vector<Rational> coeffs, std::optional<Rational> weight)
    : lowest_(lowest), coeffs_(std::move(coeffs)), weight_(std::move(weight)) {}

QSeries QSeries::from_integers(long lowest, const std::vector<BigInt>& coeffs, std::optional<Rational> weight) {
  std::vector<Rational> c(coeffs.begin(), coeffs.end());
  return QSeries(lowest, std::move(c), std::move(weight));
}

QSeries QSeries::monomial(long exponent, const Rational& c, long truncation) {
  if (truncation <= exponent) return QSeries(exponent, {});
  std::vector<Rational> v(static_cast<std::size_t>(truncation - exponent));
  v[0] = c;
  return QSeries(exponent, std::move(v));
}

Rational QSeries::coefficient(long n) const {
  if (n < lowest_) return 0;
  if (n >= truncation())
    throw Error(ErrorCode::OutOfRange,
                "coefficient of q^" + std::to_string(n) + " lies beyond the truncation " + std::to_string(truncation()));
  return coeffs_[static_cast<std::size_t>(n - lowest_)];
}

QSeries QSeries::with_weight(std::optional<Rational> w) const {
  QSeries s = *this;
  s.weight_ = std::move(w);
  return s;
}

long QSeries::valuation() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return lowest_ + static_cast<long>(i);
  return truncation();
}

bool QSeries::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.get_den() == 1; });
}

QSeries QSeries::normalized() const {
  const long v = valuation();
  std::vector<Rational> c(coeffs_.begin() + (v - lowest_), coeffs_.end());
  return QSeries(v, std::move(c), weight_);
}

QSeries QSeries::truncated(long n) const {
  if (n >= truncation()) return *this;
  if (n <= lowest_) return QSeries(lowest_, {}, weight_);
  return QSeries(lowest_, std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + (n - lowest_)), weight_);
}

QSeries QSeries::operator-() const { return scaled(-1); }

QSeries QSeries::scaled(const Rational& c) const {
  QSeries s = *this;
  for (auto& x : s.coeffs_) x *= c;
  return s;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  const long lo = std::min(a.lowest_, b.lowest_);
  const long hi = std::min(a.truncation(), b.truncation());
  std::vector<Rational> c(static_cast<std::size_t>(std::max(0L, hi - lo)));
  for (long n = lo; n < hi; ++n) c[static_cast<std::size_t>(n - lo)] = a.coefficient(n) + b.coefficient(n);
  return QSeries(lo, std::move(c), common_weight(a.weight_, b.weight_));
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a, const QSeries& b) {
  const long lo = a.lowest_ + b.lowest_;
  const long hi = std::min(a.truncation() + b.lowest_, b.truncation() + a.lowest_);
  const std::size_t len = static_cast<std::size_t>(std::max(0L, hi - lo));
  std::vector<Rational> c(len);
  for (std::size_t i = 0; i < a.coeffs_.size() && i < len; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; i + j < len && j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return QSeries(lo, std::move(c), add_weights(a.weight_, b.weight_));
}

QSeries QSeries::invert_unit() const {
  if (coeffs_.empty() || coeffs_[0] == 0)
    throw Error(ErrorCode::NonUnitLeading,
                "series has no invertible coefficient at its lowest exponent q^" + std::to_string(lowest_));
  const std::size_t len = coeffs_.size();
  std::vector<Rational> inv(len);
  const Rational lead_inv = 1 / coeffs_[0];
  inv[0] = lead_inv;
  for (std::size_t k = 1; k < len; ++k) {
    Rational acc = 0;
    for (std::size_t i = 1; i <= k; ++i) acc += coeffs_[i] * inv[k - i];
    inv[k] = -acc * lead_inv;
  }
  std::optional<Rational> w;
  if (weight_) w = -*weight_;
  return QSeries(-lowest_, std::move(inv), w);
}

QSeries QSeries::pow(long k) const {
  if (k < 0) return invert_unit().pow(-k);
  if (k == 0) {
    QSeries unit = one(static_cast<long>(coeffs_.size()));
    if (weight_) unit.weight_ = Rational(0);
    return unit;
  }
  std::optional<QSeries> result;
  QSeries base = *this;
  while (k > 0) {
    if (k & 1) result = result ? *result * base : base;
    k >>= 1;
    if (k) base = base * base;
  }
  return *result;
}

bool operator==(const QSeries& a, const QSeries& b) {
  const QSeries x = a.normalized(), y = b.normalized();
  return x.lowest_ == y.lowest_ && x.coeffs_ == y.coeffs_;
}

std::string QSeries::to_string(std::size_t max_terms) const {
  std::string s;
  std::size_t shown = 0;
  for (std::size_t i = 0; i < coeffs_.size() && shown < max_terms; ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    const long e = lowest_ + static_cast<long>(i);
    std::string mag = abs(c) == 1 && e != 0 ? "" : Rational(abs(c)).get_str();
    std::string mono = e == 0 ? "" : (e == 1 ? "q" : "q^" + std::to_string(e));
    if (e < 0) mono = "q^(" + std::to_string(e) + ")";
    std::string term = mag + (mag.empty() || mono.empty() ? "" : "*") + mono;
    if (s.empty())
      s = (c < 0 ? "-" : "") + term;
    else
      s += (c < 0 ? " - " : " + ") + term;
    ++shown;
  }
  if (s.empty()) s = "0";
  return s + " + O(q^" + std::to_string(truncation()) + ")";
}

QSeries delta_series(long truncation) {
  if (truncation < 2) throw Error(ErrorCode::PreconditionFailed, "delta_series needs truncation >= 2");
  // prod (1 - q^n)^24 on [0, truncation - 1), then shift by q.
  const long len = truncation - 1;
  std::vector<BigInt> p(static_cast<std::size_t>(len), BigInt(0));
  p[0] = 1;
  for (long n = 1; n < len; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (long k = len - 1; k >= n; --k) p[static_cast<std::size_t>(k)] -= p[static_cast<std::size_t>(k - n)];
  return QSeries::from_integers(1, p, Rational(12));
}

BigInt divisor_sigma(unsigned k, unsigned long n) {
  BigInt s = 0;
  for (unsigned long d = 1; d <= n; ++d)
    if (n % d == 0) {
      BigInt p;
      mpz_ui_pow_ui(p.get_mpz_t(), d, k);
      s += p;
    }
  return s;
}

QSeries eisenstein_e4(long truncation) {
  std::vector<BigInt> c(static_cast<std::size_t>(std::max(0L, truncation)));
  if (!c.empty()) c[0] = 1;
  for (long n = 1; n < truncation; ++n) c[static_cast<std::size_t>(n)] = 240 * divisor_sigma(3, static_cast<unsigned long>(n));
  return QSeries::from_integers(0, c, Rational(4));
}

}  // namespace quadtmf
