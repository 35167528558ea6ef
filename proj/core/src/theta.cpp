#include "quadtmf/theta.hpp"

#include "quadtmf/lattice_enum.hpp"

namespace quadtmf {

namespace {

QSeries block_theta(const BilinearForm& b, long truncation) {
  const auto counts = ShortVectorEnumerator(b).norm_counts(2 * (truncation - 1));
  std::vector<BigInt> c(static_cast<std::size_t>(truncation));
  for (long n = 0; n < truncation; ++n) c[static_cast<std::size_t>(n)] = BigInt(std::to_string(counts[2 * n]));
  return QSeries::from_integers(0, c);
}

}  // namespace

ThetaSeries theta_series(const BilinearForm& b, long truncation) {
  if (!is_positive_definite(b)) throw Error(ErrorCode::NotPositiveDefinite, "theta series needs a positive definite form");
  if (!b.is_even()) throw Error(ErrorCode::NotEven, "theta series needs an even form");
  if (truncation < 1) throw Error(ErrorCode::PreconditionFailed, "truncation must be at least 1");
  QSeries theta = QSeries::one(truncation);
  for (const auto& comp : orthogonal_components(b)) theta = theta * block_theta(restrict_form(b, comp), truncation);
  ThetaSeries out;
  Rational weight(static_cast<long>(b.rank()), 2);
  weight.canonicalize();
  out.series = theta.with_weight(weight);
  out.label = b.label();
  out.rank = b.rank();
  return out;
}

EdgeImage edge_image(const BilinearForm& b, long truncation) {
  if (!b.is_even()) throw Error(ErrorCode::PreconditionFailed, "edge image needs an even form");
  if (!is_positive_definite(b)) throw Error(ErrorCode::PreconditionFailed, "edge image needs a positive definite form");
  if (!signature(b).unimodular) throw Error(ErrorCode::PreconditionFailed, "edge image needs a unimodular form");
  if (b.rank() % 8 != 0) throw Error(ErrorCode::PreconditionFailed, "edge image needs rank divisible by 8");
  const long d = static_cast<long>(b.rank());
  const long k = d / 8;
  EdgeImage out;
  out.rank = b.rank();
  out.pole_order = k;
  if (truncation <= -k) {
    out.series = QSeries(-k, {}, Rational(-d));
    return out;
  }
  const QSeries theta = theta_series(b, truncation + k).series;
  const QSeries delta_power = delta_series(truncation + k + 1).pow(-k);
  out.series = delta_power * theta;
  if (out.series.weight() != Rational(-d))
    throw std::logic_error("edge image weight bookkeeping is inconsistent");
  return out;
}

}  // namespace quadtmf
