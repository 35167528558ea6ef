#pragma once

#include <cstddef>
#include <string>

#include "quadtmf/bilform.hpp"
#include "quadtmf/qseries.hpp"

namespace quadtmf {

/// Theta series of an even positive definite lattice: coefficient n counts
/// the vectors with b(v,v)/2 = n.
struct ThetaSeries {
  QSeries series;
  std::string label;
  std::size_t rank = 0;
};

/// Exact enumeration on [0, truncation). Orthogonal blocks of the Gram matrix
/// are enumerated separately and multiplied. Throws NotPositiveDefinite, NotEven.
ThetaSeries theta_series(const BilinearForm& b, long truncation);

/// Delta^{-d/8} * Theta_b on [-d/8, truncation) with weight tag -d. This is the
/// modular-form side of the conjectured edge image, which is only claimed up
/// to sign, so both flags are always set.
struct EdgeImage {
  QSeries series;
  std::size_t rank = 0;
  long pole_order = 0;
  bool conjectural = true;
  bool sign_ambiguous = true;
};

/// Throws PreconditionFailed naming the first violated hypothesis (even,
/// positive definite, unimodular, rank divisible by 8).
EdgeImage edge_image(const BilinearForm& b, long truncation);

}  // namespace quadtmf
