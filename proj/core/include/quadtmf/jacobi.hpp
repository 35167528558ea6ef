#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "quadtmf/bilform.hpp"

namespace quadtmf {

using Complex = std::complex<long double>;

struct Sl2 {
  long a = 1, b = 0, c = 0, d = 1;
  friend bool operator==(const Sl2&, const Sl2&) = default;
};
/// (tau, z) -> (tau, z + m1 * tau + m2).
struct LatticeShift {
  std::vector<long> m1, m2;
  friend bool operator==(const LatticeShift&, const LatticeShift&) = default;
};
using JacobiElement = std::variant<Sl2, LatticeShift>;

/// "I", "S", "T". Throws UnknownName.
Sl2 named_sl2(const std::string& name);
Sl2 operator*(const Sl2& x, const Sl2& y);
/// A uniformly drawn matrix of determinant 1 with entries in [-bound, bound].
Sl2 random_sl2(long bound, std::mt19937_64& rng);

struct JacobiPoint {
  Complex tau;
  std::vector<Complex> z;
};

/// g . (tau, z). Throws NotSL2, NotInUpperHalfPlane, DimensionMismatch.
JacobiPoint act(const JacobiElement& g, const JacobiPoint& p);

struct ThetaValue {
  Complex value;
  long double tail_bound = 0;
};

/// Truncated multivariable theta sum over the vectors with b(v,v)/2 <= R^2.
/// Arithmetic is long double; `precision` is the requested mantissa width
/// and must lie in [53, 64].
class JacobiEvaluator {
 public:
  /// Throws PreconditionFailed for R < 1 or an unsupported precision. The
  /// vector list is only built for positive definite b.
  JacobiEvaluator(BilinearForm b, double cutoff, int precision = 64);

  /// The smallest R with 2R^2 integral whose tail bound at every point is at
  /// most tol.
  static double required_cutoff(const BilinearForm& b, const std::vector<JacobiPoint>& points, long double tol);

  const BilinearForm& form() const noexcept { return b_; }
  double cutoff() const noexcept { return cutoff_; }
  int precision() const noexcept { return precision_; }
  std::size_t vector_count() const noexcept { return norms_.size(); }

  /// Geometric bound on the omitted terms at (tau, z).
  long double tail_bound(const JacobiPoint& p) const;

  /// Throws NotPositiveDefinite, NotInUpperHalfPlane, DimensionMismatch, and
  /// TailBoundTooLarge when the tail bound exceeds tol.
  ThetaValue theta_eval(const JacobiPoint& p, long double tol = 1e-10L) const;

 private:
  BilinearForm b_;
  double cutoff_;
  int precision_;
  std::vector<long double> pivots_;  // LDL pivots, positive definite case
  std::vector<long> coords_;         // vector_count() x rank
  std::vector<long> norms_;
};

/// Automorphy factor of the Looijenga cocycle: e^{pi i c b(z,z)/(c tau + d)}
/// for SL2 elements, e^{-2 pi i (b(z, m1) + b(m1, m1) tau / 2)} for shifts.
/// Throws NotSL2.
Complex cocycle_factor(const BilinearForm& b, const JacobiElement& g, const JacobiPoint& p);

struct TransformationReport {
  std::vector<long double> residuals;
  long double max_residual = 0;
  long double tolerance = 0;
  bool passed() const { return max_residual < tolerance; }
};

/// Residuals of theta(g.(tau,z)) = (c tau + d)^{d/2} * factor * theta(tau,z)
/// for SL2 elements and of the shift law for lattice shifts. SL2 elements
/// need an even form, and an even unimodular one unless c == 0.
TransformationReport check_transformation(const JacobiEvaluator& ev, const JacobiElement& g,
                                          const std::vector<JacobiPoint>& samples, long double tol);

/// |factor(g1 g2, p) - factor(g1, g2.p) * factor(g2, p)|.
long double cocycle_residual(const BilinearForm& b, const Sl2& g1, const Sl2& g2, const JacobiPoint& p);

/// Sample points with Im tau in [0.8, 1.6], |Re tau| <= 0.5, |Re z_i| <= 0.25
/// and |Im z_i| <= 0.05.
std::vector<JacobiPoint> random_points(std::size_t rank, std::size_t count, std::mt19937_64& rng);

}  // namespace quadtmf
