#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "quadtmf/error.hpp"
#include "quadtmf/linalg.hpp"

namespace quadtmf {

enum class Parity { Even, Odd };

/// Integral symmetric bilinear form on Z^d, stored as its Gram matrix.
class BilinearForm {
 public:
  /// The rank-0 form.
  BilinearForm() = default;
  /// Throws DimensionMismatch unless gram is square and symmetric.
  explicit BilinearForm(IntMatrix gram, std::string label = {});

  static BilinearForm diagonal(std::initializer_list<long> entries);
  static BilinearForm diagonal(const std::vector<BigInt>& entries);
  /// The hyperbolic plane [[0,1],[1,0]].
  static BilinearForm hyperbolic();
  static BilinearForm zero(std::size_t rank);

  const IntMatrix& gram() const noexcept { return gram_; }
  std::size_t rank() const noexcept { return gram_.rows(); }
  const std::string& label() const noexcept { return label_; }
  BilinearForm with_label(std::string label) const;

  const BigInt& operator()(std::size_t i, std::size_t j) const { return gram_(i, j); }
  BigInt evaluate(const std::vector<BigInt>& v, const std::vector<BigInt>& w) const;

  /// The form -b (mirror orientation).
  BilinearForm negated() const;
  bool is_even() const;

  /// Gram equality; labels are ignored.
  friend bool operator==(const BilinearForm& a, const BilinearForm& b) { return a.gram_ == b.gram_; }

 private:
  IntMatrix gram_;
  std::string label_;
};

struct SignatureRecord {
  std::size_t b_plus = 0;
  std::size_t b_minus = 0;
  std::size_t b_zero = 0;
  Parity parity = Parity::Even;
  BigInt det = 1;
  bool unimodular = true;

  std::size_t rank() const { return b_plus + b_minus + b_zero; }
  friend bool operator==(const SignatureRecord&, const SignatureRecord&) = default;
};

/// Quadratic polynomial sum_i c_ii x_i^2 + sum_{i<j} c_ij x_i x_j; the
/// strictly lower triangle of `coefficients` is ignored and kept zero.
struct QuadraticForm {
  IntMatrix coefficients;

  std::size_t dimension() const { return coefficients.rows(); }
  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
};

/// Exact inertia via symmetric Gauss reduction over Q with 1x1 pivots and
/// 2x2 hyperbolic pivots (each contributing one positive and one negative).
SignatureRecord signature(const BilinearForm& b);

/// Gram a^T B a. Throws DimensionMismatch when a.rows() != rank(b).
BilinearForm pullback(const IntMatrix& a, const BilinearForm& b);

BilinearForm direct_sum(const BilinearForm& b, const BilinearForm& c);

/// b (+) <1>^plus (+) <-1>^minus.
BilinearForm stabilize(const BilinearForm& b, std::size_t plus, std::size_t minus);

/// b(v,w) = q(v+w) - q(v) - q(w).
BilinearForm qform_convert(const QuadraticForm& q);
/// q(x) = b(x,x)/2. Throws NonEvenDiagonal when some b(e_i,e_i) is odd.
QuadraticForm inverse_partial(const BilinearForm& b);

struct RadicalSplit {
  std::size_t zero_rank = 0;
  BilinearForm core;
  IntMatrix basis_change;  ///< unimodular; pullback gives diag(0_{zero_rank}, core)
};

RadicalSplit radical_split(const BilinearForm& b);

struct StableCounts {
  std::size_t p = 0;
  std::size_t q = 0;
  friend bool operator==(const StableCounts&, const StableCounts&) = default;
};

/// (b+, b-) of a unimodular form: the diagonal +-1 form it is stably
/// congruent to. Throws NotUnimodular.
StableCounts unimodular_stable_form(const BilinearForm& b);

bool is_positive_definite(const BilinearForm& b);

/// Searches for U in GL(n,Z) with |entries| <= coeff_bound and U^T X U = Y.
/// Returns U when found.
std::optional<IntMatrix> find_congruence(const BilinearForm& x, const BilinearForm& y, long coeff_bound);

/// Exhaustive desk-scale oracle for stable congruence. Tries stabilizations by
/// <1>, <-1> in increasing size up to stab_limit, then coefficient bounds
/// 1..coeff_bound. Decided(true) is a certificate; failure to find one is
/// Inconclusive, except when nullities differ (Decided(false)).
Decision congruent_stably_bruteforce(const BilinearForm& b, const BilinearForm& c,
                                     std::size_t stab_limit, std::size_t coeff_bound);

// Named Gram matrices shipped with the library (E8, D16+, H, ...). Each entry
// is validated against its declared properties when the registry is loaded.
const BilinearForm& builtin_form(const std::string& name);
std::vector<std::string> builtin_form_names();

/// Parses and validates a named-form registry document; throws ValidationError.
std::vector<BilinearForm> load_named_forms(const std::string& json_text);

}  // namespace quadtmf
