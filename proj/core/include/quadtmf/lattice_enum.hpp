#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "quadtmf/bilform.hpp"

namespace quadtmf {

/// Fincke-Pohst enumeration of lattice vectors with b(x,x) <= bound for a
/// positive definite integral form. The LDL data are integerized once, so the
/// search itself runs on machine integers with overflow checks at setup.
class ShortVectorEnumerator {
 public:
  /// Throws NotPositiveDefinite, or Overflow when the integerized data do not
  /// fit into 64-bit words.
  explicit ShortVectorEnumerator(const BilinearForm& b);

  std::size_t dimension() const noexcept { return n_; }

  /// counts[k] = #{x in Z^d : b(x,x) = k} for 0 <= k <= max_norm.
  std::vector<std::uint64_t> norm_counts(long max_norm) const;

  /// Calls visit(x, b(x,x)) for every x (zero and both signs included) with
  /// b(x,x) <= max_norm.
  void for_each(long max_norm, const std::function<void(const std::vector<long>&, long)>& visit) const;

 private:
  struct Search;
  static constexpr std::size_t kSplitRank = 12;
  std::vector<std::uint64_t> split_norm_counts(long max_norm) const;

  std::size_t n_ = 0;
  std::vector<std::int64_t> gram_;    // n x n
  std::vector<std::int64_t> scale_;   // e_i: common denominator of row i of mu
  std::vector<std::int64_t> center_;  // n x n, M_ij = e_i * mu_ij for j > i
  std::vector<__int128> weight_;      // A_i = den * D_i / e_i^2
  std::int64_t den_ = 1;
};

/// Index sets of the connected components of the graph with an edge i-j
/// whenever b(e_i, e_j) != 0. Each component is sorted.
std::vector<std::vector<std::size_t>> orthogonal_components(const BilinearForm& b);

/// Restriction of b to the coordinates in `indices`.
BilinearForm restrict_form(const BilinearForm& b, const std::vector<std::size_t>& indices);

}  // namespace quadtmf
