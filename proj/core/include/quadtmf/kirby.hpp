#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "quadtmf/bilform.hpp"

namespace quadtmf {

/// Surgery presentation recorded by framings and pairwise linking numbers.
class FramedLink {
 public:
  FramedLink() = default;
  /// Throws DimensionMismatch / ValidationError on shape, asymmetry, or a
  /// nonzero diagonal in `linking`.
  FramedLink(std::vector<BigInt> framings, IntMatrix linking);

  static FramedLink unknot(long framing);
  static FramedLink unlink(std::size_t components, long framing = 0);
  static FramedLink hopf(long f1, long f2);
  /// Reads framings off the diagonal and linking numbers off the rest.
  static FramedLink from_gram(const BilinearForm& b);

  std::size_t size() const noexcept { return framings_.size(); }
  const std::vector<BigInt>& framings() const noexcept { return framings_; }
  const IntMatrix& linking() const noexcept { return linking_; }

  /// Linking matrix with the framings on the diagonal.
  BilinearForm gram() const;

  friend bool operator==(const FramedLink&, const FramedLink&) = default;

 private:
  std::vector<BigInt> framings_;
  IntMatrix linking_;
};

struct BlowUp {
  int sign = 1;
  friend bool operator==(const BlowUp&, const BlowUp&) = default;
};
struct BlowDown {
  std::size_t index = 0;
  friend bool operator==(const BlowDown&, const BlowDown&) = default;
};
/// Slide component `target` over component `over`: e_target -> e_target + sign * e_over.
struct HandleSlide {
  std::size_t target = 0;
  std::size_t over = 0;
  int sign = 1;
  friend bool operator==(const HandleSlide&, const HandleSlide&) = default;
};

using KirbyMove = std::variant<BlowUp, BlowDown, HandleSlide>;

/// Elementary matrix E with E e_target = e_target + sign * e_over.
IntMatrix slide_matrix(std::size_t n, const HandleSlide& s);

/// Throws IllegalMove with the reason.
FramedLink apply_move(const FramedLink& link, const KirbyMove& move);

std::string describe(const KirbyMove& move);

struct InvarianceReport {
  std::size_t moves_applied = 0;
  bool discriminant_preserved = true;
  bool module_preserved = true;
  bool signature_bookkeeping = true;
  std::vector<std::string> failures;

  bool ok() const { return discriminant_preserved && module_preserved && signature_bookkeeping; }
};

/// Applies `moves` in order and compares boundary invariants with the start.
InvarianceReport verify_boundary_invariance(const FramedLink& link, const std::vector<KirbyMove>& moves);

/// A legal sequence of 1..max_length moves (blow-ups, legal blow-downs and
/// slides), drawn from `rng`.
std::vector<KirbyMove> random_legal_moves(const FramedLink& link, std::size_t max_length, std::mt19937_64& rng);

}  // namespace quadtmf
