#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadtmf/error.hpp"
#include "quadtmf/linalg.hpp"

namespace quadtmf {

enum class Provenance { Primary, External };

struct CoeffGenerator {
  std::string name;
  int degree = 0;
  BigInt order;  ///< additive order; 0 means infinite
  Provenance provenance = Provenance::External;
};

/// Listed generators of pi_n as a Z[j]-module. `complete` is false when the
/// list is known to be partial.
struct GroupPresentation {
  int degree = 0;
  bool complete = false;
  std::vector<CoeffGenerator> generators;
  Provenance provenance = Provenance::External;

  bool trivial() const { return complete && generators.empty(); }
  std::size_t free_rank() const;
  std::vector<BigInt> torsion_orders() const;
  /// e.g. "Z/2<eta>", "Z[j]<1>", "0", "Z/2<nu^2> (+ ?)".
  std::string to_string() const;
};

/// A monomial j^k * g in a named generator g ("1" for the unit).
struct Monomial {
  unsigned j_power = 0;
  std::string generator;
  auto operator<=>(const Monomial&) const = default;
};

/// Element of pi_degree TMF: a reduced integer combination of monomials, or
/// Unknown with a reason. The empty combination is zero.
class TmfElement {
 public:
  TmfElement() = default;

  static TmfElement zero(int degree) { return TmfElement(degree); }
  static TmfElement unknown(int degree, std::string reason);

  int degree() const noexcept { return degree_; }
  bool is_unknown() const noexcept { return unknown_.has_value(); }
  bool is_zero() const noexcept { return !is_unknown() && terms_.empty(); }
  const std::string& unknown_reason() const;
  const std::map<Monomial, BigInt>& terms() const noexcept { return terms_; }

  /// "0", "eta", "-nu", "2*j^3", "eta^2 + 12*nu", "unknown".
  std::string to_string() const;

  friend bool operator==(const TmfElement&, const TmfElement&) = default;

 private:
  friend class TmfCoeffTable;
  explicit TmfElement(int degree) : degree_(degree) {}

  int degree_ = 0;
  std::map<Monomial, BigInt> terms_;
  std::optional<std::string> unknown_;
};

/// Curated coefficient ring: per-degree presentations plus a partial product
/// table. Immutable after loading.
class TmfCoeffTable {
 public:
  /// Parses and validates; throws ValidationError listing every violation.
  static TmfCoeffTable from_json(const std::string& text);
  static TmfCoeffTable from_file(const std::string& path);
  /// The table compiled into the library.
  static const TmfCoeffTable& builtin();
  /// The file named by QUADTMF_TABLE when set, the builtin table otherwise.
  static TmfCoeffTable from_environment();

  /// All violated invariants (empty for a valid table).
  std::vector<std::string> violations() const;

  std::pair<int, int> degree_range() const noexcept { return range_; }
  /// Throws OutOfRange.
  const GroupPresentation& group_at(int degree) const;
  const std::vector<int>& units() const noexcept { return units_; }
  bool has_generator(const std::string& name) const;
  /// Throws UnknownName.
  const CoeffGenerator& generator_info(const std::string& name) const;

  TmfElement zero(int degree) const { return TmfElement::zero(degree); }
  TmfElement integer(const BigInt& n) const;
  TmfElement unit(int sign) const { return integer(sign); }
  /// Throws UnknownName.
  TmfElement generator(const std::string& name) const;
  /// Parses "eta", "-nu", "2*eta^2", "j^2", "eta + nu^2" etc. Throws ParseError.
  TmfElement parse(const std::string& text) const;

  TmfElement add(const TmfElement& x, const TmfElement& y) const;
  TmfElement negate(const TmfElement& x) const;
  TmfElement scale(const TmfElement& x, const BigInt& n) const;
  TmfElement mul(const TmfElement& x, const TmfElement& y) const;

  /// Raw product lookup for generators, honoring graded commutativity.
  std::optional<TmfElement> product(const std::string& a, const std::string& b) const;

 private:
  TmfElement canonical(int degree, std::map<Monomial, BigInt> terms) const;
  TmfElement mul_monomials(const Monomial& a, const Monomial& b, int degree) const;

  std::pair<int, int> range_{0, 0};
  std::string polynomial_generator_ = "j";
  Provenance polynomial_provenance_ = Provenance::External;
  std::vector<int> units_;
  std::map<int, GroupPresentation> groups_;
  std::map<std::string, CoeffGenerator> generators_;
  std::map<std::pair<std::string, std::string>, std::map<std::string, BigInt>> products_;
};

}  // namespace quadtmf
