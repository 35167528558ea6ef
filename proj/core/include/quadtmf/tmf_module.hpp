#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quadtmf/bilform.hpp"
#include "quadtmf/discform.hpp"
#include "quadtmf/tmf_coeff.hpp"

namespace quadtmf {

enum class SummandKind { Tmf, ConeNu, OpaqueL };

/// One indecomposable-looking piece of a normal form: the module attached to
/// a torsion linking form class, shifted. Trivial torsion is TMF; <1/2>^k is
/// a tensor power of Cone(nu); anything else stays opaque and keeps a
/// representative nondegenerate form for display.
class ModuleSummand {
 public:
  /// L_core[extra_shift] for a nondegenerate core.
  ModuleSummand(const BilinearForm& core, int extra_shift);

  SummandKind kind() const noexcept { return kind_; }
  /// Power of Cone(nu) when kind() == ConeNu, 0 otherwise.
  std::size_t cone_power() const noexcept { return cone_power_; }
  const TorsionLinkingForm& torsion() const noexcept { return torsion_; }
  const BilinearForm& representative() const noexcept { return representative_; }
  /// Shift relative to the torsion class's base module (independent of the representative).
  int class_shift() const noexcept { return class_shift_; }
  /// Shift as displayed: TMF[s], Cone(nu)^k[s], or L_rep[s].
  int display_shift() const;
  /// For a rank-1 representative (n) with n >= 1: the number of shifted TMF
  /// copies after inverting 6. Annotation only.
  std::optional<BigInt> copies_after_inverting_6() const;

  ModuleSummand shifted(int n) const;
  ModuleSummand dual() const;
  friend ModuleSummand tensor(const ModuleSummand& a, const ModuleSummand& b);

  std::string to_string() const;

 private:
  ModuleSummand() = default;
  void classify();

  TorsionLinkingForm torsion_;
  BilinearForm representative_;
  int class_shift_ = 0;
  SummandKind kind_ = SummandKind::Tmf;
  std::size_t cone_power_ = 0;
};

/// Canonical sum-of-shifted-summands representation of a TMF-module expression.
class NormalForm {
 public:
  /// The zero module.
  NormalForm() = default;
  static NormalForm tmf(int shift = 0);
  static NormalForm cone_nu(int shift = 0);
  /// L_core for a nondegenerate core form.
  static NormalForm line(const BilinearForm& core);

  const std::vector<ModuleSummand>& summands() const noexcept { return summands_; }
  bool is_zero() const noexcept { return summands_.empty(); }
  bool has_opaque() const;

  NormalForm shifted(int n) const;
  NormalForm dual() const;
  friend NormalForm direct_sum(const NormalForm& a, const NormalForm& b);
  friend NormalForm tensor(const NormalForm& a, const NormalForm& b);

  /// Multiset equality with matching shifts and isomorphic torsion classes.
  Decision equivalent(const NormalForm& other, std::uint64_t budget = kDefaultIsomorphismBudget) const;
  friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.equivalent(b).is_true(); }

  std::string to_string() const;

 private:
  void add(ModuleSummand s);
  void sort();

  std::vector<ModuleSummand> summands_;
};

std::ostream& operator<<(std::ostream& os, const NormalForm& m);

/// Expression tree over the atoms TMF, Cone(nu) and L_b, with shifts, direct
/// sums and tensor products. Every node carries its own shift.
class TmfModuleExpr {
 public:
  enum class Kind { Tmf, ConeNu, Line, Sum, Tensor };

  TmfModuleExpr();  ///< TMF
  static TmfModuleExpr tmf(int shift = 0);
  static TmfModuleExpr cone_nu(int shift = 0);
  /// L_b for any form b (degenerate forms allowed).
  static TmfModuleExpr line(const BilinearForm& b, int shift = 0);
  static TmfModuleExpr sum(std::vector<TmfModuleExpr> parts, int shift = 0);
  static TmfModuleExpr tensor(std::vector<TmfModuleExpr> factors, int shift = 0);

  Kind kind() const;
  int shift() const;
  const std::vector<TmfModuleExpr>& children() const;
  /// The form of a Line node.
  const BilinearForm& form() const;

  TmfModuleExpr shifted(int n) const;
  NormalForm normal_form() const;
  std::string to_string() const;

 private:
  struct Node;
  explicit TmfModuleExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// L_b: (TMF + TMF[-1])^{(x) nullity} (x) L_core, with the core resolved to a
/// shifted TMF for unimodular cores, to Cone(nu) powers for <1/2>^k
/// discriminants, and kept as L_core otherwise.
TmfModuleExpr from_bilinear(const BilinearForm& b);

/// Expression-level dual: TMF[n] -> TMF[-n], Cone(nu) -> Cone(nu)[-4],
/// L_b -> L_{-b}[rank b], distributing over sums and tensors.
TmfModuleExpr dual(const TmfModuleExpr& m);

/// Matrix of pi_*TMF elements between sums of shifted copies of TMF.
/// Entry (i, j) maps source summand j to target summand i and lives in degree
/// source_shift(j) - target_shift(i) + degree.
class TmfMap {
 public:
  /// Throws ShapeMismatch on bad shapes or entry degrees.
  TmfMap(std::vector<int> source_shifts, std::vector<int> target_shifts, int degree,
         std::vector<std::vector<TmfElement>> entries);

  static TmfMap identity(const std::vector<int>& shifts, const TmfCoeffTable& table);

  const std::vector<int>& source_shifts() const noexcept { return source_; }
  const std::vector<int>& target_shifts() const noexcept { return target_; }
  int degree() const noexcept { return degree_; }
  std::size_t rows() const noexcept { return target_.size(); }
  std::size_t cols() const noexcept { return source_.size(); }
  const TmfElement& entry(std::size_t i, std::size_t j) const { return entries_[i][j]; }
  int entry_degree(std::size_t i, std::size_t j) const { return source_[j] - target_[i] + degree_; }

  NormalForm source_module() const;
  NormalForm target_module() const;
  std::string to_string() const;

  friend bool operator==(const TmfMap&, const TmfMap&) = default;

 private:
  std::vector<int> source_;
  std::vector<int> target_;
  int degree_ = 0;
  std::vector<std::vector<TmfElement>> entries_;
};

/// f o g. Throws ShapeMismatch unless g's target equals f's source.
TmfMap compose(const TmfMap& f, const TmfMap& g, const TmfCoeffTable& table);

/// restriction_L0, transfer_L0, duality_L0, twist_L0dual. `sign` selects the
/// unit +1 or -1 where the construction is only defined up to sign.
/// Throws UnknownName.
TmfMap builtin_map(const std::string& name, int sign, const TmfCoeffTable& table);
std::vector<std::string> builtin_map_names();

}  // namespace quadtmf
