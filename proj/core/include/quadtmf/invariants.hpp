#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "quadtmf/bilform.hpp"
#include "quadtmf/discform.hpp"
#include "quadtmf/kirby.hpp"
#include "quadtmf/tmf_coeff.hpp"
#include "quadtmf/tmf_module.hpp"

namespace quadtmf {

struct ThreeManifoldPresentation {
  FramedLink link;
  std::string label;
};

/// Z(M) = L_b[3b+ - 2b-] for the linking matrix b of the presentation,
/// together with the discriminant data, which determine it.
struct Z3Result {
  TmfModuleExpr module;
  NormalForm normal_form;
  DiscriminantData discriminant;
  SignatureRecord signature;
  int shift = 0;
};

Z3Result z3(const ThreeManifoldPresentation& m);

/// Intersection form of a closed simply-connected 4-manifold; orientation -1
/// means the form is read with the opposite sign.
struct FourManifoldClass {
  BilinearForm form;
  int orientation = 1;
};

struct Z4Result {
  int degree = 0;
  TmfElement element;
  /// Only defined up to sign (odd powers of nu).
  bool sign_ambiguous = false;
  /// Uses Z(S^2 x S^2) = eta, which assumes the upside-down cobordism answer.
  bool conditional = false;
  /// How the form was decomposed, e.g. "<1>^2", "h^3", "contains <-1>".
  std::string decomposition;
};

/// Throws NotUnimodular.
Z4Result z4(const FourManifoldClass& x, const TmfCoeffTable& table = TmfCoeffTable::builtin());

/// H_2(V0) -> H_2(V1) given as a rank(V1) x rank(V0) matrix.
struct CobordismData {
  BilinearForm v0;
  BilinearForm v1;
  IntMatrix inclusion;
};

/// 3(b+(V1) - b+(V0)) - 2(b-(V1) - b-(V0)). Throws InclusionNotIsometric.
int cobordism_degree(const CobordismData& c);

struct OrientationReport {
  TmfModuleExpr direct;    ///< Z of the mirrored presentation
  TmfModuleExpr via_dual;  ///< dual(Z(M))[-b1]
  std::size_t b1 = 0;
  Decision agree = Decision::decided(false);
};

OrientationReport orientation_reverse(const ThreeManifoldPresentation& m);

struct LinkingSample {
  std::vector<BigInt> a0, b0;
  Rational lambda0, lambda1, correction, residue;
};

struct LinkingReport {
  std::vector<LinkingSample> samples;
  /// Samples whose classes do not map to torsion classes of V1.
  std::size_t skipped = 0;
  bool ok() const;
};

/// For random integral vectors a0, b0 whose classes in coker(V0) map to
/// classes a1 = V1 i V0^{-1} a0 of coker(V1), compares the two linking values
/// read off the discriminant forms with the lift correction
/// (i w)^T V1 (i v) - w^T V0 v. Residues are taken mod 1. Throws
/// InclusionNotIsometric, PreconditionFailed for degenerate forms.
LinkingReport cobordism_linking_check(const CobordismData& c, std::size_t samples, std::mt19937_64& rng);

/// Experimental 1-handle map Z(S^3)[-1] = TMF[-1] -> TMF + TMF[-1], the
/// inclusion of the second summand. Not part of any verified pipeline.
struct ExperimentalMap {
  TmfMap map;
  bool conjectural = true;
};
ExperimentalMap one_handle_map(const TmfCoeffTable& table = TmfCoeffTable::builtin());

}  // namespace quadtmf
