#include "quadtmf/invariants.hpp"

#include "quadtmf/lattice_enum.hpp"

namespace quadtmf {

namespace {

int degree_of(std::size_t plus, std::size_t minus) {
  return 3 * static_cast<int>(plus) - 2 * static_cast<int>(minus);
}

// Number of vectors of norm 1 of a positive definite form.
std::uint64_t unit_vectors(const BilinearForm& b) { return ShortVectorEnumerator(b).norm_counts(1)[1]; }

TmfElement power(const TmfCoeffTable& table, const std::string& generator, std::size_t k) {
  TmfElement acc = table.unit(1);
  for (std::size_t i = 0; i < k; ++i) acc = table.mul(acc, table.generator(generator));
  return acc;
}

// Coordinates of the class of `a` in coker(gram) with respect to the cyclic
// generators used by discriminant().
std::vector<BigInt> class_coordinates(const SmithForm& s, const std::vector<BigInt>& a) {
  const auto diag = s.diagonal();
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] == 1) continue;
    BigInt c = 0;
    for (std::size_t j = 0; j < a.size(); ++j) c += s.u(i, j) * a[j];
    out.push_back(c);
  }
  return out;
}

Rational quadratic(const BilinearForm& b, const std::vector<Rational>& x, const std::vector<Rational>& y) {
  Rational acc = 0;
  for (std::size_t i = 0; i < b.rank(); ++i)
    for (std::size_t j = 0; j < b.rank(); ++j) acc += x[i] * Rational(b(i, j)) * y[j];
  return acc;
}

void require_isometric(const CobordismData& c) {
  if (c.inclusion.rows() != c.v1.rank() || c.inclusion.cols() != c.v0.rank())
    throw Error(ErrorCode::InclusionNotIsometric, "inclusion must be a rank(V1) x rank(V0) matrix");
  if (!(pullback(c.inclusion, c.v1) == c.v0))
    throw Error(ErrorCode::InclusionNotIsometric, "inclusion does not pull the form of V1 back to the form of V0");
}

}  // namespace

Z3Result z3(const ThreeManifoldPresentation& m) {
  const BilinearForm b = m.link.gram();
  Z3Result out;
  out.signature = signature(b);
  out.shift = degree_of(out.signature.b_plus, out.signature.b_minus);
  out.module = from_bilinear(b).shifted(out.shift);
  out.normal_form = out.module.normal_form();
  out.discriminant = discriminant(b);
  return out;
}

Z4Result z4(const FourManifoldClass& x, const TmfCoeffTable& table) {
  const BilinearForm b = x.orientation < 0 ? x.form.negated() : x.form;
  const SignatureRecord s = signature(b);
  if (!s.unimodular) throw Error(ErrorCode::NotUnimodular, "closed simply-connected 4-manifolds have unimodular forms");
  Z4Result out;
  out.degree = degree_of(s.b_plus, s.b_minus);
  auto unknown = [&](const std::string& why) {
    out.element = TmfElement::unknown(out.degree, why);
    out.decomposition = why;
    return out;
  };
  if (b.rank() == 0) {
    out.element = table.unit(1);
    out.decomposition = "empty";
    return out;
  }
  const bool definite = s.b_plus == 0 || s.b_minus == 0;
  if (s.parity == Parity::Odd) {
    // Odd indefinite forms are diagonal, so a <-1> summand kills the product.
    if (!definite || s.b_plus == 0) {
      if (definite && unit_vectors(b.negated()) == 0)
        return unknown("negative definite odd form without a <-1> summand");
      out.element = table.zero(out.degree);
      out.decomposition = "contains <-1>";
      return out;
    }
    if (unit_vectors(b) != 2 * b.rank()) return unknown("positive definite form is not diagonal");
    out.element = power(table, "nu", s.b_plus);
    out.sign_ambiguous = s.b_plus % 2 == 1 && !out.element.is_zero();
    out.decomposition = "<1>^" + std::to_string(s.b_plus);
    return out;
  }
  if (definite || s.b_plus != s.b_minus) return unknown("even form with nonzero signature has E8 summands");
  out.element = power(table, "eta", s.b_plus);
  out.conditional = true;
  out.decomposition = "h^" + std::to_string(s.b_plus);
  return out;
}

int cobordism_degree(const CobordismData& c) {
  require_isometric(c);
  const SignatureRecord s0 = signature(c.v0), s1 = signature(c.v1);
  return 3 * (static_cast<int>(s1.b_plus) - static_cast<int>(s0.b_plus)) -
         2 * (static_cast<int>(s1.b_minus) - static_cast<int>(s0.b_minus));
}

OrientationReport orientation_reverse(const ThreeManifoldPresentation& m) {
  OrientationReport out;
  const Z3Result z = z3(m);
  out.b1 = z.discriminant.free_rank;
  const ThreeManifoldPresentation mirror{FramedLink::from_gram(m.link.gram().negated()), m.label + " mirror"};
  out.direct = z3(mirror).module;
  out.via_dual = dual(z.module).shifted(-static_cast<int>(out.b1));
  out.agree = out.direct.normal_form().equivalent(out.via_dual.normal_form());
  return out;
}

bool LinkingReport::ok() const {
  for (const auto& s : samples)
    if (s.residue != 0) return false;
  return true;
}

LinkingReport cobordism_linking_check(const CobordismData& c, std::size_t samples, std::mt19937_64& rng) {
  require_isometric(c);
  if (signature(c.v0).b_zero != 0 || signature(c.v1).b_zero != 0)
    throw Error(ErrorCode::PreconditionFailed, "linking check needs nondegenerate forms");
  const std::size_t r0 = c.v0.rank(), r1 = c.v1.rank();
  const DiscriminantData d0 = discriminant(c.v0), d1 = discriminant(c.v1);
  const SmithForm s0 = smith_normal_form(c.v0.gram()), s1 = smith_normal_form(c.v1.gram());
  const RatMatrix inv0 = r0 ? rational_inverse(c.v0.gram()) : RatMatrix();
  std::uniform_int_distribution<long> pick(-5, 5);

  // w = V0^{-1} a, its image i w, and V1 i w.
  auto push = [&](const std::vector<BigInt>& a, std::vector<Rational>& w, std::vector<Rational>& iw,
                  std::vector<Rational>& a1) {
    w.assign(r0, 0);
    for (std::size_t i = 0; i < r0; ++i)
      for (std::size_t j = 0; j < r0; ++j) w[i] += inv0(i, j) * Rational(a[j]);
    iw.assign(r1, 0);
    for (std::size_t i = 0; i < r1; ++i)
      for (std::size_t j = 0; j < r0; ++j) iw[i] += Rational(c.inclusion(i, j)) * w[j];
    a1.assign(r1, 0);
    for (std::size_t i = 0; i < r1; ++i)
      for (std::size_t j = 0; j < r1; ++j) a1[i] += Rational(c.v1(i, j)) * iw[j];
    for (const auto& v : a1)
      if (v.get_den() != 1) return false;
    return true;
  };
  auto integral = [](const std::vector<Rational>& v) {
    std::vector<BigInt> out;
    for (const auto& x : v) out.push_back(x.get_num());
    return out;
  };

  LinkingReport report;
  for (std::size_t k = 0; k < samples; ++k) {
    LinkingSample smp;
    for (std::size_t i = 0; i < r0; ++i) {
      smp.a0.emplace_back(pick(rng));
      smp.b0.emplace_back(pick(rng));
    }
    std::vector<Rational> wa, iwa, a1, wb, iwb, b1;
    if (!push(smp.a0, wa, iwa, a1) || !push(smp.b0, wb, iwb, b1)) {
      ++report.skipped;
      continue;
    }
    smp.lambda0 = d0.torsion.evaluate(class_coordinates(s0, smp.a0), class_coordinates(s0, smp.b0));
    smp.lambda1 = d1.torsion.evaluate(class_coordinates(s1, integral(a1)), class_coordinates(s1, integral(b1)));
    smp.correction = mod_one(quadratic(c.v1, iwa, iwb) - quadratic(c.v0, wa, wb));
    smp.residue = mod_one(smp.lambda0 - smp.lambda1 - smp.correction);
    report.samples.push_back(std::move(smp));
  }
  return report;
}

ExperimentalMap one_handle_map(const TmfCoeffTable& table) {
  return {TmfMap({-1}, {0, -1}, 0, {{table.zero(-1)}, {table.unit(1)}}), true};
}

}  // namespace quadtmf
