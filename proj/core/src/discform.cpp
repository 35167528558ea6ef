#include "quadtmf/discform.hpp"

#include <atomic>
#include <map>
#include <numeric>
#include <tuple>

namespace quadtmf {

namespace {

std::atomic<bool> g_negate_linking{false};

std::vector<BigInt> drop_units(const std::vector<BigInt>& d, std::vector<std::size_t>& kept) {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 1 && d[i] != 0) {
      out.push_back(d[i]);
      kept.push_back(i);
    }
  return out;
}

}  // namespace

Rational mod_one(const Rational& x) {
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

TorsionLinkingForm::TorsionLinkingForm(std::vector<BigInt> factors, RatMatrix pairing)
    : factors_(std::move(factors)), pairing_(std::move(pairing)) {
  const std::size_t k = factors_.size();
  if (pairing_.rows() != k || pairing_.cols() != k)
    throw Error(ErrorCode::ValidationError, "pairing matrix shape does not match the number of factors");
  for (std::size_t i = 0; i < k; ++i) {
    if (factors_[i] < 2) throw Error(ErrorCode::ValidationError, "invariant factors must be >= 2");
    if (i + 1 < k && factors_[i + 1] % factors_[i] != 0)
      throw Error(ErrorCode::ValidationError, "invariant factors must form a divisibility chain");
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      pairing_(i, j) = mod_one(pairing_(i, j));
      if (Rational(factors_[i] * pairing_(i, j)).get_den() != 1)
        throw Error(ErrorCode::ValidationError, "pairing violates the order of generator " + std::to_string(i + 1));
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (pairing_(i, j) != pairing_(j, i)) throw Error(ErrorCode::ValidationError, "pairing is not symmetric");
}

TorsionLinkingForm TorsionLinkingForm::cyclic(const BigInt& order, const Rational& self_pairing) {
  RatMatrix m(1, 1);
  m(0, 0) = self_pairing;
  return TorsionLinkingForm({order}, m);
}

BigInt TorsionLinkingForm::order() const {
  BigInt n = 1;
  for (const auto& d : factors_) n *= d;
  return n;
}

Rational TorsionLinkingForm::evaluate(const std::vector<BigInt>& x, const std::vector<BigInt>& y) const {
  if (x.size() != size() || y.size() != size())
    throw Error(ErrorCode::DimensionMismatch, "coordinate vector length does not match the group");
  Rational s = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) s += Rational(x[i] * y[j]) * pairing_(i, j);
  return mod_one(s);
}

TorsionLinkingForm TorsionLinkingForm::negated() const {
  RatMatrix m = pairing_;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) m(i, j) = -m(i, j);
  return TorsionLinkingForm(factors_, m);
}

TorsionLinkingForm orthogonal_sum(const TorsionLinkingForm& a, const TorsionLinkingForm& b) {
  const std::size_t n = a.size() + b.size();
  if (n == 0) return {};
  std::vector<BigInt> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  RatMatrix lam(n, n);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) lam(i, j) = a.pairing()(i, j);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) lam(a.size() + i, a.size() + j) = b.pairing()(i, j);

  // New generator k is the old vector U^{-1} e_k where diag(f) -> U diag(f) V.
  SmithForm s = smith_normal_form(diagonal(f));
  RatMatrix uinv = rational_inverse(s.u);
  std::vector<std::size_t> kept;
  std::vector<BigInt> nf = drop_units(s.diagonal(), kept);
  RatMatrix out(kept.size(), kept.size());
  for (std::size_t x = 0; x < kept.size(); ++x)
    for (std::size_t y = 0; y < kept.size(); ++y) {
      Rational acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (uinv(i, kept[x]) == 0) continue;
        for (std::size_t j = 0; j < n; ++j) acc += uinv(i, kept[x]) * lam(i, j) * uinv(j, kept[y]);
      }
      out(x, y) = acc;
    }
  return TorsionLinkingForm(nf, out);
}

void set_linking_orientation_negated(bool negated) { g_negate_linking.store(negated); }
bool linking_orientation_negated() { return g_negate_linking.load(); }

DiscriminantWithLifts discriminant_with_lifts(const BilinearForm& b) {
  DiscriminantWithLifts out;
  out.split = radical_split(b);
  out.data.free_rank = out.split.zero_rank;
  const BilinearForm& core = out.split.core;
  const std::size_t r = core.rank();
  if (r == 0) {
    out.lifts = RatMatrix(0, 0);
    return out;
  }
  SmithForm s = smith_normal_form(core.gram());
  std::vector<std::size_t> kept;
  std::vector<BigInt> factors = drop_units(s.diagonal(), kept);
  const std::size_t k = kept.size();
  out.lifts = RatMatrix(r, k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < r; ++i) {
      out.lifts(i, c) = Rational(s.v(i, kept[c]), factors[c]);
      out.lifts(i, c).canonicalize();
    }
  RatMatrix lam(k, k);
  const RatMatrix g = to_rational(core.gram());
  const bool neg = linking_orientation_negated();
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = x; y < k; ++y) {
      Rational acc = 0;
      for (std::size_t i = 0; i < r; ++i) {
        if (out.lifts(i, x) == 0) continue;
        for (std::size_t j = 0; j < r; ++j) acc += out.lifts(i, x) * g(i, j) * out.lifts(j, y);
      }
      if (neg) acc = -acc;
      lam(x, y) = acc;
      lam(y, x) = acc;
    }
  out.data.torsion = TorsionLinkingForm(factors, lam);
  return out;
}

DiscriminantData discriminant(const BilinearForm& b) { return discriminant_with_lifts(b).data; }

namespace {

// Finite-group model with small machine integers: elements are mixed-radix
// coordinate vectors, pairing values are integers modulo the exponent D.
class SmallTorsion {
 public:
  explicit SmallTorsion(const TorsionLinkingForm& t) {
    for (const auto& f : t.factors()) radix_.push_back(f.get_si());
    exponent_ = radix_.empty() ? 1 : radix_.back();
    const std::size_t k = radix_.size();
    pair_.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        Rational v = t.pairing()(i, j) * Rational(exponent_);
        pair_[i * k + j] = v.get_num().get_si();
      }
    order_ = 1;
    for (long d : radix_) order_ *= d;
  }

  std::size_t rank() const { return radix_.size(); }
  long order() const { return order_; }
  long exponent() const { return exponent_; }
  long factor(std::size_t i) const { return radix_[i]; }
  long generator_pair(std::size_t i, std::size_t j) const { return pair_[i * rank() + j]; }

  std::vector<long> element(long index) const {
    std::vector<long> x(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      x[i] = index % radix_[i];
      index /= radix_[i];
    }
    return x;
  }

  long pair(const std::vector<long>& x, const std::vector<long>& y) const {
    const long d = exponent_;
    long s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) {
        if (y[j] == 0) continue;
        s = (s + ((x[i] * y[j]) % d) * pair_[i * rank() + j]) % d;
      }
    }
    return s;
  }

  long element_order(const std::vector<long>& x) const {
    long o = 1;
    for (std::size_t i = 0; i < rank(); ++i) o = std::lcm(o, radix_[i] / std::gcd(x[i], radix_[i]));
    return o;
  }

  bool killed_by(const std::vector<long>& x, long n) const {
    for (std::size_t i = 0; i < rank(); ++i)
      if ((x[i] * (n % radix_[i])) % radix_[i] != 0) return false;
    return true;
  }

  bool nondegenerate() const {
    for (long e = 1; e < order_; ++e) {
      auto x = element(e);
      bool radical = true;
      for (std::size_t j = 0; j < rank() && radical; ++j) {
        std::vector<long> g(rank(), 0);
        g[j] = 1;
        radical = pair(x, g) == 0;
      }
      if (radical) return false;
    }
    return true;
  }

  std::map<std::pair<long, long>, long> histogram() const {
    std::map<std::pair<long, long>, long> h;
    for (long e = 0; e < order_; ++e) {
      auto x = element(e);
      ++h[{element_order(x), pair(x, x)}];
    }
    return h;
  }

 private:
  std::vector<long> radix_;
  std::vector<long> pair_;
  long exponent_ = 1;
  long order_ = 1;
};

class IsomorphismSearch {
 public:
  IsomorphismSearch(const SmallTorsion& a, const SmallTorsion& b, bool need_bijectivity_check)
      : a_(a), b_(b), check_bijective_(need_bijectivity_check) {
    candidates_.resize(a.rank());
    for (long e = 0; e < b.order(); ++e) {
      auto y = b.element(e);
      const long self = b.pair(y, y);
      for (std::size_t i = 0; i < a.rank(); ++i)
        if (b.killed_by(y, a.factor(i)) && self == a.generator_pair(i, i)) candidates_[i].push_back(y);
    }
  }

  bool run() { return extend(); }

 private:
  bool extend() {
    const std::size_t i = images_.size();
    if (i == a_.rank()) return !check_bijective_ || injective();
    for (const auto& y : candidates_[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = b_.pair(images_[j], y) == a_.generator_pair(j, i);
      if (!ok) continue;
      images_.push_back(y);
      if (extend()) return true;
      images_.pop_back();
    }
    return false;
  }

  bool injective() const {
    std::vector<char> seen(static_cast<std::size_t>(b_.order()), 0);
    for (long e = 0; e < a_.order(); ++e) {
      auto x = a_.element(e);
      std::vector<long> img(b_.rank(), 0);
      for (std::size_t i = 0; i < a_.rank(); ++i)
        for (std::size_t c = 0; c < b_.rank(); ++c) img[c] = (img[c] + x[i] * images_[i][c]) % b_.factor(c);
      long idx = 0;
      for (std::size_t c = b_.rank(); c-- > 0;) idx = idx * b_.factor(c) + img[c];
      if (seen[static_cast<std::size_t>(idx)]) return false;
      seen[static_cast<std::size_t>(idx)] = 1;
    }
    return true;
  }

  const SmallTorsion& a_;
  const SmallTorsion& b_;
  bool check_bijective_;
  std::vector<std::vector<std::vector<long>>> candidates_;
  std::vector<std::vector<long>> images_;
};

}  // namespace

Decision torsion_forms_isomorphic(const TorsionLinkingForm& a, const TorsionLinkingForm& b, std::uint64_t budget) {
  if (a.factors() != b.factors()) return Decision::decided(false);
  if (a.trivial() || a == b) return Decision::decided(true);
  if (a.order() > BigInt(std::to_string(budget)))
    throw Error(ErrorCode::BudgetExceeded,
                "torsion order " + a.order().get_str() + " exceeds budget " + std::to_string(budget));
  SmallTorsion sa(a), sb(b);
  if (sa.histogram() != sb.histogram()) return Decision::decided(false);
  // A form-preserving map out of a nondegenerate form is injective.
  const bool nondeg = sa.nondegenerate();
  IsomorphismSearch search(sa, sb, !nondeg);
  return Decision::decided(search.run());
}

Decision pm_equivalent(const BilinearForm& b, const BilinearForm& c, std::uint64_t budget) {
  const DiscriminantData db = discriminant(b);
  const DiscriminantData dc = discriminant(c);
  if (db.free_rank != dc.free_rank) return Decision::decided(false);
  try {
    return torsion_forms_isomorphic(db.torsion, dc.torsion, budget);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) return Decision::inconclusive(e.what());
    throw;
  }
}

}  // namespace quadtmf
