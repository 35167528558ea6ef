#include "quadtmf/bilform.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace quadtmf {

BilinearForm::BilinearForm(IntMatrix gram, std::string label)
    : gram_(std::move(gram)), label_(std::move(label)) {
  if (!gram_.is_square()) throw Error(ErrorCode::DimensionMismatch, "Gram matrix must be square");
  if (!gram_.is_symmetric()) throw Error(ErrorCode::DimensionMismatch, "Gram matrix must be symmetric");
}

BilinearForm BilinearForm::diagonal(std::initializer_list<long> entries) {
  std::vector<BigInt> v;
  for (long e : entries) v.emplace_back(e);
  return diagonal(v);
}

BilinearForm BilinearForm::diagonal(const std::vector<BigInt>& entries) {
  return BilinearForm(quadtmf::diagonal(entries));
}

BilinearForm BilinearForm::hyperbolic() { return BilinearForm(IntMatrix{{0, 1}, {1, 0}}, "H"); }

BilinearForm BilinearForm::zero(std::size_t rank) { return BilinearForm(IntMatrix(rank, rank)); }

BilinearForm BilinearForm::with_label(std::string label) const {
  BilinearForm b = *this;
  b.label_ = std::move(label);
  return b;
}

BigInt BilinearForm::evaluate(const std::vector<BigInt>& v, const std::vector<BigInt>& w) const {
  if (v.size() != rank() || w.size() != rank())
    throw Error(ErrorCode::DimensionMismatch, "vector length does not match form rank");
  BigInt s = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < rank(); ++j) s += v[i] * gram_(i, j) * w[j];
  }
  return s;
}

BilinearForm BilinearForm::negated() const { return BilinearForm(-gram_, label_.empty() ? "" : "-" + label_); }

bool BilinearForm::is_even() const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (mpz_odd_p(gram_(i, i).get_mpz_t())) return false;
  return true;
}

SignatureRecord signature(const BilinearForm& b) {
  SignatureRecord rec;
  rec.parity = b.is_even() ? Parity::Even : Parity::Odd;
  rec.det = determinant(b.gram());
  rec.unimodular = abs(rec.det) == 1;

  RatMatrix a = to_rational(b.gram());
  std::vector<std::size_t> live(b.rank());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;

  auto remove = [&](std::size_t idx) { live.erase(std::find(live.begin(), live.end(), idx)); };

  while (!live.empty()) {
    auto diag = std::find_if(live.begin(), live.end(), [&](std::size_t i) { return a(i, i) != 0; });
    if (diag != live.end()) {
      const std::size_t p = *diag;
      const Rational piv = a(p, p);
      (piv > 0 ? rec.b_plus : rec.b_minus) += 1;
      remove(p);
      for (std::size_t i : live) {
        if (a(i, p) == 0) continue;
        const Rational f = a(i, p) / piv;
        for (std::size_t j : live) a(i, j) -= f * a(p, j);
      }
      continue;
    }
    // All remaining diagonal entries vanish: pivot on a nonzero off-diagonal
    // 2x2 block [[0,c],[c,0]], which has inertia (1,1).
    std::size_t p = 0, q = 0;
    bool found = false;
    for (std::size_t x = 0; x < live.size() && !found; ++x)
      for (std::size_t y = x + 1; y < live.size() && !found; ++y)
        if (a(live[x], live[y]) != 0) {
          p = live[x];
          q = live[y];
          found = true;
        }
    if (!found) break;  // remaining block is zero
    rec.b_plus += 1;
    rec.b_minus += 1;
    const Rational c = a(p, q);
    remove(p);
    remove(q);
    // Schur complement: S = A_rr - A_r{p,q} * [[0,c],[c,0]]^{-1} * A_{p,q}r,
    // where the inverse is [[0,1/c],[1/c,0]].
    std::vector<Rational> ap, aq;
    for (std::size_t i : live) {
      ap.push_back(a(i, p));
      aq.push_back(a(i, q));
    }
    for (std::size_t x = 0; x < live.size(); ++x)
      for (std::size_t y = 0; y < live.size(); ++y)
        a(live[x], live[y]) -= (ap[x] * aq[y] + aq[x] * ap[y]) / c;
  }
  rec.b_zero = live.size();
  return rec;
}

BilinearForm pullback(const IntMatrix& a, const BilinearForm& b) {
  if (a.rows() != b.rank())
    throw Error(ErrorCode::DimensionMismatch, "pullback matrix must have rank(b) rows");
  return BilinearForm(a.transpose() * b.gram() * a);
}

BilinearForm direct_sum(const BilinearForm& b, const BilinearForm& c) {
  std::string label;
  if (!b.label().empty() && !c.label().empty()) label = b.label() + "+" + c.label();
  return BilinearForm(block_diagonal(b.gram(), c.gram()), label);
}

BilinearForm stabilize(const BilinearForm& b, std::size_t plus, std::size_t minus) {
  std::vector<BigInt> d(plus, BigInt(1));
  d.insert(d.end(), minus, BigInt(-1));
  return BilinearForm(block_diagonal(b.gram(), quadtmf::diagonal(d)));
}

BilinearForm qform_convert(const QuadraticForm& q) {
  const std::size_t d = q.dimension();
  IntMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    g(i, i) = 2 * q.coefficients(i, i);
    for (std::size_t j = i + 1; j < d; ++j) {
      g(i, j) = q.coefficients(i, j);
      g(j, i) = q.coefficients(i, j);
    }
  }
  return BilinearForm(g);
}

QuadraticForm inverse_partial(const BilinearForm& b) {
  const std::size_t d = b.rank();
  QuadraticForm q{IntMatrix(d, d)};
  for (std::size_t i = 0; i < d; ++i) {
    if (mpz_odd_p(b(i, i).get_mpz_t()))
      throw Error(ErrorCode::NonEvenDiagonal,
                  "b(e_" + std::to_string(i + 1) + ",e_" + std::to_string(i + 1) + ") is odd");
    q.coefficients(i, i) = b(i, i) / 2;
    for (std::size_t j = i + 1; j < d; ++j) q.coefficients(i, j) = b(i, j);
  }
  return q;
}

RadicalSplit radical_split(const BilinearForm& b) {
  KernelSplit ks = saturated_kernel(b.gram());
  RadicalSplit out;
  out.zero_rank = ks.kernel.cols();
  if (out.zero_rank == 0) {
    out.core = b;
    out.basis_change = IntMatrix::identity(b.rank());
    return out;
  }
  out.basis_change = hconcat(ks.kernel, ks.complement);
  out.core = ks.complement.cols() ? pullback(ks.complement, b) : BilinearForm();
  return out;
}

StableCounts unimodular_stable_form(const BilinearForm& b) {
  SignatureRecord s = signature(b);
  if (!s.unimodular) throw Error(ErrorCode::NotUnimodular, "form is not unimodular (|det| = " + BigInt(abs(s.det)).get_str() + ")");
  return {s.b_plus, s.b_minus};
}

bool is_positive_definite(const BilinearForm& b) {
  SignatureRecord s = signature(b);
  return s.b_plus == b.rank();
}

namespace {

struct Candidate {
  std::vector<long> v;
  BigInt norm;
};

// Depth-first search for columns u_0..u_{n-1} with u_i^T X u_j = Y_ij.
class CongruenceSearch {
 public:
  CongruenceSearch(const IntMatrix& x, const IntMatrix& y, long bound) : x_(x), y_(y), n_(x.rows()) {
    std::vector<long> v(n_, -bound);
    for (;;) {
      BigInt nrm = 0;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) nrm += x_(i, j) * v[i] * v[j];
      by_norm_[nrm].push_back({v, nrm});
      std::size_t k = 0;
      while (k < n_ && v[k] == bound) v[k++] = -bound;
      if (k == n_) break;
      ++v[k];
    }
  }

  std::optional<IntMatrix> run() {
    chosen_.clear();
    if (n_ == 0) return IntMatrix();
    if (extend()) {
      IntMatrix u(n_, n_);
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < n_; ++i) u(i, j) = chosen_[j]->v[i];
      return u;
    }
    return std::nullopt;
  }

 private:
  BigInt inner(const std::vector<long>& a, const std::vector<long>& b) const {
    BigInt s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) s += x_(i, j) * a[i] * b[j];
    }
    return s;
  }

  bool extend() {
    const std::size_t k = chosen_.size();
    if (k == n_) {
      IntMatrix u(n_, n_);
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < n_; ++i) u(i, j) = chosen_[j]->v[i];
      return abs(determinant(u)) == 1;
    }
    auto it = by_norm_.find(y_(k, k));
    if (it == by_norm_.end()) return false;
    for (const Candidate& c : it->second) {
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) ok = inner(chosen_[j]->v, c.v) == y_(j, k);
      if (!ok) continue;
      chosen_.push_back(&c);
      if (extend()) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const IntMatrix& x_;
  const IntMatrix& y_;
  std::size_t n_;
  std::map<BigInt, std::vector<Candidate>> by_norm_;
  std::vector<const Candidate*> chosen_;
};

}  // namespace

std::optional<IntMatrix> find_congruence(const BilinearForm& x, const BilinearForm& y, long coeff_bound) {
  if (x.rank() != y.rank()) return std::nullopt;
  CongruenceSearch search(x.gram(), y.gram(), coeff_bound);
  return search.run();
}

Decision congruent_stably_bruteforce(const BilinearForm& b, const BilinearForm& c,
                                     std::size_t stab_limit, std::size_t coeff_bound) {
  const SignatureRecord sb = signature(b);
  const SignatureRecord sc = signature(c);
  if (sb.b_zero != sc.b_zero) return Decision::decided(false);
  // Congruence preserves |det|; different values cannot be bridged by <+-1>.
  const bool det_match = abs(sb.det) == abs(sc.det);

  constexpr std::size_t kMaxDim = 5;
  bool truncated = false;
  for (std::size_t kb = 0; kb <= stab_limit; ++kb) {
    const long kc_signed = static_cast<long>(b.rank() + kb) - static_cast<long>(c.rank());
    if (kc_signed < 0 || kc_signed > static_cast<long>(stab_limit)) continue;
    const std::size_t kc = static_cast<std::size_t>(kc_signed);
    const std::size_t n = b.rank() + kb;
    if (n > kMaxDim) {
      truncated = true;
      continue;
    }
    for (std::size_t rb = 0; rb <= kb; ++rb)
      for (std::size_t rc = 0; rc <= kc; ++rc) {
        const std::size_t plus_b = sb.b_plus + rb, minus_b = sb.b_minus + (kb - rb);
        const std::size_t plus_c = sc.b_plus + rc, minus_c = sc.b_minus + (kc - rc);
        if (plus_b != plus_c || minus_b != minus_c || !det_match) continue;
        const BilinearForm x = stabilize(b, rb, kb - rb);
        const BilinearForm y = stabilize(c, rc, kc - rc);
        for (std::size_t bound = 1; bound <= coeff_bound; ++bound)
          if (find_congruence(x, y, static_cast<long>(bound))) return Decision::decided(true);
      }
  }
  return Decision::inconclusive(truncated ? "search exhausted (dimension cap reached)" : "search exhausted");
}

}  // namespace quadtmf
