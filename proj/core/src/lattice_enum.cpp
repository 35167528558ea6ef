#include "quadtmf/lattice_enum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace quadtmf {

namespace {

using i128 = __int128;

std::int64_t to_i64(const BigInt& v, const char* what) {
  if (!v.fits_slong_p()) throw Error(ErrorCode::Overflow, std::string(what) + " does not fit into 64 bits");
  return v.get_si();
}

i128 to_i128(const BigInt& v, const char* what) {
  const BigInt limit = BigInt(1) << 100;
  if (abs(v) >= limit) throw Error(ErrorCode::Overflow, std::string(what) + " exceeds the enumeration range");
  const bool neg = v < 0;
  BigInt a = abs(v);
  i128 r = 0;
  const std::string hex = a.get_str(16);
  for (char c : hex) r = r * 16 + (c <= '9' ? c - '0' : c - 'a' + 10);
  return neg ? -r : r;
}

}  // namespace

ShortVectorEnumerator::ShortVectorEnumerator(const BilinearForm& b) : n_(b.rank()) {
  const std::size_t n = n_;
  RatMatrix q = to_rational(b.gram());
  for (std::size_t i = 0; i < n; ++i) {
    if (q(i, i) <= 0) throw Error(ErrorCode::NotPositiveDefinite, "form is not positive definite");
    for (std::size_t j = i + 1; j < n; ++j) {
      q(j, i) = q(i, j);
      q(i, j) /= q(i, i);
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
  }

  gram_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram_[i * n + j] = to_i64(b(i, j), "Gram entry");

  scale_.assign(n, 1);
  center_.assign(n * n, 0);
  std::vector<Rational> reduced(n);
  BigInt den = 1;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt e = 1;
    for (std::size_t j = i + 1; j < n; ++j) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), q(i, j).get_den_mpz_t());
    scale_[i] = to_i64(e, "LDL scale");
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational m = q(i, j) * Rational(e);
      center_[i * n + j] = to_i64(m.get_num(), "LDL center coefficient");
    }
    reduced[i] = q(i, i) / Rational(e * e);
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), reduced[i].get_den_mpz_t());
  }
  den_ = to_i64(den, "LDL denominator");
  weight_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational a = reduced[i] * Rational(den);
    weight_[i] = to_i128(a.get_num(), "LDL weight");
  }
}

struct ShortVectorEnumerator::Search {
  const ShortVectorEnumerator& e;
  i128 total;  // den * bound
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> center;  // C_i = sum_{j>i} M_ij x_j
  std::vector<std::int64_t> lin;     // L_i = sum_{j>i} g_ij x_j

  Search(const ShortVectorEnumerator& en, long bound)
      : e(en), total(static_cast<i128>(en.den_) * bound), x(en.n_, 0), center(en.n_, 0), lin(en.n_, 0) {}

  void move(std::size_t i, std::int64_t delta) {
    x[i] += delta;
    const std::size_t n = e.n_;
    for (std::size_t k = 0; k < i; ++k) {
      center[k] += e.center_[k * n + i] * delta;
      lin[k] += e.gram_[k * n + i] * delta;
    }
  }

  i128 spend(std::size_t i, std::int64_t xi) const {
    const i128 t = static_cast<i128>(e.scale_[i]) * xi + center[i];
    return e.weight_[i] * t * t;
  }

  // The admissible x_i form the integer interval {x : spend(i, x) <= r}. A
  // floating estimate is corrected by exact checks, so no division is needed.
  bool interval(std::size_t i, i128 r, std::int64_t& lo, std::int64_t& hi) const {
    if (r < 0) return false;
    const double sc = static_cast<double>(e.scale_[i]);
    const double mid = -static_cast<double>(center[i]) / sc;
    const double half = std::sqrt(static_cast<double>(r) / static_cast<double>(e.weight_[i])) / sc;
    lo = static_cast<std::int64_t>(std::ceil(mid - half));
    std::int64_t guess_hi = static_cast<std::int64_t>(std::floor(mid + half));
    while (spend(i, lo - 1) <= r) --lo;
    while (lo <= guess_hi + 1 && spend(i, lo) > r) ++lo;
    hi = std::max(guess_hi, lo - 1);
    while (spend(i, hi + 1) <= r) ++hi;
    while (hi >= lo && spend(i, hi) > r) --hi;
    return lo <= hi;
  }

  // upper = b(y, y) for y = (0, x_1, ..., x_{n-1}) restricted to levels above i.
  template <class Leaf>
  void descend(std::size_t i, i128 r, std::int64_t upper, bool zero_above, Leaf& leaf) {
    std::int64_t lo, hi;
    if (!interval(i, r, lo, hi)) return;
    if (zero_above && lo < 0) lo = 0;
    if (i == 0) {
      if (zero_above && lo == 0) lo = 1;
      if (lo <= hi) leaf(upper, lo, hi);
      return;
    }
    const std::int64_t gii = e.gram_[i * e.n_ + i];
    move(i, lo);
    for (std::int64_t xi = lo;; ++xi) {
      descend(i - 1, r - spend(i, xi), upper + gii * xi * xi + 2 * xi * lin[i], zero_above && xi == 0, leaf);
      if (xi == hi) break;
      move(i, 1);
    }
    move(i, -hi);
  }

  // Visits every admissible (x_i, ..., x_stop) with the remaining budget; the
  // flag tells whether all coordinates from the top down to x_stop vanish.
  template <class Visit>
  void walk(std::size_t i, std::size_t stop, i128 r, bool zero_above, Visit& visit) {
    std::int64_t lo, hi;
    if (!interval(i, r, lo, hi)) return;
    if (zero_above && lo < 0) lo = 0;
    if (lo > hi) return;
    move(i, lo);
    for (std::int64_t xi = lo;; ++xi) {
      const i128 rest = r - spend(i, xi);
      const bool z = zero_above && xi == 0;
      if (i == stop)
        visit(rest, z);
      else
        walk(i - 1, stop, rest, z, visit);
      if (xi == hi) break;
      move(i, 1);
    }
    move(i, -hi);
  }

  // b(x, x) at x_0 = lo, and its forward difference.
  void leaf_start(std::int64_t upper, std::int64_t lo, std::int64_t& norm, std::int64_t& diff) const {
    const std::int64_t g00 = e.gram_[0];
    norm = upper + g00 * lo * lo + 2 * lo * lin[0];
    diff = g00 * (2 * lo + 1) + 2 * lin[0];
  }
};

std::vector<std::uint64_t> ShortVectorEnumerator::norm_counts(long max_norm) const {
  if (max_norm < 0) return {};
  if (n_ >= kSplitRank) return split_norm_counts(max_norm);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_norm) + 1, 0);
  if (n_ > 0) {
    Search s(*this, max_norm);
    const std::int64_t step2 = 2 * gram_[0];
    std::uint64_t* out = counts.data();
    auto leaf = [&](std::int64_t upper, std::int64_t lo, std::int64_t hi) {
      std::int64_t norm, diff;
      s.leaf_start(upper, lo, norm, diff);
      for (std::int64_t x0 = lo; x0 <= hi; ++x0) {
        ++out[norm];
        norm += diff;
        diff += step2;
      }
    };
    // Only vectors whose last nonzero coordinate is positive; -x has the same norm.
    s.descend(n_ - 1, s.total, 0, true, leaf);
    for (auto& c : counts) c *= 2;
  }
  counts[0] += 1;
  return counts;
}

// Coordinates split into a lower block 0..k-1 and an upper block k..n-1. For a
// fixed upper part the lower coordinates range over a coset of the lattice
// spanned by the first k basis vectors; its contribution to b(x,x)*den
// depends only on the lower centers reduced modulo that lattice, so one
// histogram per coset class suffices.
std::vector<std::uint64_t> ShortVectorEnumerator::split_norm_counts(long max_norm) const {
  const std::size_t n = n_;
  const std::size_t k = n / 2;
  const i128 total = static_cast<i128>(den_) * max_norm;
  struct Entry {
    i128 value;  // lower part of b(x,x)*den
    std::uint64_t count;
  };
  std::map<std::vector<std::int64_t>, std::vector<Entry>> classes;

  auto reduce = [&](std::vector<std::int64_t> c) {
    for (std::size_t i = k; i-- > 0;) {
      const std::int64_t sc = scale_[i];
      std::int64_t t = c[i] / sc;
      if (c[i] - t * sc < 0) --t;
      if (t == 0) continue;
      for (std::size_t l = 0; l < i; ++l) c[l] -= center_[l * n + i] * t;
      c[i] -= sc * t;
    }
    return c;
  };
  auto histogram = [&](const std::vector<std::int64_t>& key) -> const std::vector<Entry>& {
    auto it = classes.find(key);
    if (it != classes.end()) return it->second;
    Search low(*this, max_norm);
    std::copy(key.begin(), key.end(), low.center.begin());
    std::map<i128, std::uint64_t> values;
    auto visit = [&](i128 rest, bool) { ++values[total - rest]; };
    low.walk(k - 1, 0, total, false, visit);
    std::vector<Entry> entries;
    entries.reserve(values.size());
    for (const auto& [v, c] : values) entries.push_back({v, c});
    return classes.emplace(key, std::move(entries)).first->second;
  };

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_norm) + 1, 0);
  Search up(*this, max_norm);
  std::vector<std::int64_t> key(k);
  auto visit = [&](i128 rest, bool is_zero) {
    std::copy(up.center.begin(), up.center.begin() + static_cast<std::ptrdiff_t>(k), key.begin());
    const auto& entries = histogram(reduce(key));
    const std::uint64_t weight = is_zero ? 1 : 2;
    const i128 used = total - rest;
    for (const Entry& e : entries) {
      if (e.value > rest) break;
      counts[static_cast<std::size_t>((used + e.value) / den_)] += weight * e.count;
    }
  };
  // Upper parts with a positive last nonzero coordinate, doubled, plus zero.
  up.walk(n - 1, k, total, true, visit);
  return counts;
}

void ShortVectorEnumerator::for_each(long max_norm,
                                     const std::function<void(const std::vector<long>&, long)>& visit) const {
  if (max_norm < 0) return;
  if (n_ == 0) {
    visit({}, 0);
    return;
  }
  Search s(*this, max_norm);
  const std::int64_t step2 = 2 * gram_[0];
  auto leaf = [&](std::int64_t upper, std::int64_t lo, std::int64_t hi) {
    std::int64_t norm, diff;
    s.leaf_start(upper, lo, norm, diff);
    std::vector<long> v(s.x.begin(), s.x.end());
    for (std::int64_t x0 = lo; x0 <= hi; ++x0) {
      v[0] = x0;
      visit(v, static_cast<long>(norm));
      norm += diff;
      diff += step2;
    }
  };
  s.descend(n_ - 1, s.total, 0, false, leaf);
}

std::vector<std::vector<std::size_t>> orthogonal_components(const BilinearForm& b) {
  const std::size_t n = b.rank();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (b(i, j) != 0) parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return comps;
}

BilinearForm restrict_form(const BilinearForm& b, const std::vector<std::size_t>& indices) {
  IntMatrix g(indices.size(), indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = 0; j < indices.size(); ++j) g(i, j) = b(indices[i], indices[j]);
  return BilinearForm(g);
}

}  // namespace quadtmf
