#include "quadtmf/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quadtmf/lattice_enum.hpp"

namespace quadtmf {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
const Complex kI{0, 1};

Complex cexp(const Complex& w) { return std::exp(w); }

void require_upper_half_plane(const Complex& tau) {
  if (!(tau.imag() > 0))
    throw Error(ErrorCode::NotInUpperHalfPlane, "Im(tau) must be positive");
}

void require_sl2(const Sl2& g) {
  if (g.a * g.d - g.b * g.c != 1)
    throw Error(ErrorCode::NotSL2, "matrix (" + std::to_string(g.a) + "," + std::to_string(g.b) + ";" +
                                       std::to_string(g.c) + "," + std::to_string(g.d) + ") has determinant " +
                                       std::to_string(g.a * g.d - g.b * g.c));
}

void require_rank(const BilinearForm& b, std::size_t size, const char* what) {
  if (size != b.rank())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(size) + ", expected " + std::to_string(b.rank()));
}

long double entry(const BilinearForm& b, std::size_t i, std::size_t j) { return b(i, j).get_d(); }

// b(x, y) for complex vectors.
Complex pairing(const BilinearForm& b, const std::vector<Complex>& x, const std::vector<Complex>& y) {
  Complex s = 0;
  for (std::size_t i = 0; i < b.rank(); ++i)
    for (std::size_t j = 0; j < b.rank(); ++j) s += entry(b, i, j) * x[i] * y[j];
  return s;
}

std::vector<Complex> to_complex(const std::vector<long>& v) { return {v.begin(), v.end()}; }

std::vector<long double> ldl_pivots(const BilinearForm& b) {
  RatMatrix q = to_rational(b.gram());
  const std::size_t n = b.rank();
  std::vector<long double> piv(n);
  for (std::size_t i = 0; i < n; ++i) {
    piv[i] = q(i, i).get_d();
    for (std::size_t k = i + 1; k < n; ++k) {
      const Rational f = q(k, i) / q(i, i);
      for (std::size_t l = i; l < n; ++l) q(k, l) -= f * q(i, l);
    }
  }
  return piv;
}

// Bound on sum_{b(v,v) > max_norm} |e^{pi i tau b(v,v) + 2 pi i b(v,z)}|. With
// Y = b(Im z, Im z), each term is at most e^{-pi t n + 2 pi sqrt(n Y)}, n = b(v,v).
// Splitting t = (t - s) + s gives
//   tail <= max_{n > max_norm} e^{-pi (t - s) n + 2 pi sqrt(n Y)} * sum_v e^{-pi s b(v,v)},
// and the last sum is at most prod_i (1 + 1/sqrt(s D_i)) over the LDL pivots
// D_i, since each coordinate contributes a shifted Gaussian sum. The split
// point s is optimized over a grid.
long double tail_sum(const std::vector<long double>& pivots, long double t, long double y_norm, long max_norm) {
  long double best = std::numeric_limits<long double>::infinity();
  const long double first = static_cast<long double>(max_norm + 1);
  for (int k = 1; k < 64; ++k) {
    const long double s = t * k / 64;
    const long double gap = t - s;
    long double mass = 1;
    for (long double p : pivots) mass *= 1 + 1 / std::sqrt(s * p);
    const long double peak = y_norm / (gap * gap);
    const long double n = std::max(first, peak);
    const long double decay = std::exp(-kPi * gap * n + 2 * kPi * std::sqrt(n * y_norm));
    best = std::min(best, mass * decay);
  }
  return best;
}

}  // namespace

Sl2 named_sl2(const std::string& name) {
  if (name == "I") return {1, 0, 0, 1};
  if (name == "S") return {0, -1, 1, 0};
  if (name == "T") return {1, 1, 0, 1};
  throw Error(ErrorCode::UnknownName, "unknown SL2 element '" + name + "' (known: I, S, T)");
}

Sl2 operator*(const Sl2& x, const Sl2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Sl2 random_sl2(long bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> pick(-bound, bound);
  for (;;) {
    Sl2 g{pick(rng), pick(rng), pick(rng), pick(rng)};
    if (g.a * g.d - g.b * g.c == 1) return g;
  }
}

JacobiPoint act(const JacobiElement& g, const JacobiPoint& p) {
  require_upper_half_plane(p.tau);
  if (const auto* m = std::get_if<Sl2>(&g)) {
    require_sl2(*m);
    const Complex j = static_cast<long double>(m->c) * p.tau + static_cast<long double>(m->d);
    JacobiPoint out{(static_cast<long double>(m->a) * p.tau + static_cast<long double>(m->b)) / j, p.z};
    for (auto& zi : out.z) zi /= j;
    return out;
  }
  const auto& s = std::get<LatticeShift>(g);
  if (s.m1.size() != p.z.size() || s.m2.size() != p.z.size())
    throw Error(ErrorCode::DimensionMismatch, "lattice shift and z have different lengths");
  JacobiPoint out = p;
  for (std::size_t i = 0; i < out.z.size(); ++i)
    out.z[i] += static_cast<long double>(s.m1[i]) * p.tau + static_cast<long double>(s.m2[i]);
  return out;
}

JacobiEvaluator::JacobiEvaluator(BilinearForm b, double cutoff, int precision)
    : b_(std::move(b)), cutoff_(cutoff), precision_(precision) {
  if (!(cutoff >= 1)) throw Error(ErrorCode::PreconditionFailed, "cutoff radius must be at least 1");
  if (precision < 53 || precision > std::numeric_limits<long double>::digits)
    throw Error(ErrorCode::PreconditionFailed,
                "precision must lie in [53, " + std::to_string(std::numeric_limits<long double>::digits) + "] bits");
  if (!is_positive_definite(b_)) return;
  pivots_ = ldl_pivots(b_);
  const long max_norm = static_cast<long>(std::floor(2 * cutoff * cutoff + 1e-9));
  ShortVectorEnumerator(b_).for_each(max_norm, [&](const std::vector<long>& v, long norm) {
    coords_.insert(coords_.end(), v.begin(), v.end());
    norms_.push_back(norm);
  });
}

double JacobiEvaluator::required_cutoff(const BilinearForm& b, const std::vector<JacobiPoint>& points,
                                        long double tol) {
  if (!is_positive_definite(b)) throw Error(ErrorCode::NotPositiveDefinite, "theta needs a positive definite form");
  const auto pivots = ldl_pivots(b);
  long needed = 2;
  for (const auto& p : points) {
    require_upper_half_plane(p.tau);
    require_rank(b, p.z.size(), "z");
    std::vector<Complex> y(p.z.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.z[i].imag();
    const long double y_norm = pairing(b, y, y).real();
    while (tail_sum(pivots, p.tau.imag(), y_norm, needed) > tol) {
      if (needed > 4096) throw Error(ErrorCode::TailBoundTooLarge, "no cutoff up to norm 4096 reaches the tolerance");
      ++needed;
    }
  }
  return std::sqrt(static_cast<double>(needed) / 2);
}

long double JacobiEvaluator::tail_bound(const JacobiPoint& p) const {
  require_upper_half_plane(p.tau);
  require_rank(b_, p.z.size(), "z");
  if (pivots_.empty() && b_.rank() > 0) throw Error(ErrorCode::NotPositiveDefinite, "theta needs a positive definite form");
  std::vector<Complex> y(p.z.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.z[i].imag();
  const long max_norm = static_cast<long>(std::floor(2 * cutoff_ * cutoff_ + 1e-9));
  return tail_sum(pivots_, p.tau.imag(), pairing(b_, y, y).real(), max_norm);
}

ThetaValue JacobiEvaluator::theta_eval(const JacobiPoint& p, long double tol) const {
  ThetaValue out;
  out.tail_bound = tail_bound(p);
  if (!(out.tail_bound <= tol))
    throw Error(ErrorCode::TailBoundTooLarge, "tail bound exceeds the tolerance; increase the cutoff");
  const std::size_t n = b_.rank();
  std::vector<Complex> bz(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) bz[i] += entry(b_, i, j) * p.z[j];
  // e^{2 pi i v_i (Bz)_i} from tables of integer powers, e^{pi i tau n} per norm.
  long reach = 0;
  for (long c : coords_) reach = std::max(reach, std::abs(c));
  const std::size_t width = static_cast<std::size_t>(2 * reach + 1);
  std::vector<Complex> powers(n * width);
  for (std::size_t i = 0; i < n; ++i)
    for (long c = -reach; c <= reach; ++c)
      powers[i * width + static_cast<std::size_t>(c + reach)] = cexp(2.0L * kI * kPi * static_cast<long double>(c) * bz[i]);
  const long top = norms_.empty() ? 0 : *std::max_element(norms_.begin(), norms_.end());
  std::vector<Complex> by_norm(static_cast<std::size_t>(top) + 1);
  for (long m = 0; m <= top; ++m) by_norm[static_cast<std::size_t>(m)] = cexp(kI * kPi * p.tau * static_cast<long double>(m));
  Complex sum = 0;
  for (std::size_t k = 0; k < norms_.size(); ++k) {
    Complex term = by_norm[static_cast<std::size_t>(norms_[k])];
    for (std::size_t i = 0; i < n; ++i) {
      const long c = coords_[k * n + i];
      if (c != 0) term *= powers[i * width + static_cast<std::size_t>(c + reach)];
    }
    sum += term;
  }
  out.value = sum;
  return out;
}

Complex cocycle_factor(const BilinearForm& b, const JacobiElement& g, const JacobiPoint& p) {
  require_upper_half_plane(p.tau);
  require_rank(b, p.z.size(), "z");
  if (const auto* m = std::get_if<Sl2>(&g)) {
    require_sl2(*m);
    const Complex j = static_cast<long double>(m->c) * p.tau + static_cast<long double>(m->d);
    return cexp(kI * kPi * static_cast<long double>(m->c) / j * pairing(b, p.z, p.z));
  }
  const auto& s = std::get<LatticeShift>(g);
  require_rank(b, s.m1.size(), "m1");
  require_rank(b, s.m2.size(), "m2");
  const auto m1 = to_complex(s.m1);
  return cexp(-2.0L * kI * kPi * (pairing(b, p.z, m1) + pairing(b, m1, m1) * p.tau / 2.0L));
}

TransformationReport check_transformation(const JacobiEvaluator& ev, const JacobiElement& g,
                                          const std::vector<JacobiPoint>& samples, long double tol) {
  const BilinearForm& b = ev.form();
  Complex weight_base = 1;
  const Sl2* m = std::get_if<Sl2>(&g);
  if (m) {
    require_sl2(*m);
    if (!b.is_even()) throw Error(ErrorCode::PreconditionFailed, "the SL2 law is only checked for even forms");
    if (m->c != 0 && !signature(b).unimodular)
      throw Error(ErrorCode::PreconditionFailed, "the S-type law is only checked for unimodular forms");
  }
  const long double eval_tol = tol / 100;
  TransformationReport report;
  report.tolerance = tol;
  for (const auto& p : samples) {
    const JacobiPoint q = act(g, p);
    const Complex lhs = ev.theta_eval(q, eval_tol).value;
    const Complex base = ev.theta_eval(p, eval_tol).value;
    Complex rhs;
    if (m) {
      weight_base = static_cast<long double>(m->c) * p.tau + static_cast<long double>(m->d);
      const std::size_t d = b.rank();
      Complex w = 1;
      if (d % 2 == 0)
        for (std::size_t k = 0; k < d / 2; ++k) w *= weight_base;
      else
        w = std::pow(weight_base, static_cast<long double>(d) / 2);
      rhs = w * cocycle_factor(b, g, p) * base;
    } else {
      rhs = cocycle_factor(b, g, p) * base;
    }
    const long double r = std::abs(lhs - rhs);
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  return report;
}

long double cocycle_residual(const BilinearForm& b, const Sl2& g1, const Sl2& g2, const JacobiPoint& p) {
  const Complex whole = cocycle_factor(b, g1 * g2, p);
  const Complex split = cocycle_factor(b, g1, act(g2, p)) * cocycle_factor(b, g2, p);
  return std::abs(whole - split);
}

std::vector<JacobiPoint> random_points(std::size_t rank, std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re_tau(-0.5, 0.5), im_tau(0.8, 1.6), re_z(-0.25, 0.25), im_z(-0.05, 0.05);
  std::vector<JacobiPoint> pts;
  for (std::size_t k = 0; k < count; ++k) {
    JacobiPoint p{Complex(re_tau(rng), im_tau(rng)), {}};
    for (std::size_t i = 0; i < rank; ++i) p.z.emplace_back(re_z(rng), im_z(rng));
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace quadtmf
