#include "quadtmf/kirby.hpp"

#include "quadtmf/discform.hpp"
#include "quadtmf/invariants.hpp"
#include "quadtmf/tmf_module.hpp"

namespace quadtmf {

FramedLink::FramedLink(std::vector<BigInt> framings, IntMatrix linking)
    : framings_(std::move(framings)), linking_(std::move(linking)) {
  const std::size_t n = framings_.size();
  if (linking_.rows() != n || linking_.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "linking matrix must be n x n for n framings");
  if (!linking_.is_symmetric()) throw Error(ErrorCode::ValidationError, "linking matrix must be symmetric");
  for (std::size_t i = 0; i < n; ++i)
    if (linking_(i, i) != 0) throw Error(ErrorCode::ValidationError, "linking matrix must have zero diagonal");
}

FramedLink FramedLink::unknot(long framing) { return FramedLink({BigInt(framing)}, IntMatrix(1, 1)); }

FramedLink FramedLink::unlink(std::size_t components, long framing) {
  return FramedLink(std::vector<BigInt>(components, BigInt(framing)), IntMatrix(components, components));
}

FramedLink FramedLink::hopf(long f1, long f2) {
  return FramedLink({BigInt(f1), BigInt(f2)}, IntMatrix{{0, 1}, {1, 0}});
}

FramedLink FramedLink::from_gram(const BilinearForm& b) {
  const std::size_t n = b.rank();
  std::vector<BigInt> f(n);
  IntMatrix lk = b.gram();
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = lk(i, i);
    lk(i, i) = 0;
  }
  return FramedLink(std::move(f), std::move(lk));
}

BilinearForm FramedLink::gram() const {
  IntMatrix g = linking_;
  for (std::size_t i = 0; i < size(); ++i) g(i, i) = framings_[i];
  return BilinearForm(g);
}

IntMatrix slide_matrix(std::size_t n, const HandleSlide& s) {
  IntMatrix e = IntMatrix::identity(n);
  e(s.over, s.target) = s.sign;
  return e;
}

namespace {

struct MoveApplier {
  const FramedLink& link;

  FramedLink operator()(const BlowUp& m) const {
    if (m.sign != 1 && m.sign != -1) throw Error(ErrorCode::IllegalMove, "blow-up sign must be +1 or -1");
    const std::size_t n = link.size();
    std::vector<BigInt> f = link.framings();
    f.emplace_back(m.sign);
    IntMatrix lk(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) lk(i, j) = link.linking()(i, j);
    return FramedLink(std::move(f), std::move(lk));
  }

  FramedLink operator()(const BlowDown& m) const {
    const std::size_t n = link.size();
    if (m.index >= n)
      throw Error(ErrorCode::IllegalMove, "blow-down index " + std::to_string(m.index + 1) + " out of range");
    const BigInt& f = link.framings()[m.index];
    if (f != 1 && f != -1)
      throw Error(ErrorCode::IllegalMove,
                  "blow-down of component " + std::to_string(m.index + 1) + " with framing " + f.get_str());
    for (std::size_t j = 0; j < n; ++j)
      if (link.linking()(m.index, j) != 0)
        throw Error(ErrorCode::IllegalMove,
                    "component " + std::to_string(m.index + 1) + " links component " + std::to_string(j + 1));
    std::vector<BigInt> nf;
    IntMatrix lk(n - 1, n - 1);
    for (std::size_t i = 0, a = 0; i < n; ++i) {
      if (i == m.index) continue;
      nf.push_back(link.framings()[i]);
      for (std::size_t j = 0, c = 0; j < n; ++j) {
        if (j == m.index) continue;
        lk(a, c++) = link.linking()(i, j);
      }
      ++a;
    }
    return FramedLink(std::move(nf), std::move(lk));
  }

  FramedLink operator()(const HandleSlide& m) const {
    const std::size_t n = link.size();
    if (m.target >= n || m.over >= n) throw Error(ErrorCode::IllegalMove, "handle slide index out of range");
    if (m.target == m.over) throw Error(ErrorCode::IllegalMove, "cannot slide a component over itself");
    if (m.sign != 1 && m.sign != -1) throw Error(ErrorCode::IllegalMove, "handle slide sign must be +1 or -1");
    const std::size_t i = m.target, j = m.over;
    std::vector<BigInt> f = link.framings();
    IntMatrix lk = link.linking();
    f[i] = f[i] + f[j] + 2 * m.sign * link.linking()(i, j);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      // lk(i,j) picks up sign * framing(j) because e_j . e_j is the framing.
      const BigInt add = k == j ? BigInt(m.sign * link.framings()[j]) : BigInt(m.sign * link.linking()(j, k));
      lk(i, k) += add;
      lk(k, i) = lk(i, k);
    }
    return FramedLink(std::move(f), std::move(lk));
  }
};

struct MoveDescriber {
  std::string operator()(const BlowUp& m) const { return std::string("blowup(") + (m.sign > 0 ? "+1" : "-1") + ")"; }
  std::string operator()(const BlowDown& m) const { return "blowdown(" + std::to_string(m.index + 1) + ")"; }
  std::string operator()(const HandleSlide& m) const {
    return "slide(" + std::to_string(m.target + 1) + "," + std::to_string(m.over + 1) + "," +
           (m.sign > 0 ? "+1" : "-1") + ")";
  }
};

}  // namespace

FramedLink apply_move(const FramedLink& link, const KirbyMove& move) {
  return std::visit(MoveApplier{link}, move);
}

std::string describe(const KirbyMove& move) { return std::visit(MoveDescriber{}, move); }

InvarianceReport verify_boundary_invariance(const FramedLink& link, const std::vector<KirbyMove>& moves) {
  InvarianceReport rep;
  const BilinearForm g0 = link.gram();
  const DiscriminantData d0 = discriminant(g0);
  const NormalForm z0 = z3(ThreeManifoldPresentation{link, ""}).normal_form;
  SignatureRecord expected = signature(g0);

  FramedLink cur = link;
  for (const KirbyMove& m : moves) {
    const FramedLink next = apply_move(cur, m);
    if (const auto* up = std::get_if<BlowUp>(&m)) {
      (up->sign > 0 ? expected.b_plus : expected.b_minus) += 1;
    } else if (const auto* down = std::get_if<BlowDown>(&m)) {
      (cur.framings()[down->index] > 0 ? expected.b_plus : expected.b_minus) -= 1;
    }
    cur = next;
    ++rep.moves_applied;
    const std::string where = "after move " + std::to_string(rep.moves_applied) + " " + describe(m);

    const SignatureRecord s = signature(cur.gram());
    if (s.b_plus != expected.b_plus || s.b_minus != expected.b_minus || s.b_zero != expected.b_zero) {
      rep.signature_bookkeeping = false;
      rep.failures.push_back("signature drift " + where);
    }
    const DiscriminantData d = discriminant(cur.gram());
    const Decision iso = d.free_rank == d0.free_rank ? torsion_forms_isomorphic(d.torsion, d0.torsion)
                                                     : Decision::decided(false);
    if (!iso.is_true()) {
      rep.discriminant_preserved = false;
      rep.failures.push_back("discriminant changed " + where);
    }
    const NormalForm z = z3(ThreeManifoldPresentation{cur, ""}).normal_form;
    if (!z.equivalent(z0).is_true()) {
      rep.module_preserved = false;
      rep.failures.push_back("module changed " + where + ": " + z.to_string() + " vs " + z0.to_string());
    }
  }
  return rep;
}

std::vector<KirbyMove> random_legal_moves(const FramedLink& link, std::size_t max_length, std::mt19937_64& rng) {
  std::vector<KirbyMove> moves;
  FramedLink cur = link;
  const std::size_t length = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, max_length))(rng);
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t step = 0; step < length; ++step) {
    std::vector<KirbyMove> options;
    options.push_back(BlowUp{coin(rng) ? 1 : -1});
    for (std::size_t i = 0; i < cur.size(); ++i) {
      bool split = cur.framings()[i] == 1 || cur.framings()[i] == -1;
      for (std::size_t j = 0; j < cur.size() && split; ++j) split = cur.linking()(i, j) == 0;
      if (split) options.push_back(BlowDown{i});
    }
    if (cur.size() >= 2) {
      std::uniform_int_distribution<std::size_t> pick(0, cur.size() - 1);
      for (int t = 0; t < 3; ++t) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) j = (j + 1) % cur.size();
        options.push_back(HandleSlide{i, j, coin(rng) ? 1 : -1});
      }
    }
    const KirbyMove m = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    cur = apply_move(cur, m);
    moves.push_back(m);
  }
  return moves;
}

}  // namespace quadtmf
