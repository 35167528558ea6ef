#include "quadtmf/tmf_module.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

namespace quadtmf {

namespace {

int core_offset(const BilinearForm& core) {
  const SignatureRecord s = signature(core);
  return 2 * static_cast<int>(s.b_minus) - 3 * static_cast<int>(s.b_plus);
}

std::string shift_suffix(int s) { return s == 0 ? "" : "[" + std::to_string(s) + "]"; }

std::string gram_label(const BilinearForm& b) {
  if (b.rank() == 1) return "L_(" + b(0, 0).get_str() + ")";
  std::string s = "L_[";
  for (std::size_t i = 0; i < b.rank(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < b.rank(); ++j) s += (j ? "," : "") + b(i, j).get_str();
    s += "]";
  }
  return s + "]";
}

TorsionLinkingForm half_power(std::size_t k) {
  std::vector<BigInt> f(k, BigInt(2));
  RatMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) m(i, i) = Rational(1, 2);
  return TorsionLinkingForm(f, m);
}

}  // namespace

ModuleSummand::ModuleSummand(const BilinearForm& core, int extra_shift)
    : torsion_(discriminant(core).torsion), representative_(core), class_shift_(core_offset(core) + extra_shift) {
  if (signature(core).b_zero != 0)
    throw Error(ErrorCode::PreconditionFailed, "module summands need a nondegenerate core form");
  classify();
}

void ModuleSummand::classify() {
  kind_ = SummandKind::OpaqueL;
  cone_power_ = 0;
  if (torsion_.trivial()) {
    kind_ = SummandKind::Tmf;
    return;
  }
  const std::size_t k = torsion_.size();
  const bool elementary_two = std::all_of(torsion_.factors().begin(), torsion_.factors().end(),
                                          [](const BigInt& d) { return d == 2; });
  if (elementary_two && k < 14 && torsion_forms_isomorphic(torsion_, half_power(k)).is_true()) {
    kind_ = SummandKind::ConeNu;
    cone_power_ = k;
  }
}

int ModuleSummand::display_shift() const {
  switch (kind_) {
    case SummandKind::Tmf:
      return class_shift_;
    case SummandKind::ConeNu:
      return class_shift_ - 2 * static_cast<int>(cone_power_);
    case SummandKind::OpaqueL:
      break;
  }
  return class_shift_ - core_offset(representative_);
}

std::optional<BigInt> ModuleSummand::copies_after_inverting_6() const {
  if (representative_.rank() == 1 && representative_(0, 0) >= 1) return representative_(0, 0);
  return std::nullopt;
}

ModuleSummand ModuleSummand::shifted(int n) const {
  ModuleSummand s = *this;
  s.class_shift_ += n;
  return s;
}

ModuleSummand ModuleSummand::dual() const {
  ModuleSummand s;
  s.torsion_ = torsion_.negated();
  s.representative_ = representative_.negated();
  s.class_shift_ = -class_shift_;
  s.kind_ = kind_;
  s.cone_power_ = cone_power_;
  return s;
}

ModuleSummand tensor(const ModuleSummand& a, const ModuleSummand& b) {
  ModuleSummand s;
  s.torsion_ = orthogonal_sum(a.torsion_, b.torsion_);
  s.representative_ = direct_sum(a.representative_, b.representative_);
  s.class_shift_ = a.class_shift_ + b.class_shift_;
  if (a.kind_ == SummandKind::Tmf) {
    s.kind_ = b.kind_;
    s.cone_power_ = b.cone_power_;
  } else if (b.kind_ == SummandKind::Tmf) {
    s.kind_ = a.kind_;
    s.cone_power_ = a.cone_power_;
  } else if (a.kind_ == SummandKind::ConeNu && b.kind_ == SummandKind::ConeNu) {
    s.kind_ = SummandKind::ConeNu;
    s.cone_power_ = a.cone_power_ + b.cone_power_;
  } else {
    s.classify();
  }
  return s;
}

std::string ModuleSummand::to_string() const {
  const std::string sfx = shift_suffix(display_shift());
  switch (kind_) {
    case SummandKind::Tmf:
      return "TMF" + sfx;
    case SummandKind::ConeNu:
      return cone_power_ == 1 ? "Cone(ν)" + sfx : "Cone(ν)^{⊗" + std::to_string(cone_power_) + "}" + sfx;
    case SummandKind::OpaqueL:
      break;
  }
  return gram_label(representative_) + sfx;
}

NormalForm NormalForm::tmf(int shift) {
  NormalForm m;
  m.add(ModuleSummand(BilinearForm(), shift));
  return m;
}

NormalForm NormalForm::cone_nu(int shift) {
  // Cone(nu) = L_(-2).
  return line(BilinearForm::diagonal({-2})).shifted(shift);
}

NormalForm NormalForm::line(const BilinearForm& core) {
  NormalForm m;
  m.add(ModuleSummand(core, 0));
  return m;
}

bool NormalForm::has_opaque() const {
  return std::any_of(summands_.begin(), summands_.end(),
                     [](const ModuleSummand& s) { return s.kind() == SummandKind::OpaqueL; });
}

void NormalForm::add(ModuleSummand s) { summands_.push_back(std::move(s)); }

void NormalForm::sort() {
  // Smallest |shift| first, nonnegative before negative: TMF + TMF[-1].
  auto key = [](const ModuleSummand& s) {
    const int d = s.display_shift();
    return std::make_tuple(std::abs(d), -d, static_cast<int>(s.kind()), s.cone_power(), s.torsion().order(),
                           s.to_string());
  };
  std::stable_sort(summands_.begin(), summands_.end(),
                   [&](const ModuleSummand& a, const ModuleSummand& b) { return key(a) < key(b); });
}

NormalForm NormalForm::shifted(int n) const {
  NormalForm m;
  for (const auto& s : summands_) m.add(s.shifted(n));
  m.sort();
  return m;
}

NormalForm NormalForm::dual() const {
  NormalForm m;
  for (const auto& s : summands_) m.add(s.dual());
  m.sort();
  return m;
}

NormalForm direct_sum(const NormalForm& a, const NormalForm& b) {
  NormalForm m = a;
  for (const auto& s : b.summands_) m.add(s);
  m.sort();
  return m;
}

NormalForm tensor(const NormalForm& a, const NormalForm& b) {
  NormalForm m;
  for (const auto& x : a.summands_)
    for (const auto& y : b.summands_) m.add(tensor(x, y));
  m.sort();
  return m;
}

Decision NormalForm::equivalent(const NormalForm& other, std::uint64_t budget) const {
  if (summands_.size() != other.summands_.size()) return Decision::decided(false);
  std::vector<char> used(other.summands_.size(), 0);
  bool inconclusive = false;
  for (const auto& s : summands_) {
    bool matched = false;
    for (std::size_t j = 0; j < other.summands_.size() && !matched; ++j) {
      const auto& t = other.summands_[j];
      if (used[j] || t.class_shift() != s.class_shift() || t.torsion().factors() != s.torsion().factors()) continue;
      // Equal representatives have isomorphic discriminants whatever the group order.
      if (t.representative() == s.representative()) {
        used[j] = 1;
        matched = true;
        continue;
      }
      try {
        if (torsion_forms_isomorphic(s.torsion(), t.torsion(), budget).is_true()) {
          used[j] = 1;
          matched = true;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
        inconclusive = true;
      }
    }
    if (!matched) {
      if (inconclusive) return Decision::inconclusive("torsion isomorphism budget exhausted");
      return Decision::decided(false);
    }
  }
  return Decision::decided(true);
}

std::string NormalForm::to_string() const {
  if (summands_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < summands_.size();) {
    const std::string label = summands_[i].to_string();
    std::size_t j = i + 1;
    while (j < summands_.size() && summands_[j].to_string() == label) ++j;
    if (!out.empty()) out += " ⊕ ";
    out += label;
    if (j - i > 1) out += "^{⊕" + std::to_string(j - i) + "}";
    i = j;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const NormalForm& m) { return os << m.to_string(); }

struct TmfModuleExpr::Node {
  Kind kind = Kind::Tmf;
  int shift = 0;
  BilinearForm form;
  std::vector<TmfModuleExpr> children;
};

TmfModuleExpr::TmfModuleExpr() : node_(std::make_shared<Node>()) {}

TmfModuleExpr TmfModuleExpr::tmf(int shift) {
  return TmfModuleExpr(std::make_shared<const Node>(Node{Kind::Tmf, shift, {}, {}}));
}

TmfModuleExpr TmfModuleExpr::cone_nu(int shift) {
  return TmfModuleExpr(std::make_shared<const Node>(Node{Kind::ConeNu, shift, {}, {}}));
}

TmfModuleExpr TmfModuleExpr::line(const BilinearForm& b, int shift) {
  return TmfModuleExpr(std::make_shared<const Node>(Node{Kind::Line, shift, b, {}}));
}

TmfModuleExpr TmfModuleExpr::sum(std::vector<TmfModuleExpr> parts, int shift) {
  return TmfModuleExpr(std::make_shared<const Node>(Node{Kind::Sum, shift, {}, std::move(parts)}));
}

TmfModuleExpr TmfModuleExpr::tensor(std::vector<TmfModuleExpr> factors, int shift) {
  return TmfModuleExpr(std::make_shared<const Node>(Node{Kind::Tensor, shift, {}, std::move(factors)}));
}

TmfModuleExpr::Kind TmfModuleExpr::kind() const { return node_->kind; }
int TmfModuleExpr::shift() const { return node_->shift; }
const std::vector<TmfModuleExpr>& TmfModuleExpr::children() const { return node_->children; }
const BilinearForm& TmfModuleExpr::form() const { return node_->form; }

TmfModuleExpr TmfModuleExpr::shifted(int n) const {
  Node copy = *node_;
  copy.shift += n;
  return TmfModuleExpr(std::make_shared<const Node>(std::move(copy)));
}

NormalForm TmfModuleExpr::normal_form() const {
  NormalForm m;
  switch (node_->kind) {
    case Kind::Tmf:
      m = NormalForm::tmf();
      break;
    case Kind::ConeNu:
      m = NormalForm::cone_nu();
      break;
    case Kind::Line: {
      const RadicalSplit split = radical_split(node_->form);
      m = NormalForm::line(split.core);
      const NormalForm l0 = direct_sum(NormalForm::tmf(0), NormalForm::tmf(-1));
      for (std::size_t i = 0; i < split.zero_rank; ++i) m = quadtmf::tensor(m, l0);
      break;
    }
    case Kind::Sum:
      for (const auto& c : node_->children) m = direct_sum(m, c.normal_form());
      break;
    case Kind::Tensor:
      m = NormalForm::tmf();
      for (const auto& c : node_->children) m = quadtmf::tensor(m, c.normal_form());
      break;
  }
  return node_->shift ? m.shifted(node_->shift) : m;
}

namespace {

std::string render(const TmfModuleExpr& m, bool nested) {
  const std::string sfx = shift_suffix(m.shift());
  switch (m.kind()) {
    case TmfModuleExpr::Kind::Tmf:
      return "TMF" + sfx;
    case TmfModuleExpr::Kind::ConeNu:
      return "Cone(ν)" + sfx;
    case TmfModuleExpr::Kind::Line:
      return (m.form().rank() == 0 ? "L_()" : gram_label(m.form())) + sfx;
    case TmfModuleExpr::Kind::Sum: {
      if (m.children().empty()) return "0";
      std::string s;
      for (const auto& c : m.children()) s += (s.empty() ? "" : " ⊕ ") + render(c, true);
      return nested || m.shift() ? "(" + s + ")" + sfx : s;
    }
    case TmfModuleExpr::Kind::Tensor: {
      if (m.children().empty()) return "TMF" + sfx;
      std::string s;
      const auto& ch = m.children();
      for (std::size_t i = 0; i < ch.size();) {
        const std::string label = render(ch[i], true);
        std::size_t j = i + 1;
        while (j < ch.size() && render(ch[j], true) == label) ++j;
        s += (s.empty() ? "" : " ⊗ ") + label;
        if (j - i > 1) s += "^{⊗" + std::to_string(j - i) + "}";
        i = j;
      }
      return (nested && ch.size() > 1) || m.shift() ? "(" + s + ")" + sfx : s;
    }
  }
  return {};
}

}  // namespace

std::string TmfModuleExpr::to_string() const { return render(*this, false); }

TmfModuleExpr from_bilinear(const BilinearForm& b) {
  const RadicalSplit split = radical_split(b);
  std::vector<TmfModuleExpr> factors(split.zero_rank,
                                     TmfModuleExpr::sum({TmfModuleExpr::tmf(0), TmfModuleExpr::tmf(-1)}));
  const BilinearForm& core = split.core;
  if (core.rank() > 0) {
    const ModuleSummand s(core, 0);
    switch (s.kind()) {
      case SummandKind::Tmf:
        factors.push_back(TmfModuleExpr::tmf(s.display_shift()));
        break;
      case SummandKind::ConeNu:
        if (s.cone_power() == 1) {
          factors.push_back(TmfModuleExpr::cone_nu(s.display_shift()));
        } else {
          factors.push_back(TmfModuleExpr::tensor(
              std::vector<TmfModuleExpr>(s.cone_power(), TmfModuleExpr::cone_nu()), s.display_shift()));
        }
        break;
      case SummandKind::OpaqueL:
        factors.push_back(TmfModuleExpr::line(core));
        break;
    }
  }
  if (factors.empty()) return TmfModuleExpr::tmf();
  if (factors.size() == 1) return factors.front();
  return TmfModuleExpr::tensor(std::move(factors));
}

TmfModuleExpr dual(const TmfModuleExpr& m) {
  switch (m.kind()) {
    case TmfModuleExpr::Kind::Tmf:
      return TmfModuleExpr::tmf(-m.shift());
    case TmfModuleExpr::Kind::ConeNu:
      return TmfModuleExpr::cone_nu(-4 - m.shift());
    case TmfModuleExpr::Kind::Line:
      return TmfModuleExpr::line(m.form().negated(), static_cast<int>(m.form().rank()) - m.shift());
    case TmfModuleExpr::Kind::Sum:
    case TmfModuleExpr::Kind::Tensor: {
      std::vector<TmfModuleExpr> parts;
      for (const auto& c : m.children()) parts.push_back(dual(c));
      return m.kind() == TmfModuleExpr::Kind::Sum ? TmfModuleExpr::sum(std::move(parts), -m.shift())
                                                   : TmfModuleExpr::tensor(std::move(parts), -m.shift());
    }
  }
  return m;
}

TmfMap::TmfMap(std::vector<int> source_shifts, std::vector<int> target_shifts, int degree,
               std::vector<std::vector<TmfElement>> entries)
    : source_(std::move(source_shifts)), target_(std::move(target_shifts)), degree_(degree),
      entries_(std::move(entries)) {
  if (entries_.size() != target_.size())
    throw Error(ErrorCode::ShapeMismatch, "matrix needs one row per target summand");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].size() != source_.size())
      throw Error(ErrorCode::ShapeMismatch, "matrix needs one column per source summand");
    for (std::size_t j = 0; j < source_.size(); ++j)
      if (entries_[i][j].degree() != entry_degree(i, j))
        throw Error(ErrorCode::ShapeMismatch, "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                  ") has degree " + std::to_string(entries_[i][j].degree()) +
                                                  ", expected " + std::to_string(entry_degree(i, j)));
  }
}

TmfMap TmfMap::identity(const std::vector<int>& shifts, const TmfCoeffTable& table) {
  std::vector<std::vector<TmfElement>> e(shifts.size());
  for (std::size_t i = 0; i < shifts.size(); ++i)
    for (std::size_t j = 0; j < shifts.size(); ++j)
      e[i].push_back(i == j ? table.unit(1) : table.zero(shifts[j] - shifts[i]));
  return TmfMap(shifts, shifts, 0, std::move(e));
}

NormalForm TmfMap::source_module() const {
  NormalForm m;
  for (int s : source_) m = direct_sum(m, NormalForm::tmf(s));
  return m;
}

NormalForm TmfMap::target_module() const {
  NormalForm m;
  for (int s : target_) m = direct_sum(m, NormalForm::tmf(s));
  return m;
}

std::string TmfMap::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < rows(); ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < cols(); ++j) s += (j ? " " : "") + entries_[i][j].to_string();
  }
  s += ")";
  auto sum_label = [](const std::vector<int>& shifts) {
    std::string t;
    for (int x : shifts) t += (t.empty() ? "" : " ⊕ ") + std::string("TMF") + shift_suffix(x);
    return t.empty() ? std::string("0") : t;
  };
  return s + " : " + sum_label(source_) + " -> " + sum_label(target_) +
         (degree_ ? " (degree " + std::to_string(degree_) + ")" : "");
}

TmfMap compose(const TmfMap& f, const TmfMap& g, const TmfCoeffTable& table) {
  if (g.target_shifts() != f.source_shifts())
    throw Error(ErrorCode::ShapeMismatch, "cannot compose: target of the inner map differs from source of the outer map");
  const int degree = f.degree() + g.degree();
  std::vector<std::vector<TmfElement>> e(f.rows());
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      TmfElement acc = table.zero(g.source_shifts()[j] - f.target_shifts()[i] + degree);
      for (std::size_t k = 0; k < f.cols(); ++k) acc = table.add(acc, table.mul(f.entry(i, k), g.entry(k, j)));
      e[i].push_back(std::move(acc));
    }
  return TmfMap(g.source_shifts(), f.target_shifts(), degree, std::move(e));
}

TmfMap builtin_map(const std::string& name, int sign, const TmfCoeffTable& table) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::PreconditionFailed, "sign must be +1 or -1");
  const TmfElement one = table.unit(1);
  const TmfElement s = table.unit(sign);
  const TmfElement eta = table.generator("eta");
  if (name == "restriction_L0") return TmfMap({0, 1}, {0}, 0, {{one, eta}});
  if (name == "transfer_L0") return TmfMap({1}, {0, 1}, 0, {{eta}, {s}});
  if (name == "duality_L0") return TmfMap({-1, 0}, {0, -1}, 0, {{table.zero(-1), s}, {s, eta}});
  if (name == "twist_L0dual") return TmfMap({0, 1}, {0, 1}, 0, {{s, eta}, {table.zero(-1), s}});
  throw Error(ErrorCode::UnknownName, "unknown builtin map '" + name + "'");
}

std::vector<std::string> builtin_map_names() {
  return {"restriction_L0", "transfer_L0", "duality_L0", "twist_L0dual"};
}

}  // namespace quadtmf
