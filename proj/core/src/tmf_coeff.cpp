#include "quadtmf/tmf_coeff.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "embedded_data.hpp"
#include "quadtmf/json_io.hpp"

namespace quadtmf {

namespace {

constexpr const char* kUnit = "1";

Provenance parse_provenance(const Json& j, const std::string& where) {
  const std::string p = j.value("provenance", "external");
  if (p == "primary") return Provenance::Primary;
  if (p == "external") return Provenance::External;
  throw Error(ErrorCode::ValidationError, where + ": unknown provenance '" + p + "'");
}

// Representative of c mod m in (-m/2, m/2].
BigInt balanced_mod(const BigInt& c, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  if (2 * r > m) r -= m;
  return r;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::size_t GroupPresentation::free_rank() const {
  std::size_t n = 0;
  for (const auto& g : generators) n += g.order == 0;
  return n;
}

std::vector<BigInt> GroupPresentation::torsion_orders() const {
  std::vector<BigInt> out;
  for (const auto& g : generators)
    if (g.order != 0) out.push_back(g.order);
  return out;
}

std::string GroupPresentation::to_string() const {
  if (generators.empty()) return complete ? "0" : "?";
  std::string s;
  for (const auto& g : generators) {
    if (!s.empty()) s += " + ";
    if (g.order == 0)
      s += g.name == kUnit ? "Z[j]" : "Z[j]{" + g.name + "}";
    else
      s += "Z/" + g.order.get_str() + "{" + g.name + "}";
  }
  if (!complete) s += " + ?";
  return s;
}

TmfElement TmfElement::unknown(int degree, std::string reason) {
  TmfElement e(degree);
  e.unknown_ = std::move(reason);
  return e;
}

const std::string& TmfElement::unknown_reason() const {
  static const std::string none;
  return unknown_ ? *unknown_ : none;
}

std::string TmfElement::to_string() const {
  if (is_unknown()) return "unknown";
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [mono, coeff] : terms_) {
    BigInt c = coeff;
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    c = abs(c);
    std::string body;
    if (mono.j_power > 0) body = mono.j_power == 1 ? "j" : "j^" + std::to_string(mono.j_power);
    if (mono.generator != kUnit) body += (body.empty() ? "" : "*") + mono.generator;
    if (body.empty())
      s += c.get_str();
    else
      s += (c == 1 ? "" : c.get_str() + "*") + body;
    first = false;
  }
  return s;
}

TmfCoeffTable TmfCoeffTable::from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("pi_* table is not valid JSON: ") + e.what());
  }
  TmfCoeffTable t;
  try {
    if (doc.value("schema", "") != "quadtmf.pi_tmf")
      throw Error(ErrorCode::ValidationError, "unexpected schema tag (want quadtmf.pi_tmf)");
    if (doc.value("version", 0) != 1) throw Error(ErrorCode::ValidationError, "unsupported table version");
    const auto& range = doc.at("degree_range");
    t.range_ = {range.at(0).get<int>(), range.at(1).get<int>()};
    const auto& poly = doc.at("polynomial_generator");
    t.polynomial_generator_ = poly.at("name").get<std::string>();
    if (poly.value("degree", 0) != 0)
      throw Error(ErrorCode::ValidationError, "polynomial generator must live in degree 0");
    t.polynomial_provenance_ = parse_provenance(poly, "polynomial_generator");
    for (const auto& u : doc.at("units")) t.units_.push_back(u.get<int>());

    for (const auto& g : doc.at("groups")) {
      GroupPresentation p;
      p.degree = g.at("degree").get<int>();
      p.complete = g.at("complete").get<bool>();
      p.provenance = parse_provenance(g, "group " + std::to_string(p.degree));
      for (const auto& gen : g.at("generators")) {
        CoeffGenerator c;
        c.name = gen.at("name").get<std::string>();
        c.degree = p.degree;
        c.order = bigint_from_json(gen.at("order"));
        c.provenance = p.provenance;
        if (c.order < 0) throw Error(ErrorCode::ValidationError, "generator " + c.name + " has negative order");
        if (!t.generators_.emplace(c.name, c).second)
          throw Error(ErrorCode::ValidationError, "generator " + c.name + " listed twice");
        p.generators.push_back(std::move(c));
      }
      if (!t.groups_.emplace(p.degree, std::move(p)).second)
        throw Error(ErrorCode::ValidationError, "degree " + std::to_string(g.at("degree").get<int>()) + " listed twice");
    }
    for (const auto& pr : doc.value("products", Json::array())) {
      std::map<std::string, BigInt> result;
      for (const auto& [name, coeff] : pr.at("result").items()) result[name] = bigint_from_json(coeff);
      const auto key = std::make_pair(pr.at("left").get<std::string>(), pr.at("right").get<std::string>());
      if (!t.products_.emplace(key, std::move(result)).second)
        throw Error(ErrorCode::ValidationError, "product " + key.first + "*" + key.second + " listed twice");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed pi_* table: ") + e.what());
  }
  const auto problems = t.violations();
  if (!problems.empty()) {
    std::string msg = "pi_* table failed validation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorCode::ValidationError, msg);
  }
  return t;
}

TmfCoeffTable TmfCoeffTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ValidationError, "cannot read pi_* table '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

const TmfCoeffTable& TmfCoeffTable::builtin() {
  static const TmfCoeffTable table = from_json(std::string(embedded::kPiTmfTable));
  return table;
}

TmfCoeffTable TmfCoeffTable::from_environment() {
  if (const char* path = std::getenv("QUADTMF_TABLE"); path && *path) return from_file(path);
  return builtin();
}

std::vector<std::string> TmfCoeffTable::violations() const {
  std::vector<std::string> v;
  if (polynomial_generator_ != "j") v.push_back("pi_0: polynomial generator must be named j");
  if (range_.first > -1 || range_.second < 20)
    v.push_back("degree_range must cover [-1, 20], got [" + std::to_string(range_.first) + ", " +
                std::to_string(range_.second) + "]");
  for (int d = range_.first; d <= range_.second; ++d)
    if (!groups_.count(d)) v.push_back("degree " + std::to_string(d) + ": no group listed");
  for (const auto& [d, g] : groups_)
    if (d < range_.first || d > range_.second) v.push_back("degree " + std::to_string(d) + ": outside degree_range");

  if (auto it = groups_.find(-1); it != groups_.end() && !it->second.trivial())
    v.push_back("pi_-1: group must be trivial");
  if (auto it = groups_.find(0); it != groups_.end()) {
    const auto& g = it->second;
    if (!g.complete || g.generators.size() != 1 || g.generators[0].name != kUnit || g.generators[0].order != 0)
      v.push_back("pi_0: must be Z[j] generated by 1");
  }
  std::set<int> unit_set(units_.begin(), units_.end());
  if (unit_set != std::set<int>{-1, 1} || units_.size() != 2) v.push_back("pi_0: units must be exactly +1 and -1");

  const std::pair<const char*, int> required[] = {{"eta", 1}, {"nu", 3}, {"epsilon", 8}, {"kappa", 14}, {"kappabar", 20}};
  for (const auto& [name, deg] : required) {
    auto it = generators_.find(name);
    if (it == generators_.end())
      v.push_back(std::string("missing generator ") + name + " in degree " + std::to_string(deg));
    else if (it->second.degree != deg)
      v.push_back(std::string("generator ") + name + " must live in degree " + std::to_string(deg));
  }
  if (auto it = generators_.find("eta"); it != generators_.end() && it->second.order != 2)
    v.push_back("relation 2*eta = 0 violated: eta has order " +
                (it->second.order == 0 ? std::string("infinity") : it->second.order.get_str()));

  for (const auto& [key, result] : products_) {
    const std::string label = "product " + key.first + "*" + key.second;
    auto a = generators_.find(key.first), b = generators_.find(key.second);
    if (a == generators_.end() || b == generators_.end()) {
      v.push_back(label + ": unknown factor");
      continue;
    }
    const int deg = a->second.degree + b->second.degree;
    bool terms_ok = true;
    for (const auto& [name, coeff] : result) {
      auto r = generators_.find(name);
      if (r == generators_.end() || r->second.degree != deg) {
        v.push_back(label + ": term " + name + " is not a generator of degree " + std::to_string(deg));
        terms_ok = false;
      }
    }
    if (!terms_ok) continue;
    std::map<Monomial, BigInt> terms;
    for (const auto& [name, coeff] : result) terms[{0, name}] = coeff;
    const TmfElement value = canonical(deg, terms);
    const BigInt oa = a->second.order, ob = b->second.order;
    BigInt bound = 0;
    if (oa != 0 && ob != 0) mpz_gcd(bound.get_mpz_t(), oa.get_mpz_t(), ob.get_mpz_t());
    else if (oa != 0) bound = oa;
    else if (ob != 0) bound = ob;
    if (bound != 0 && !scale(value, bound).is_zero())
      v.push_back(label + ": result order does not divide " + bound.get_str());
    const bool odd_pair = (a->second.degree % 2 != 0) && (b->second.degree % 2 != 0);
    if (key.first == key.second && odd_pair && !scale(value, 2).is_zero())
      v.push_back(label + ": graded commutativity requires 2*x^2 = 0 in odd degree");
    auto swapped = products_.find({key.second, key.first});
    if (key.first < key.second && swapped != products_.end()) {
      std::map<Monomial, BigInt> other;
      for (const auto& [name, coeff] : swapped->second) other[{0, name}] = odd_pair ? BigInt(-coeff) : coeff;
      if (canonical(deg, other) != value) v.push_back(label + ": graded commutativity violated");
    }
  }
  return v;
}

const GroupPresentation& TmfCoeffTable::group_at(int degree) const {
  auto it = groups_.find(degree);
  if (degree < range_.first || degree > range_.second || it == groups_.end())
    throw Error(ErrorCode::OutOfRange, "degree " + std::to_string(degree) + " outside table range [" +
                                           std::to_string(range_.first) + ", " + std::to_string(range_.second) + "]");
  return it->second;
}

bool TmfCoeffTable::has_generator(const std::string& name) const { return generators_.count(name) > 0; }

const CoeffGenerator& TmfCoeffTable::generator_info(const std::string& name) const {
  auto it = generators_.find(name);
  if (it == generators_.end()) throw Error(ErrorCode::UnknownName, "no generator named '" + name + "'");
  return it->second;
}

TmfElement TmfCoeffTable::integer(const BigInt& n) const { return canonical(0, {{Monomial{0, kUnit}, n}}); }

TmfElement TmfCoeffTable::generator(const std::string& name) const {
  const CoeffGenerator& g = generator_info(name);
  return canonical(g.degree, {{Monomial{0, name}, BigInt(1)}});
}

TmfElement TmfCoeffTable::canonical(int degree, std::map<Monomial, BigInt> terms) const {
  TmfElement e(degree);
  for (auto& [mono, coeff] : terms) {
    const CoeffGenerator& g = generator_info(mono.generator);
    BigInt c = g.order == 0 ? coeff : balanced_mod(coeff, g.order);
    if (c == 0) continue;
    if (mono.j_power > 0 && g.order != 0)
      return TmfElement::unknown(degree, "j-multiples of torsion class " + mono.generator + " are not tabulated");
    e.terms_[mono] = c;
  }
  return e;
}

TmfElement TmfCoeffTable::add(const TmfElement& x, const TmfElement& y) const {
  if (x.degree() != y.degree())
    throw Error(ErrorCode::DimensionMismatch,
                "cannot add elements of degrees " + std::to_string(x.degree()) + " and " + std::to_string(y.degree()));
  if (x.is_unknown()) return x;
  if (y.is_unknown()) return y;
  auto terms = x.terms();
  for (const auto& [m, c] : y.terms()) terms[m] += c;
  return canonical(x.degree(), std::move(terms));
}

TmfElement TmfCoeffTable::negate(const TmfElement& x) const { return scale(x, -1); }

TmfElement TmfCoeffTable::scale(const TmfElement& x, const BigInt& n) const {
  if (x.is_unknown()) return x;
  auto terms = x.terms();
  for (auto& [m, c] : terms) c *= n;
  return canonical(x.degree(), std::move(terms));
}

std::optional<TmfElement> TmfCoeffTable::product(const std::string& a, const std::string& b) const {
  const CoeffGenerator& ga = generator_info(a);
  const CoeffGenerator& gb = generator_info(b);
  const int deg = ga.degree + gb.degree;
  auto build = [&](const std::map<std::string, BigInt>& result, int sign) {
    std::map<Monomial, BigInt> terms;
    for (const auto& [name, c] : result) terms[{0, name}] = sign * c;
    return canonical(deg, std::move(terms));
  };
  if (auto it = products_.find({a, b}); it != products_.end()) return build(it->second, 1);
  if (auto it = products_.find({b, a}); it != products_.end())
    return build(it->second, (ga.degree % 2 != 0 && gb.degree % 2 != 0) ? -1 : 1);
  return std::nullopt;
}

TmfElement TmfCoeffTable::mul_monomials(const Monomial& a, const Monomial& b, int degree) const {
  const unsigned jp = a.j_power + b.j_power;
  TmfElement base;
  if (a.generator == kUnit) {
    base = canonical(degree, {{Monomial{0, b.generator}, BigInt(1)}});
  } else if (b.generator == kUnit) {
    base = canonical(degree, {{Monomial{0, a.generator}, BigInt(1)}});
  } else if (auto p = product(a.generator, b.generator)) {
    base = *p;
  } else if (degree >= range_.first && degree <= range_.second && group_at(degree).trivial()) {
    return zero(degree);
  } else {
    return TmfElement::unknown(degree, "product " + a.generator + "*" + b.generator + " is not tabulated");
  }
  if (base.is_unknown() || jp == 0) return base;
  std::map<Monomial, BigInt> terms;
  for (const auto& [m, c] : base.terms()) terms[{m.j_power + jp, m.generator}] = c;
  return canonical(degree, std::move(terms));
}

TmfElement TmfCoeffTable::mul(const TmfElement& x, const TmfElement& y) const {
  const int degree = x.degree() + y.degree();
  if (x.is_zero() || y.is_zero()) return zero(degree);
  if (x.is_unknown()) return TmfElement::unknown(degree, x.unknown_reason());
  if (y.is_unknown()) return TmfElement::unknown(degree, y.unknown_reason());
  TmfElement acc = zero(degree);
  for (const auto& [ma, ca] : x.terms())
    for (const auto& [mb, cb] : y.terms()) {
      TmfElement term = mul_monomials(ma, mb, degree);
      if (term.is_unknown()) return term;
      acc = add(acc, scale(term, ca * cb));
    }
  return acc;
}

TmfElement TmfCoeffTable::parse(const std::string& text) const {
  const std::string src = trim(text);
  if (src.empty()) throw Error(ErrorCode::ParseError, "empty element");
  std::vector<std::pair<int, std::string>> pieces;
  int sign = 1;
  std::string cur;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const char ch = src[i];
    if ((ch == '+' || ch == '-') && (i == 0 || src[i - 1] != '^')) {
      const int s = ch == '-' ? -1 : 1;
      if (trim(cur).empty()) {
        sign *= s;
      } else {
        pieces.emplace_back(sign, trim(cur));
        sign = s;
      }
      cur.clear();
      continue;
    }
    cur += ch;
  }
  if (trim(cur).empty()) throw Error(ErrorCode::ParseError, "dangling operator in '" + src + "'");
  pieces.emplace_back(sign, trim(cur));

  std::optional<TmfElement> total;
  for (const auto& [sgn, piece] : pieces) {
    std::vector<std::string> parts;
    std::stringstream ss(piece);
    for (std::string p; std::getline(ss, p, '*');) parts.push_back(trim(p));
    std::size_t pos = 0;
    BigInt coeff = sgn;
    if (pos < parts.size() && all_digits(parts[pos])) coeff *= BigInt(parts[pos++]);
    unsigned jp = 0;
    if (pos < parts.size() && (parts[pos] == "j" || parts[pos].rfind("j^", 0) == 0)) {
      const std::string exp = parts[pos] == "j" ? "1" : parts[pos].substr(2);
      if (!all_digits(exp)) throw Error(ErrorCode::ParseError, "bad power of j in '" + piece + "'");
      jp = static_cast<unsigned>(std::stoul(exp));
      ++pos;
    }
    TmfElement term;
    std::string joined;
    for (std::size_t k = pos; k < parts.size(); ++k) joined += (k == pos ? "" : "*") + parts[k];
    if (joined.empty()) {
      term = canonical(0, {{Monomial{jp, kUnit}, BigInt(1)}});
    } else if (has_generator(joined)) {
      term = canonical(generator_info(joined).degree, {{Monomial{jp, joined}, BigInt(1)}});
    } else {
      term = canonical(0, {{Monomial{jp, kUnit}, BigInt(1)}});
      for (std::size_t k = pos; k < parts.size(); ++k) {
        if (!has_generator(parts[k])) throw Error(ErrorCode::ParseError, "unknown generator '" + parts[k] + "'");
        term = mul(term, generator(parts[k]));
      }
    }
    term = scale(term, coeff);
    if (!total) {
      total = term;
    } else {
      if (total->degree() != term.degree())
        throw Error(ErrorCode::ParseError, "mixed degrees in '" + src + "'");
      total = add(*total, term);
    }
  }
  return *total;
}

}  // namespace quadtmf
