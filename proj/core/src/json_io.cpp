#include "quadtmf/json_io.hpp"

namespace quadtmf {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t index_from_json(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long>() < 1) parse_error(std::string("'") + key + "' must be a 1-based index");
  return static_cast<std::size_t>(v.get<long>() - 1);
}

int sign_from_json(const Json& j) {
  const Json& v = field(j, "sign");
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "+") return 1;
    if (s == "-") return -1;
  } else if (v.is_number_integer() && (v.get<long>() == 1 || v.get<long>() == -1)) {
    return static_cast<int>(v.get<long>());
  }
  parse_error("sign must be +1, -1, \"+\" or \"-\"");
}

template <class T, class Read>
Matrix<T> matrix_from_json(const Json& j, Read read) {
  if (!j.is_array()) parse_error("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  Matrix<T> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j.at(i).is_array() || j.at(i).size() != cols) parse_error("matrix rows must be arrays of equal length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = read(j.at(i).at(k));
  }
  return m;
}

template <class T>
Json matrix_to_json(const Matrix<T>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* kind_name(TmfModuleExpr::Kind k) {
  switch (k) {
    case TmfModuleExpr::Kind::Tmf: return "TMF";
    case TmfModuleExpr::Kind::ConeNu: return "Cone(nu)";
    case TmfModuleExpr::Kind::Line: return "L";
    default: break;
  }
  return "";
}

const char* summand_name(SummandKind k) {
  switch (k) {
    case SummandKind::Tmf: return "TMF";
    case SummandKind::ConeNu: return "Cone(nu)";
    case SummandKind::OpaqueL: return "L";
  }
  return "";
}

}  // namespace

BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
  if (!j.is_string()) parse_error("expected an integer or a decimal string");
  const auto s = j.get<std::string>();
  BigInt v;
  if (s.empty() || v.set_str(s, 10) != 0) parse_error("'" + s + "' is not a decimal integer");
  return v;
}

Json to_json(const BigInt& v) { return v.get_str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(bigint_from_json(j));
  if (!j.is_string()) parse_error("expected a rational string");
  const auto s = j.get<std::string>();
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) parse_error("'" + s + "' is not a rational number");
  q.canonicalize();
  return q;
}

Json to_json(const Rational& v) { return v.get_str(); }

IntMatrix int_matrix_from_json(const Json& j) { return matrix_from_json<BigInt>(j, bigint_from_json); }
Json to_json(const IntMatrix& m) { return matrix_to_json(m); }
RatMatrix rat_matrix_from_json(const Json& j) { return matrix_from_json<Rational>(j, rational_from_json); }
Json to_json(const RatMatrix& m) { return matrix_to_json(m); }

BilinearForm form_from_json(const Json& j) {
  if (j.is_array()) return BilinearForm(int_matrix_from_json(j));
  return BilinearForm(int_matrix_from_json(field(j, "gram")), j.value("label", std::string{}));
}

Json to_json(const BilinearForm& b) {
  Json j;
  j["gram"] = to_json(b.gram());
  if (!b.label().empty()) j["label"] = b.label();
  return j;
}

SignatureRecord signature_from_json(const Json& j) {
  SignatureRecord s;
  s.b_plus = field(j, "b_plus").get<std::size_t>();
  s.b_minus = field(j, "b_minus").get<std::size_t>();
  s.b_zero = field(j, "b_zero").get<std::size_t>();
  const auto parity = field(j, "parity").get<std::string>();
  if (parity != "even" && parity != "odd") parse_error("parity must be \"even\" or \"odd\"");
  s.parity = parity == "even" ? Parity::Even : Parity::Odd;
  s.det = bigint_from_json(field(j, "det"));
  s.unimodular = field(j, "unimodular").get<bool>();
  return s;
}

Json to_json(const SignatureRecord& s) {
  Json j;
  j["b_plus"] = s.b_plus;
  j["b_minus"] = s.b_minus;
  j["b_zero"] = s.b_zero;
  j["parity"] = s.parity == Parity::Even ? "even" : "odd";
  j["det"] = to_json(s.det);
  j["unimodular"] = s.unimodular;
  return j;
}

TorsionLinkingForm torsion_from_json(const Json& j) {
  std::vector<BigInt> factors;
  for (const auto& f : field(j, "factors")) factors.push_back(bigint_from_json(f));
  return TorsionLinkingForm(std::move(factors), rat_matrix_from_json(field(j, "lambda")));
}

Json to_json(const TorsionLinkingForm& t) {
  Json j;
  j["factors"] = Json::array();
  for (const auto& f : t.factors()) j["factors"].push_back(to_json(f));
  j["lambda"] = to_json(t.pairing());
  return j;
}

DiscriminantData discriminant_from_json(const Json& j) {
  DiscriminantData d;
  d.free_rank = field(j, "free_rank").get<std::size_t>();
  d.torsion = torsion_from_json(j);
  return d;
}

Json to_json(const DiscriminantData& d) {
  Json j;
  j["free_rank"] = d.free_rank;
  const Json t = to_json(d.torsion);
  j["factors"] = t["factors"];
  j["lambda"] = t["lambda"];
  return j;
}

Json to_json(const Decision& d) {
  Json j;
  j["decided"] = d.is_decided();
  j["value"] = d.is_decided() ? Json(d.value()) : Json(nullptr);
  if (!d.reason().empty()) j["reason"] = d.reason();
  return j;
}

Decision decision_from_json(const Json& j) {
  if (field(j, "decided").get<bool>()) return Decision::decided(field(j, "value").get<bool>());
  return Decision::inconclusive(j.value("reason", std::string{}));
}

FramedLink link_from_json(const Json& j) {
  if (j.is_array() || j.contains("gram")) return FramedLink::from_gram(form_from_json(j.is_array() ? j : j.at("gram")));
  std::vector<BigInt> framings;
  for (const auto& f : field(j, "framings")) framings.push_back(bigint_from_json(f));
  IntMatrix linking = framings.empty() && !j.contains("linking") ? IntMatrix() : int_matrix_from_json(field(j, "linking"));
  return FramedLink(std::move(framings), std::move(linking));
}

Json to_json(const FramedLink& l) {
  Json j;
  j["framings"] = Json::array();
  for (const auto& f : l.framings()) j["framings"].push_back(to_json(f));
  j["linking"] = to_json(l.linking());
  return j;
}

KirbyMove move_from_json(const Json& j) {
  if (j.is_object() && !j.contains("type") && j.size() == 1) {
    // Compact script form: {"blowup": 1}, {"blowdown": 2}, {"slide": [target, over, sign]}.
    const std::string key = j.begin().key();
    const Json& v = j.begin().value();
    if (key == "blowup") return move_from_json(Json{{"type", "blowup"}, {"sign", v}});
    if (key == "blowdown") return move_from_json(Json{{"type", "blowdown"}, {"component", v}});
    if (key == "slide") {
      if (!v.is_array() || v.size() < 2 || v.size() > 3) parse_error("slide expects [target, over] or [target, over, sign]");
      return move_from_json(
          Json{{"type", "slide"}, {"target", v.at(0)}, {"over", v.at(1)}, {"sign", v.size() == 3 ? v.at(2) : Json(1)}});
    }
    parse_error("unknown move '" + key + "' (blowup, blowdown, slide)");
  }
  const auto type = field(j, "type").get<std::string>();
  if (type == "blowup") return BlowUp{sign_from_json(j)};
  if (type == "blowdown") return BlowDown{index_from_json(j, "component")};
  if (type == "slide") return HandleSlide{index_from_json(j, "target"), index_from_json(j, "over"), sign_from_json(j)};
  parse_error("unknown move type '" + type + "' (blowup, blowdown, slide)");
}

Json to_json(const KirbyMove& m) {
  Json j;
  if (const auto* up = std::get_if<BlowUp>(&m)) {
    j["type"] = "blowup";
    j["sign"] = up->sign;
  } else if (const auto* down = std::get_if<BlowDown>(&m)) {
    j["type"] = "blowdown";
    j["component"] = down->index + 1;
  } else {
    const auto& s = std::get<HandleSlide>(m);
    j["type"] = "slide";
    j["target"] = s.target + 1;
    j["over"] = s.over + 1;
    j["sign"] = s.sign;
  }
  return j;
}

TmfElement element_from_json(const Json& j, const TmfCoeffTable& table) {
  const int degree = field(j, "degree").get<int>();
  if (j.value("unknown", false)) return TmfElement::unknown(degree, j.value("reason", std::string{}));
  TmfElement e = table.parse(field(j, "value").get<std::string>());
  if (e.is_zero()) return table.zero(degree);
  if (e.degree() != degree) parse_error("element degree does not match its value");
  return e;
}

Json to_json(const TmfElement& e) {
  Json j;
  j["degree"] = e.degree();
  j["value"] = e.to_string();
  j["unknown"] = e.is_unknown();
  if (e.is_unknown()) j["reason"] = e.unknown_reason();
  return j;
}

Json to_json(const NormalForm& m) {
  Json j;
  j["text"] = m.to_string();
  j["summands"] = Json::array();
  for (const auto& s : m.summands()) {
    Json e;
    e["kind"] = summand_name(s.kind());
    e["shift"] = s.display_shift();
    if (s.kind() == SummandKind::ConeNu) e["cone_power"] = s.cone_power();
    if (s.kind() == SummandKind::OpaqueL) {
      e["torsion"] = to_json(s.torsion());
      e["representative"] = to_json(s.representative().gram());
    }
    j["summands"].push_back(std::move(e));
  }
  // Opaque summands are compared up to +-equivalence of their forms.
  if (m.has_opaque()) j["opaque_equality"] = "pm_equivalence";
  return j;
}

TmfModuleExpr module_from_json(const Json& j) {
  if (!j.is_object()) parse_error("module expression must be an object");
  const int shift = j.value("shift", 0);
  for (const char* key : {"sum", "tensor"}) {
    if (!j.contains(key)) continue;
    const Json& items = j.at(key);
    if (!items.is_array()) parse_error(std::string("'") + key + "' must be an array");
    std::vector<TmfModuleExpr> parts;
    for (const auto& c : items) parts.push_back(module_from_json(c));
    return key == std::string("sum") ? TmfModuleExpr::sum(std::move(parts), shift)
                                     : TmfModuleExpr::tensor(std::move(parts), shift);
  }
  const auto atom = field(j, "atom").get<std::string>();
  if (atom == "TMF") return TmfModuleExpr::tmf(shift);
  if (atom == "Cone(nu)") return TmfModuleExpr::cone_nu(shift);
  if (atom == "L") return TmfModuleExpr::line(form_from_json(field(j, "form")), shift);
  parse_error("unknown atom '" + atom + "' (TMF, Cone(nu), L)");
}

Json to_json(const TmfModuleExpr& m) {
  Json j;
  switch (m.kind()) {
    case TmfModuleExpr::Kind::Sum:
    case TmfModuleExpr::Kind::Tensor: {
      Json parts = Json::array();
      for (const auto& c : m.children()) parts.push_back(to_json(c));
      j[m.kind() == TmfModuleExpr::Kind::Sum ? "sum" : "tensor"] = std::move(parts);
      break;
    }
    default:
      j["atom"] = kind_name(m.kind());
      if (m.kind() == TmfModuleExpr::Kind::Line) j["form"] = to_json(m.form());
  }
  j["shift"] = m.shift();
  return j;
}

TmfMap map_from_json(const Json& j, const TmfCoeffTable& table) {
  const auto source = field(j, "source_shifts").get<std::vector<int>>();
  const auto target = field(j, "target_shifts").get<std::vector<int>>();
  const int degree = field(j, "degree").get<int>();
  std::vector<std::vector<TmfElement>> entries;
  const Json& rows = field(j, "entries");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<TmfElement> row;
    for (std::size_t c = 0; c < rows.at(r).size(); ++c) {
      TmfElement e = table.parse(rows.at(r).at(c).get<std::string>());
      const int want = c < source.size() && r < target.size() ? source[c] - target[r] + degree : 0;
      row.push_back(e.is_zero() ? table.zero(want) : e);
    }
    entries.push_back(std::move(row));
  }
  return TmfMap(source, target, degree, std::move(entries));
}

Json to_json(const TmfMap& f) {
  Json j;
  j["source_shifts"] = f.source_shifts();
  j["target_shifts"] = f.target_shifts();
  j["degree"] = f.degree();
  j["entries"] = Json::array();
  for (std::size_t r = 0; r < f.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < f.cols(); ++c) row.push_back(f.entry(r, c).to_string());
    j["entries"].push_back(std::move(row));
  }
  return j;
}

QSeries series_from_json(const Json& j) {
  std::vector<Rational> coeffs;
  for (const auto& c : field(j, "coeffs")) coeffs.push_back(rational_from_json(c));
  std::optional<Rational> weight;
  if (j.contains("weight") && !j.at("weight").is_null()) weight = rational_from_json(j.at("weight"));
  return QSeries(field(j, "lowest").get<long>(), std::move(coeffs), weight);
}

Json to_json(const QSeries& s) {
  Json j;
  j["lowest"] = s.lowest();
  j["truncation"] = s.truncation();
  j["coeffs"] = Json::array();
  for (const auto& c : s.coefficients()) j["coeffs"].push_back(to_json(c));
  j["weight"] = s.weight() ? to_json(*s.weight()) : Json(nullptr);
  return j;
}

Json to_json(const EdgeImage& e) {
  Json j = to_json(e.series);
  j["rank"] = e.rank;
  j["pole_order"] = e.pole_order;
  j["conjectural"] = e.conjectural;
  j["sign_ambiguous"] = e.sign_ambiguous;
  return j;
}

}  // namespace quadtmf
