#include <map>
#include <mutex>

#include "embedded_data.hpp"
#include "quadtmf/bilform.hpp"
#include "quadtmf/json_io.hpp"

namespace quadtmf {

namespace {

struct Registry {
  std::vector<BilinearForm> forms;
  std::map<std::string, std::size_t> index;
};

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    r.forms = load_named_forms(std::string(embedded::kNamedForms));
    for (std::size_t i = 0; i < r.forms.size(); ++i) r.index[r.forms[i].label()] = i;
    return r;
  }();
  return reg;
}

}  // namespace

std::vector<BilinearForm> load_named_forms(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("named form registry: ") + e.what());
  }
  if (doc.value("schema", "") != "quadtmf.named_forms")
    throw Error(ErrorCode::ValidationError, "named form registry: unexpected schema tag");
  if (doc.value("version", 0) != 1)
    throw Error(ErrorCode::ValidationError, "named form registry: unsupported version");

  std::vector<BilinearForm> out;
  std::vector<std::string> problems;
  for (const auto& entry : doc.at("forms")) {
    const std::string name = entry.at("name").get<std::string>();
    BilinearForm b;
    try {
      b = BilinearForm(int_matrix_from_json(entry.at("gram")), name);
    } catch (const Error& e) {
      problems.push_back(name + ": " + e.what());
      continue;
    }
    const Json req = entry.value("require", Json::object());
    const SignatureRecord s = signature(b);
    if (req.value("even", false) && s.parity != Parity::Even) problems.push_back(name + ": declared even but is odd");
    if (req.value("unimodular", false) && !s.unimodular)
      problems.push_back(name + ": declared unimodular but det = " + s.det.get_str());
    if (req.value("positive_definite", false) && s.b_plus != b.rank())
      problems.push_back(name + ": declared positive definite but is not");
    out.push_back(std::move(b));
  }
  if (!problems.empty()) {
    std::string msg = "named form registry failed validation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorCode::ValidationError, msg);
  }
  return out;
}

const BilinearForm& builtin_form(const std::string& name) {
  const Registry& r = registry();
  auto it = r.index.find(name);
  if (it == r.index.end()) throw Error(ErrorCode::UnknownName, "unknown builtin form '" + name + "'");
  return r.forms[it->second];
}

std::vector<std::string> builtin_form_names() {
  std::vector<std::string> names;
  for (const auto& b : registry().forms) names.push_back(b.label());
  return names;
}

}  // namespace quadtmf
