#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "quadtmf/invariants.hpp"
#include "quadtmf/jacobi.hpp"
#include "quadtmf/json_io.hpp"
#include "quadtmf/theta.hpp"

namespace quadtmf::cli {

namespace {

constexpr const char* kFooter = R"(Exit status:
  0  success
  1  domain error; {"error": {"code", "message"}} is written to stderr
  2  usage error (unknown option, missing argument, value out of range, unreadable file)

Domain error codes: SingularMatrix DimensionMismatch NonEvenDiagonal NotUnimodular
  BudgetExceeded IllegalMove ValidationError OutOfRange ShapeMismatch UnknownName
  NonUnitLeading NotPositiveDefinite NotEven PreconditionFailed NotInUpperHalfPlane
  TailBoundTooLarge NotSL2 InclusionNotIsometric ParseError Overflow

FORM arguments accept a builtin name (see `quadtmf form list`), inline JSON
(a Gram matrix or {"gram": ..., "label": ...}) or a path to a JSON file.
QUADTMF_TABLE names a pi_* table file; --table takes precedence.)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  Json json;
  std::string summary;
};

struct Options {
  bool json = false;
  bool text = false;
  std::string table_path;

  std::string builtin, gram, input;
  std::vector<std::string> forms;
  std::string link, moves, data, matrix, element, value, times, map_name, point_tau;
  std::vector<std::string> point_z, maps;
  std::string sign = "+";
  long truncation = 10;
  long power = 1;
  double tol = 1e-8;
  double cutoff = 0;
  std::uint64_t seed = 1;
  std::size_t samples = 5;
  std::size_t length = 8;
  std::size_t count = 10;
  std::size_t pairs = 10;
  long bound = 3;
  std::uint64_t budget = kDefaultIsomorphismBudget;
  std::size_t stab_limit = 2;
  std::size_t coeff_bound = 2;
  bool oracle = false;
  bool reverse = false;
  std::optional<int> degree;
};

bool looks_inline(const std::string& s) {
  const auto p = s.find_first_not_of(" \t\n");
  return p != std::string::npos && (s[p] == '[' || s[p] == '{');
}

Json parse_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
}

/// Inline JSON or the contents of a file.
Json read_json_arg(const std::string& arg) {
  if (looks_inline(arg)) return parse_text(arg, "inline JSON");
  std::ifstream in(arg);
  if (!in) throw UsageError("cannot read '" + arg + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), arg);
}

BilinearForm resolve_form(const std::string& spec) {
  const auto names = builtin_form_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return builtin_form(spec);
  return form_from_json(read_json_arg(spec));
}

BilinearForm chosen_form(const Options& o) {
  const int given = !o.builtin.empty() + !o.gram.empty() + !o.input.empty() + !o.forms.empty();
  if (given != 1) throw UsageError("give exactly one of --builtin, --gram, --input, --form");
  if (!o.builtin.empty()) return builtin_form(o.builtin);
  if (!o.gram.empty()) return form_from_json(parse_text(o.gram, "--gram"));
  if (!o.input.empty()) return form_from_json(read_json_arg(o.input));
  return resolve_form(o.forms.front());
}

FramedLink chosen_link(const Options& o) {
  if (!o.link.empty()) {
    if (!o.builtin.empty() || !o.gram.empty() || !o.input.empty() || !o.forms.empty())
      throw UsageError("--link cannot be combined with a form option");
    return link_from_json(read_json_arg(o.link));
  }
  return FramedLink::from_gram(chosen_form(o));
}

TmfCoeffTable load_table(const Options& o) {
  if (!o.table_path.empty()) return TmfCoeffTable::from_file(o.table_path);
  return TmfCoeffTable::from_environment();
}

int sign_of(const Options& o) { return o.sign == "-" ? -1 : 1; }

Json header(const std::string& schema) {
  Json j;
  j["schema"] = "quadtmf." + schema;
  j["version"] = kSchemaVersion;
  return j;
}

std::string label_of(const BilinearForm& b) { return b.label().empty() ? "form" : b.label(); }

// ---- form -----------------------------------------------------------------

Report form_analyze(const Options& o) {
  const BilinearForm b = chosen_form(o);
  const SignatureRecord s = signature(b);
  Json j = header("form_analysis");
  j["form"] = to_json(b);
  j["rank"] = b.rank();
  j["signature"] = to_json(s);
  j["positive_definite"] = s.b_plus == b.rank() && b.rank() > 0;
  j["discriminant"] = to_json(discriminant(b));
  if (s.unimodular) {
    const StableCounts c = unimodular_stable_form(b);
    j["stable_form"] = {{"plus", c.p}, {"minus", c.q}};
  } else {
    j["stable_form"] = nullptr;
  }
  std::ostringstream text;
  text << label_of(b) << ": rank " << b.rank() << ", signature (" << s.b_plus << "," << s.b_minus << ","
       << s.b_zero << "), " << (s.parity == Parity::Even ? "even" : "odd") << ", det " << s.det;
  return {j, text.str()};
}

Report form_list(const Options&) {
  Json j = header("form_list");
  j["forms"] = Json::array();
  std::string text;
  for (const auto& name : builtin_form_names()) {
    const BilinearForm& b = builtin_form(name);
    const SignatureRecord s = signature(b);
    j["forms"].push_back({{"name", name}, {"rank", b.rank()}, {"signature", to_json(s)}});
    text += (text.empty() ? "" : " ") + name;
  }
  return {j, text};
}

Report form_compare(const Options& o) {
  if (o.forms.size() != 2) throw UsageError("compare needs exactly two --form arguments");
  const BilinearForm a = resolve_form(o.forms[0]);
  const BilinearForm b = resolve_form(o.forms[1]);
  const Decision pm = pm_equivalent(a, b, o.budget);
  Json j = header("form_compare");
  j["forms"] = {to_json(a), to_json(b)};
  j["pm_equivalent"] = to_json(pm);
  bool contradiction = false;
  if (o.oracle) {
    const Decision oracle = congruent_stably_bruteforce(a, b, o.stab_limit, o.coeff_bound);
    contradiction = oracle.is_true() && !pm.is_true();
    j["oracle"] = to_json(oracle);
  } else {
    j["oracle"] = nullptr;
  }
  j["contradiction"] = contradiction;
  return {j, "pm_equivalent: " + pm.to_string()};
}

Report form_pullback(const Options& o) {
  if (o.matrix.empty()) throw UsageError("pullback needs --matrix");
  const BilinearForm b = chosen_form(o);
  const IntMatrix a = int_matrix_from_json(read_json_arg(o.matrix));
  const BilinearForm p = pullback(a, b);
  Json j = header("form_pullback");
  j["matrix"] = to_json(a);
  j["form"] = to_json(b);
  j["pullback"] = to_json(p);
  j["signature"] = to_json(signature(p));
  return {j, "pullback:\n" + p.gram().to_string()};
}

// ---- kirby ----------------------------------------------------------------

Json to_json(const InvarianceReport& r) {
  Json j;
  j["moves_applied"] = r.moves_applied;
  j["discriminant_preserved"] = r.discriminant_preserved;
  j["module_preserved"] = r.module_preserved;
  j["signature_bookkeeping"] = r.signature_bookkeeping;
  j["failures"] = r.failures;
  j["ok"] = r.ok();
  return j;
}

Json moves_json(const std::vector<KirbyMove>& moves) {
  Json j = Json::array();
  for (const auto& m : moves) j.push_back(quadtmf::to_json(m));
  return j;
}

Report kirby_apply(const Options& o) {
  if (o.moves.empty()) throw UsageError("apply needs --moves");
  const FramedLink start = chosen_link(o);
  const Json script = read_json_arg(o.moves);
  if (!script.is_array()) throw Error(ErrorCode::ParseError, "move script must be a JSON array");
  std::vector<KirbyMove> moves;
  for (const auto& m : script) moves.push_back(move_from_json(m));
  FramedLink end = start;
  for (const auto& m : moves) end = apply_move(end, m);
  const InvarianceReport r = verify_boundary_invariance(start, moves);
  Json j = header("kirby_apply");
  j["link"] = quadtmf::to_json(start);
  j["moves"] = moves_json(moves);
  j["result"] = quadtmf::to_json(end);
  j["invariance"] = to_json(r);
  j["normal_form"] = quadtmf::to_json(z3({end, {}}).normal_form);
  return {j, std::to_string(moves.size()) + " moves, invariants " + (r.ok() ? "preserved" : "CHANGED")};
}

Report kirby_random(const Options& o) {
  const FramedLink start = chosen_link(o);
  std::mt19937_64 rng(o.seed);
  Json j = header("kirby_random");
  j["link"] = quadtmf::to_json(start);
  j["seed"] = o.seed;
  j["runs"] = Json::array();
  std::size_t failures = 0;
  for (std::size_t run = 0; run < o.count; ++run) {
    const auto moves = random_legal_moves(start, o.length, rng);
    const InvarianceReport r = verify_boundary_invariance(start, moves);
    failures += !r.ok();
    j["runs"].push_back({{"moves", moves_json(moves)}, {"invariance", to_json(r)}});
  }
  j["failures"] = failures;
  return {j, std::to_string(o.count) + " sequences, " + std::to_string(failures) + " failures"};
}

// ---- manifold -------------------------------------------------------------

Report manifold_z3(const Options& o) {
  const FramedLink link = chosen_link(o);
  const Z3Result r = z3({link, {}});
  Json j = header("z3");
  j["link"] = quadtmf::to_json(link);
  j["module"] = quadtmf::to_json(r.module);
  j["normal_form"] = quadtmf::to_json(r.normal_form);
  j["discriminant"] = quadtmf::to_json(r.discriminant);
  j["signature"] = quadtmf::to_json(r.signature);
  j["shift"] = r.shift;
  return {j, "Z(M) = " + r.normal_form.to_string()};
}

Report manifold_z4(const Options& o) {
  const TmfCoeffTable table = load_table(o);
  const BilinearForm b = chosen_form(o);
  const Z4Result r = z4({b, o.reverse ? -1 : 1}, table);
  Json j = header("z4");
  j["form"] = quadtmf::to_json(b);
  j["orientation"] = o.reverse ? -1 : 1;
  j["degree"] = r.degree;
  j["element"] = quadtmf::to_json(r.element);
  j["unknown"] = r.element.is_unknown();
  j["sign_ambiguous"] = r.sign_ambiguous;
  j["conditional"] = r.conditional;
  j["decomposition"] = r.decomposition;
  std::string text = "Z(X) = " + std::string(r.sign_ambiguous ? "+-" : "") + r.element.to_string() + " in degree " +
                     std::to_string(r.degree);
  if (r.conditional) text += " (conditional)";
  return {j, text};
}

Report manifold_reverse(const Options& o) {
  const FramedLink link = chosen_link(o);
  const OrientationReport r = orientation_reverse({link, {}});
  Json j = header("orientation_reverse");
  j["link"] = quadtmf::to_json(link);
  j["b1"] = r.b1;
  j["direct"] = {{"module", quadtmf::to_json(r.direct)}, {"normal_form", quadtmf::to_json(r.direct.normal_form())}};
  j["via_dual"] = {{"module", quadtmf::to_json(r.via_dual)},
                   {"normal_form", quadtmf::to_json(r.via_dual.normal_form())}};
  j["agree"] = quadtmf::to_json(r.agree);
  return {j, "Z(-M) = " + r.direct.normal_form().to_string() + "; dual path " + r.agree.to_string()};
}

// ---- cobordism ------------------------------------------------------------

CobordismData chosen_cobordism(const Options& o) {
  if (o.data.empty()) throw UsageError("needs --data");
  const Json j = read_json_arg(o.data);
  if (!j.is_object() || !j.contains("v0") || !j.contains("v1") || !j.contains("inclusion"))
    throw Error(ErrorCode::ParseError, "cobordism data needs 'v0', 'v1' and 'inclusion'");
  return {form_from_json(j.at("v0")), form_from_json(j.at("v1")), int_matrix_from_json(j.at("inclusion"))};
}

Report cobordism_degree_cmd(const Options& o) {
  const CobordismData c = chosen_cobordism(o);
  const int d = cobordism_degree(c);
  Json j = header("cobordism_degree");
  j["v0"] = quadtmf::to_json(c.v0);
  j["v1"] = quadtmf::to_json(c.v1);
  j["inclusion"] = quadtmf::to_json(c.inclusion);
  j["degree"] = d;
  return {j, "degree " + std::to_string(d)};
}

Report cobordism_linking(const Options& o) {
  const CobordismData c = chosen_cobordism(o);
  std::mt19937_64 rng(o.seed);
  const LinkingReport r = cobordism_linking_check(c, o.samples, rng);
  Json j = header("cobordism_linking");
  j["seed"] = o.seed;
  j["samples"] = Json::array();
  for (const auto& s : r.samples) {
    Json a = Json::array(), b = Json::array();
    for (const auto& x : s.a0) a.push_back(quadtmf::to_json(x));
    for (const auto& x : s.b0) b.push_back(quadtmf::to_json(x));
    j["samples"].push_back({{"a0", a},
                            {"b0", b},
                            {"lambda0", quadtmf::to_json(s.lambda0)},
                            {"lambda1", quadtmf::to_json(s.lambda1)},
                            {"correction", quadtmf::to_json(s.correction)},
                            {"residue", quadtmf::to_json(s.residue)}});
  }
  j["skipped"] = r.skipped;
  j["ok"] = r.ok();
  return {j, std::to_string(r.samples.size()) + " samples checked, " + std::to_string(r.skipped) + " skipped, " +
                 (r.ok() ? "all residues vanish" : "NONZERO residue")};
}

// ---- theta ----------------------------------------------------------------

Report theta_series_cmd(const Options& o) {
  const BilinearForm b = chosen_form(o);
  const ThetaSeries t = theta_series(b, o.truncation);
  Json j = header("theta_series");
  j["label"] = t.label;
  j["rank"] = t.rank;
  j["series"] = quadtmf::to_json(t.series);
  return {j, "Theta = " + t.series.to_string(12)};
}

Report theta_edge_image(const Options& o) {
  const BilinearForm b = chosen_form(o);
  const EdgeImage e = edge_image(b, o.truncation);
  Json j = header("edge_image");
  j["form"] = quadtmf::to_json(b);
  j["series"] = quadtmf::to_json(e);
  j["conjectural"] = e.conjectural;
  j["sign_ambiguous"] = e.sign_ambiguous;
  return {j, "[conjectural, up to sign] +-(" + e.series.to_string(12) + ")"};
}

Report theta_delta(const Options& o) {
  const long k = o.power;
  const long pole = k < 0 ? -k : 0;
  QSeries s = delta_series(o.truncation + pole + 1);
  if (k != 1) s = s.pow(k);
  s = s.truncated(o.truncation);
  Json j = header("delta");
  j["power"] = k;
  j["series"] = quadtmf::to_json(s);
  return {j, "Delta^" + std::to_string(k) + " = " + s.to_string(12)};
}

// ---- jacobi ---------------------------------------------------------------

Json element_json(const JacobiElement& g) {
  if (const auto* m = std::get_if<Sl2>(&g)) return {{"sl2", {{m->a, m->b}, {m->c, m->d}}}};
  const auto& s = std::get<LatticeShift>(g);
  return {{"m1", s.m1}, {"m2", s.m2}};
}

JacobiElement parse_element(const std::string& spec, std::size_t rank, std::mt19937_64& rng) {
  if (spec == "shift") {
    // m1 = e_i keeps Im z small enough for a modest enumeration radius.
    std::uniform_int_distribution<long> pick(-1, 1);
    LatticeShift s{std::vector<long>(rank), std::vector<long>(rank)};
    if (rank > 0) s.m1[std::uniform_int_distribution<std::size_t>(0, rank - 1)(rng)] = 1;
    for (auto& x : s.m2) x = pick(rng);
    return s;
  }
  if (looks_inline(spec)) {
    const Json j = parse_text(spec, "--element");
    try {
      if (j.is_array()) {
        const auto m = j.get<std::vector<std::vector<long>>>();
        if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
          throw Error(ErrorCode::ParseError, "an SL2 element is a 2x2 integer matrix");
        return Sl2{m[0][0], m[0][1], m[1][0], m[1][1]};
      }
      return LatticeShift{j.at("m1").get<std::vector<long>>(), j.at("m2").get<std::vector<long>>()};
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("--element: ") + e.what());
    }
  }
  if (spec.empty()) throw Error(ErrorCode::UnknownName, "empty element word");
  Sl2 g;
  for (char c : spec) g = g * named_sl2(std::string(1, c));
  return g;
}

Complex parse_complex(const std::string& s, const char* what) {
  const auto comma = s.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const long double re = std::stold(s, &used);
      if (used == s.size()) return {re, 0};
    } else {
      const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
      std::size_t ua = 0, ub = 0;
      const long double re = std::stold(a, &ua), im = std::stold(b, &ub);
      if (ua == a.size() && ub == b.size()) return {re, im};
    }
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(what) + " expects \"re,im\", got '" + s + "'");
}

Report jacobi_check(const Options& o) {
  const BilinearForm b = chosen_form(o);
  std::mt19937_64 rng(o.seed);
  const JacobiElement g = parse_element(o.element, b.rank(), rng);
  const auto samples = random_points(b.rank(), o.samples, rng);
  std::vector<JacobiPoint> all = samples;
  for (const auto& p : samples) all.push_back(act(g, p));
  const long double eval_tol = static_cast<long double>(o.tol) / 100;
  const double cutoff = o.cutoff > 0 ? o.cutoff : JacobiEvaluator::required_cutoff(b, all, eval_tol);
  const JacobiEvaluator ev(b, cutoff);
  const TransformationReport r = check_transformation(ev, g, samples, o.tol);
  Json j = header("jacobi_check");
  j["form"] = quadtmf::to_json(b);
  j["element"] = element_json(g);
  j["seed"] = o.seed;
  j["cutoff"] = cutoff;
  j["vector_count"] = ev.vector_count();
  j["residuals"] = Json::array();
  for (long double x : r.residuals) j["residuals"].push_back(static_cast<double>(x));
  j["max_residual"] = static_cast<double>(r.max_residual);
  j["tolerance"] = static_cast<double>(r.tolerance);
  j["passed"] = r.passed();
  std::ostringstream text;
  text << "max residual " << static_cast<double>(r.max_residual) << " (tol " << o.tol << "): "
       << (r.passed() ? "pass" : "FAIL");
  return {j, text.str()};
}

Report jacobi_eval(const Options& o) {
  const BilinearForm b = chosen_form(o);
  if (o.point_tau.empty()) throw UsageError("eval needs --tau");
  JacobiPoint p{parse_complex(o.point_tau, "--tau"), {}};
  if (o.point_z.empty())
    p.z.assign(b.rank(), Complex(0, 0));
  else
    for (const auto& z : o.point_z) p.z.push_back(parse_complex(z, "--z"));
  const long double tol = o.tol;
  const double cutoff = o.cutoff > 0 ? o.cutoff : JacobiEvaluator::required_cutoff(b, {p}, tol);
  const JacobiEvaluator ev(b, cutoff);
  const ThetaValue v = ev.theta_eval(p, tol);
  Json j = header("jacobi_eval");
  j["form"] = quadtmf::to_json(b);
  j["tau"] = {static_cast<double>(p.tau.real()), static_cast<double>(p.tau.imag())};
  j["z"] = Json::array();
  for (const auto& z : p.z) j["z"].push_back({static_cast<double>(z.real()), static_cast<double>(z.imag())});
  j["cutoff"] = cutoff;
  j["vector_count"] = ev.vector_count();
  j["value"] = {static_cast<double>(v.value.real()), static_cast<double>(v.value.imag())};
  j["tail_bound"] = static_cast<double>(v.tail_bound);
  std::ostringstream text;
  text.precision(17);
  text << "theta = " << static_cast<double>(v.value.real()) << " + " << static_cast<double>(v.value.imag())
       << "i (tail <= " << static_cast<double>(v.tail_bound) << ")";
  return {j, text.str()};
}

Report jacobi_cocycle(const Options& o) {
  const BilinearForm b = chosen_form(o);
  std::mt19937_64 rng(o.seed);
  Json j = header("jacobi_cocycle");
  j["form"] = quadtmf::to_json(b);
  j["seed"] = o.seed;
  j["pairs"] = Json::array();
  long double worst = 0;
  for (std::size_t i = 0; i < o.pairs; ++i) {
    const Sl2 g1 = random_sl2(o.bound, rng), g2 = random_sl2(o.bound, rng);
    const JacobiPoint p = random_points(b.rank(), 1, rng).front();
    const long double r = cocycle_residual(b, g1, g2, p);
    worst = std::max(worst, r);
    j["pairs"].push_back({{"g1", element_json(g1)}, {"g2", element_json(g2)}, {"residual", static_cast<double>(r)}});
  }
  j["max_residual"] = static_cast<double>(worst);
  j["tolerance"] = o.tol;
  j["passed"] = worst < o.tol;
  std::ostringstream text;
  text << o.pairs << " pairs, max residual " << static_cast<double>(worst) << ": " << (worst < o.tol ? "pass" : "FAIL");
  return {j, text.str()};
}

// ---- tmf ------------------------------------------------------------------

const char* provenance_name(Provenance p) { return p == Provenance::Primary ? "primary" : "external"; }

Json group_json(const GroupPresentation& g) {
  Json j;
  j["degree"] = g.degree;
  j["text"] = g.to_string();
  j["complete"] = g.complete;
  j["free_rank"] = g.free_rank();
  j["torsion"] = Json::array();
  for (const auto& t : g.torsion_orders()) j["torsion"].push_back(quadtmf::to_json(t));
  j["generators"] = Json::array();
  for (const auto& gen : g.generators)
    j["generators"].push_back({{"name", gen.name},
                               {"degree", gen.degree},
                               {"order", quadtmf::to_json(gen.order)},
                               {"provenance", provenance_name(gen.provenance)}});
  j["provenance"] = provenance_name(g.provenance);
  return j;
}

Report tmf_table(const Options& o) {
  const TmfCoeffTable table = load_table(o);
  const auto [lo, hi] = table.degree_range();
  Json j = header("tmf_table");
  j["degree_range"] = {lo, hi};
  j["units"] = table.units();
  j["groups"] = Json::array();
  if (o.degree) table.group_at(*o.degree);
  std::string text;
  for (int d = lo; d <= hi; ++d) {
    if (o.degree && *o.degree != d) continue;
    const GroupPresentation& g = table.group_at(d);
    j["groups"].push_back(group_json(g));
    text += (text.empty() ? "" : "\n") + std::string("pi_") + std::to_string(d) + " = " + g.to_string();
  }
  return {j, text};
}

Report tmf_validate(const Options& o) {
  const TmfCoeffTable table = load_table(o);
  const auto violations = table.violations();
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(ErrorCode::ValidationError, msg);
  }
  Json j = header("tmf_validate");
  j["source"] = !o.table_path.empty() ? o.table_path : (std::getenv("QUADTMF_TABLE") ? std::getenv("QUADTMF_TABLE") : "builtin");
  j["valid"] = true;
  j["violations"] = Json::array();
  j["degree_range"] = {table.degree_range().first, table.degree_range().second};
  return {j, "table valid"};
}

Report tmf_element(const Options& o) {
  if (o.value.empty()) throw UsageError("element needs --value");
  const TmfCoeffTable table = load_table(o);
  const TmfElement x = table.parse(o.value);
  Json j = header("tmf_element");
  j["element"] = quadtmf::to_json(x);
  std::string text = x.to_string() + " in degree " + std::to_string(x.degree());
  if (!o.times.empty()) {
    const TmfElement y = table.parse(o.times);
    const TmfElement p = table.mul(x, y);
    j["times"] = quadtmf::to_json(y);
    j["product"] = quadtmf::to_json(p);
    text = "(" + x.to_string() + ")*(" + y.to_string() + ") = " + p.to_string() + " in degree " +
           std::to_string(p.degree());
  }
  return {j, text};
}

struct NamedMap {
  TmfMap map;
  std::string name;
  bool conjectural = false;
};

NamedMap resolve_map(const std::string& spec, int sign, const TmfCoeffTable& table) {
  if (spec == "one_handle") return {one_handle_map(table).map, spec, true};
  const auto names = builtin_map_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return {builtin_map(spec, sign, table), spec};
  if (!looks_inline(spec) && spec.find('.') == std::string::npos && spec.find('/') == std::string::npos)
    throw Error(ErrorCode::UnknownName, "unknown map '" + spec + "'");
  return {map_from_json(read_json_arg(spec), table), "custom"};
}

Json map_report(const NamedMap& m) {
  Json j;
  j["name"] = m.name;
  j["map"] = quadtmf::to_json(m.map);
  j["source"] = quadtmf::to_json(m.map.source_module());
  j["target"] = quadtmf::to_json(m.map.target_module());
  j["conjectural"] = m.conjectural;
  return j;
}

Report tmf_map(const Options& o) {
  const TmfCoeffTable table = load_table(o);
  if (o.map_name.empty()) {
    Json j = header("tmf_map_list");
    auto names = builtin_map_names();
    names.push_back("one_handle");
    j["maps"] = names;
    std::string text;
    for (const auto& n : names) text += (text.empty() ? "" : " ") + n;
    return {j, text};
  }
  const NamedMap m = resolve_map(o.map_name, sign_of(o), table);
  Json j = header("tmf_map");
  j.update(map_report(m));
  j["sign"] = o.sign;
  return {j, std::string(m.conjectural ? "[conjectural] " : "") + m.map.to_string()};
}

Report tmf_compose(const Options& o) {
  if (o.maps.size() < 2) throw UsageError("compose needs at least two --map arguments");
  const TmfCoeffTable table = load_table(o);
  std::vector<NamedMap> factors;
  for (const auto& spec : o.maps) factors.push_back(resolve_map(spec, sign_of(o), table));
  TmfMap acc = factors.back().map;
  bool conjectural = factors.back().conjectural;
  for (std::size_t i = factors.size() - 1; i-- > 0;) {
    acc = compose(factors[i].map, acc, table);
    conjectural = conjectural || factors[i].conjectural;
  }
  Json j = header("tmf_compose");
  j["factors"] = Json::array();
  for (const auto& f : factors) j["factors"].push_back(map_report(f));
  j["composite"] = quadtmf::to_json(acc);
  j["conjectural"] = conjectural;
  j["sign"] = o.sign;
  if (acc.rows() == 1 && acc.cols() == 1) j["element"] = quadtmf::to_json(acc.entry(0, 0));
  return {j, std::string(conjectural ? "[conjectural] " : "") + acc.to_string()};
}

// ---- output ---------------------------------------------------------------

bool is_scalar(const Json& j) { return !j.is_structured(); }

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void render(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, v] : j.items()) {
    if (indent == 0 && (key == "schema" || key == "version")) continue;
    out << pad << key << ":";
    if (is_scalar(v)) {
      out << " " << scalar_text(v) << "\n";
    } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_scalar)) {
      out << " [";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
      out << "]\n";
    } else if (v.is_array()) {
      out << "\n";
      for (const auto& item : v) {
        if (item.is_object()) {
          out << pad << "  -\n";
          render(item, out, indent + 4);
        } else if (std::all_of(item.begin(), item.end(), is_scalar)) {
          out << pad << "  ";
          for (std::size_t i = 0; i < item.size(); ++i) out << (i ? " " : "") << scalar_text(item[i]);
          out << "\n";
        } else {
          out << pad << "  " << item.dump() << "\n";
        }
      }
    } else {
      out << "\n";
      render(v, out, indent + 2);
    }
  }
}

void emit_error(std::ostream& err, const std::string& code, const std::string& message) {
  Json j;
  j["error"] = {{"code", code}, {"message", message}};
  err << j.dump() << "\n";
}

void common(CLI::App* sub) { sub->fallthrough(); }

void add_form_options(CLI::App* sub, Options& o) {
  sub->add_option("--builtin", o.builtin, "Builtin form name");
  sub->add_option("--gram", o.gram, "Gram matrix as inline JSON");
  sub->add_option("--input", o.input, "JSON file holding a form")->check(CLI::ExistingFile);
  sub->add_option("--form", o.forms, "FORM: builtin name, inline JSON or file")->allow_extra_args(false);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact bilinear-form, linking-form and pi_*TMF invariants", "quadtmf"};
  app.footer(kFooter);
  app.require_subcommand(1);
  auto* json_flag = app.add_flag("--json", o.json, "JSON report (default)");
  app.add_flag("--text", o.text, "Human-readable report")->excludes(json_flag);
  app.add_option("--table", o.table_path, "pi_* table file (overrides QUADTMF_TABLE)");

  std::function<Report(const Options&)> action;
  auto leaf = [&](CLI::App* group, const char* name, const char* help, Report (*fn)(const Options&)) {
    auto* sub = group->add_subcommand(name, help);
    common(sub);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };
  auto add_group = [&](const char* name, const char* help) {
    auto* g = app.add_subcommand(name, help);
    common(g);
    g->require_subcommand(1);
    return g;
  };
  auto truncation = [&](CLI::App* sub, long lo, long hi) {
    sub->add_option("-N", o.truncation, "Truncation: coefficients below q^N (default 10)")
        ->check(CLI::Range(lo, hi));
  };
  auto seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "RNG seed (default 1)"); };
  auto tol = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "Tolerance (default 1e-8)")->check(CLI::Range(1e-13, 1e-1));
  };
  auto link = [&](CLI::App* sub) {
    add_form_options(sub, o);
    sub->add_option("--link", o.link, "Framed link: inline JSON or file");
  };

  auto* form = add_group("form", "Bilinear form invariants");
  add_form_options(leaf(form, "analyze", "Signature, parity, discriminant", form_analyze), o);
  leaf(form, "list", "Builtin forms", form_list);
  auto* cmp = leaf(form, "compare", "+-equivalence of two forms", form_compare);
  add_form_options(cmp, o);
  cmp->add_option("--budget", o.budget, "Isomorphism search budget (group order)")->check(CLI::Range(1, 10000000));
  cmp->add_flag("--oracle", o.oracle, "Also run the brute-force stable congruence search");
  cmp->add_option("--stab-limit", o.stab_limit, "Oracle stabilization limit (default 2)")->check(CLI::Range(0, 3));
  cmp->add_option("--coeff-bound", o.coeff_bound, "Oracle coefficient bound (default 2)")->check(CLI::Range(1, 3));
  auto* pb = leaf(form, "pullback", "Gram A^T B A", form_pullback);
  add_form_options(pb, o);
  pb->add_option("--matrix", o.matrix, "Integer matrix A: inline JSON or file");

  auto* kirby = add_group("kirby", "Kirby moves on framed links");
  auto* apply = leaf(kirby, "apply", "Apply a move script and compare boundary invariants", kirby_apply);
  link(apply);
  apply->add_option("--moves", o.moves, "JSON array of moves: inline or file");
  auto* rnd = leaf(kirby, "random", "Random legal move sequences", kirby_random);
  link(rnd);
  seed(rnd);
  rnd->add_option("--length", o.length, "Maximum sequence length (default 8)")->check(CLI::Range(1, 32));
  rnd->add_option("--count", o.count, "Number of sequences (default 10)")->check(CLI::Range(1, 1000));

  auto* mfd = add_group("manifold", "3- and 4-manifold invariants");
  link(leaf(mfd, "z3", "TMF-module of a surgery presentation", manifold_z3));
  auto* z4cmd = leaf(mfd, "z4", "pi_*TMF element of a closed 4-manifold", manifold_z4);
  add_form_options(z4cmd, o);
  z4cmd->add_flag("--reverse", o.reverse, "Reverse the orientation");
  link(leaf(mfd, "reverse", "Orientation reversal, computed two ways", manifold_reverse));

  auto* cob = add_group("cobordism", "Cobordisms between surgery presentations");
  leaf(cob, "degree", "Degree shift of a cobordism", cobordism_degree_cmd)
      ->add_option("--data", o.data, "{\"v0\", \"v1\", \"inclusion\"}: inline JSON or file");
  auto* lk = leaf(cob, "linking", "Linking-form compatibility along the cobordism", cobordism_linking);
  lk->add_option("--data", o.data, "{\"v0\", \"v1\", \"inclusion\"}: inline JSON or file");
  lk->add_option("--samples", o.samples, "Number of samples (default 5)")->check(CLI::Range(1, 10000));
  seed(lk);

  auto* theta = add_group("theta", "Theta series and modular forms");
  auto* ts = leaf(theta, "series", "Theta series of an even positive definite form", theta_series_cmd);
  add_form_options(ts, o);
  truncation(ts, 1, 200);
  auto* ei = leaf(theta, "edge-image", "Delta^{-d/8} Theta (conjectural, up to sign)", theta_edge_image);
  add_form_options(ei, o);
  truncation(ei, 1, 100);
  auto* dl = leaf(theta, "delta", "Powers of the discriminant Delta", theta_delta);
  truncation(dl, 1, 2000);
  dl->add_option("--power", o.power, "Exponent k of Delta^k (default 1)")->check(CLI::Range(-8, 8));

  auto* jac = add_group("jacobi", "Jacobi theta transformation checks");
  auto* chk = leaf(jac, "check", "Transformation law residuals at random points", jacobi_check);
  add_form_options(chk, o);
  chk->add_option("--element", o.element, "Word in S,T,I; [[a,b],[c,d]]; {\"m1\",\"m2\"}; or 'shift' (random e_i, m2)")
      ->required();
  chk->add_option("--samples", o.samples, "Sample points (default 5)")->check(CLI::Range(1, 100));
  chk->add_option("--cutoff", o.cutoff, "Enumeration radius R (default: smallest sufficient)")
      ->check(CLI::Range(1.0, 20.0));
  tol(chk);
  seed(chk);
  auto* ev = leaf(jac, "eval", "Evaluate the truncated theta function", jacobi_eval);
  add_form_options(ev, o);
  ev->add_option("--tau", o.point_tau, "tau as re,im");
  ev->add_option("--z", o.point_z, "One re,im per coordinate (default 0)")->allow_extra_args(false);
  ev->add_option("--cutoff", o.cutoff, "Enumeration radius R (default: smallest sufficient)")
      ->check(CLI::Range(1.0, 20.0));
  tol(ev);
  auto* cc = leaf(jac, "cocycle", "Cocycle composition residuals for random SL2 pairs", jacobi_cocycle);
  add_form_options(cc, o);
  cc->add_option("--pairs", o.pairs, "Number of pairs (default 10)")->check(CLI::Range(1, 1000));
  cc->add_option("--bound", o.bound, "Entry bound for SL2 matrices (default 3)")->check(CLI::Range(1, 10));
  tol(cc);
  seed(cc);

  auto* tmf = add_group("tmf", "pi_*TMF table, elements and maps");
  leaf(tmf, "table", "Group presentations by degree", tmf_table)
      ->add_option("--degree", o.degree, "Only this degree")
      ->check(CLI::Range(-1000, 1000));
  leaf(tmf, "validate", "Check the table's invariants", tmf_validate);
  auto* el = leaf(tmf, "element", "Parse and multiply elements", tmf_element);
  el->add_option("--value", o.value, "Element, e.g. \"eta^2 + nu\"");
  el->add_option("--times", o.times, "Second factor");
  auto* mp = leaf(tmf, "map", "Builtin maps between sums of shifted TMF", tmf_map);
  mp->add_option("--name", o.map_name, "Map name (omit to list)");
  mp->add_option("--sign", o.sign, "Unit sign choice {+,-} (default +)")->check(CLI::IsMember({"+", "-"}));
  auto* cp = leaf(tmf, "compose", "Composite f1 o f2 o ... of maps", tmf_compose);
  cp->add_option("--map", o.maps, "Builtin map name, inline JSON or file; applied right to left")
      ->allow_extra_args(false);
  cp->add_option("--sign", o.sign, "Unit sign choice {+,-} (default +)")->check(CLI::IsMember({"+", "-"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    const Report r = action(o);
    if (o.text) {
      out << r.summary << "\n";
      render(r.json, out, 0);
    } else {
      out << r.json.dump(2) << "\n";
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const Error& e) {
    emit_error(err, std::string(to_string(e.code())), e.what());
    return 1;
  } catch (const Json::exception& e) {
    emit_error(err, "ParseError", e.what());
    return 1;
  }
}

}  // namespace quadtmf::cli
