#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "quadtmf/json_io.hpp"

using namespace quadtmf;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("form analysis of E8") {
  const Run r = run({"form", "analyze", "--builtin", "E8"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j.at("schema") == "quadtmf.form_analysis");
  CHECK(j.at("version") == kSchemaVersion);
  CHECK(j.at("signature").at("b_plus") == 8);
  CHECK(j.at("signature").at("b_minus") == 0);
  CHECK(j.at("signature").at("b_zero") == 0);
  CHECK(j.at("signature").at("parity") == "even");
  CHECK(j.at("signature").at("det") == "1");
  CHECK(form_from_json(j.at("form")) == builtin_form("E8"));
  CHECK(signature_from_json(j.at("signature")) == signature(builtin_form("E8")));
}

TEST_CASE("edge image report is flagged") {
  const Run r = run({"theta", "edge-image", "--builtin", "E8", "-N", "10"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j.at("conjectural") == true);
  CHECK(j.at("sign_ambiguous") == true);
  const QSeries s = series_from_json(j.at("series"));
  CHECK(s == edge_image(builtin_form("E8"), 10).series);
  CHECK(s.coefficient(-1) == 1);
  CHECK(s.coefficient(0) == 264);
}

TEST_CASE("z4 of the projective plane") {
  const Run r = run({"manifold", "z4", "--gram", "[[1]]"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j.at("degree") == 3);
  CHECK(j.at("element").at("value") == "nu");
  CHECK(j.at("sign_ambiguous") == true);
  CHECK(run({"manifold", "z4", "--gram", "[[1]]", "--reverse"}).json().at("element").at("value") == "0");
}

TEST_CASE("exit codes") {
  const Run domain = run({"manifold", "z4", "--gram", "[[2]]"});
  CHECK(domain.code == 1);
  CHECK(domain.out.empty());
  const Json e = Json::parse(domain.err);
  CHECK(e.at("error").at("code") == "NotUnimodular");
  CHECK(!e.at("error").at("message").get<std::string>().empty());

  CHECK(run({"theta", "delta", "-N", "5000"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"form", "analyze"}).code == 2);
  CHECK(run({"form", "analyze", "--builtin", "E8", "--gram", "[[1]]"}).code == 2);
  CHECK(run({"--json", "--text", "form", "list"}).code == 2);
  CHECK(run({"form", "analyze", "--builtin", "nope"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--help"}).out.find("Exit status") != std::string::npos);
  CHECK(run({"form", "analyze", "--gram", "[[1,2],[3,4]]"}).code == 1);
  CHECK(run({"form", "analyze", "--gram", "[[1,"}).code == 1);
  CHECK(run({"theta", "series", "--gram", "[[1]]"}).code == 1);
  CHECK(run({"tmf", "table", "--degree", "500"}).code == 1);
  CHECK(run({"jacobi", "check", "--gram", "[[2]]", "--element", "S"}).code == 1);
}

TEST_CASE("same seed, same bytes") {
  const std::vector<std::string> kirby{"kirby", "random", "--gram", "[[2,1],[1,-3]]", "--seed", "7", "--count", "5"};
  const Run a = run(kirby), b = run(kirby);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.json().at("failures") == 0);
  auto other = kirby;
  other[5] = "8";
  CHECK(run(other).out != a.out);

  const std::vector<std::string> jac{"jacobi", "check", "--gram", "[[2]]", "--element", "shift", "--seed", "3"};
  CHECK(run(jac).out == run(jac).out);
  CHECK(run(jac).json().at("passed") == true);
}

TEST_CASE("reports re-parse") {
  const std::vector<std::vector<std::string>> commands{
      {"form", "list"},
      {"form", "compare", "--form", "[[5]]", "--form", "[[2,1],[1,3]]"},
      {"form", "pullback", "--gram", "[[1,0,0],[0,-1,0],[0,0,-1]]", "--matrix", "[[1,1],[-1,0],[0,1]]"},
      {"kirby", "apply", "--link", R"({"framings": ["0", "0"], "linking": [["0", "1"], ["1", "0"]]})", "--moves",
       R"([{"blowup": 1}, {"slide": [1, 2]}])"},
      {"manifold", "z3", "--gram", "[[0]]"},
      {"manifold", "reverse", "--gram", "[[3]]"},
      {"cobordism", "degree", "--data", R"({"v0": [], "v1": [[1]], "inclusion": [[]]})"},
      {"cobordism", "linking", "--data", R"({"v0": [[5]], "v1": [[5,0],[0,1]], "inclusion": [[1],[0]]})"},
      {"theta", "series", "--builtin", "E8", "-N", "4"},
      {"theta", "delta", "-N", "6", "--power", "-2"},
      {"jacobi", "eval", "--gram", "[[2]]", "--tau", "0,5", "--z", "0,0"},
      {"jacobi", "cocycle", "--builtin", "E8", "--pairs", "3"},
      {"tmf", "table", "--degree", "3"},
      {"tmf", "validate"},
      {"tmf", "element", "--value", "eta", "--times", "eta"},
      {"tmf", "map"},
      {"tmf", "map", "--name", "duality_L0", "--sign", "-"},
      {"tmf", "compose", "--map", "restriction_L0", "--map", "twist_L0dual", "--map", "transfer_L0"},
  };
  for (const auto& c : commands) {
    CAPTURE(c[0] + " " + c[1]);
    const Run r = run(c);
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    const Json j = r.json();
    CHECK(j.at("schema").get<std::string>().rfind("quadtmf.", 0) == 0);
    CHECK(j.dump(2) + "\n" == r.out);
  }
}

TEST_CASE("payload values") {
  CHECK(run({"form", "pullback", "--gram", "[[1,0,0],[0,-1,0],[0,0,-1]]", "--matrix", "[[1,1],[-1,0],[0,1]]"})
            .json()
            .at("pullback")
            .at("gram") == Json::parse(R"([["0","1"],["1","0"]])"));
  const Json composite =
      run({"tmf", "compose", "--map", "restriction_L0", "--map", "twist_L0dual", "--map", "transfer_L0"}).json();
  CHECK(composite.at("element").at("value") == "eta");
  CHECK(run({"cobordism", "degree", "--data", R"({"v0": [], "v1": [[1]], "inclusion": [[]]})"}).json().at("degree") ==
        3);
  CHECK(run({"tmf", "map", "--name", "one_handle"}).json().at("conjectural") == true);
  CHECK(run({"tmf", "element", "--value", "eta", "--times", "2"}).json().at("product").at("value") == "0");
}

TEST_CASE("text reports") {
  const Run r = run({"--text", "form", "analyze", "--builtin", "E8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("signature (8,0,0)") != std::string::npos);
  CHECK(r.out.find("\"schema\"") == std::string::npos);
}
