#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadtmf/json_io.hpp"

using namespace quadtmf;

TEST_CASE("numbers travel as strings") {
  const BigInt big("123456789012345678901234567890");
  CHECK(to_json(big).is_string());
  CHECK(bigint_from_json(to_json(big)) == big);
  CHECK(bigint_from_json(Json(-7)) == -7);
  CHECK_THROWS_AS(bigint_from_json(Json("1.5")), Error);
  CHECK_THROWS_AS(bigint_from_json(Json::array()), Error);
  Rational r(-22, 7);
  CHECK(rational_from_json(to_json(r)) == r);
  CHECK(rational_from_json(Json("3")) == 3);
  CHECK_THROWS_AS(rational_from_json(Json("1/0")), Error);
}

TEST_CASE("forms and matrices") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const BilinearForm b(oracle::random_symmetric(1 + rng() % 4, 50, rng));
    CHECK(form_from_json(to_json(b)) == b);
    CHECK(int_matrix_from_json(to_json(b.gram())) == b.gram());
  }
  CHECK(form_from_json(Json::parse("[[2,1],[1,2]]")) == BilinearForm(IntMatrix{{2, 1}, {1, 2}}));
  CHECK_THROWS_AS(form_from_json(Json::parse("[[1,2],[3,4]]")), Error);
  CHECK_THROWS_AS(int_matrix_from_json(Json::parse("[[1,2],[3]]")), Error);
  const BilinearForm e8 = builtin_form("E8");
  CHECK(form_from_json(to_json(e8)) == e8);
}

TEST_CASE("signatures, discriminants and decisions") {
  const BilinearForm b(IntMatrix{{2, 1}, {1, 3}});
  CHECK(signature_from_json(to_json(signature(b))) == signature(b));
  const DiscriminantData d = discriminant(direct_sum(b, BilinearForm::zero(1)));
  const DiscriminantData back = discriminant_from_json(to_json(d));
  CHECK(back.free_rank == 1);
  CHECK(back.factors() == d.factors());
  CHECK(torsion_forms_isomorphic(back.torsion, d.torsion).is_true());
  CHECK(to_json(d).contains("lambda"));
  for (const Decision x : {Decision::decided(true), Decision::decided(false), Decision::inconclusive("budget")}) {
    const Decision y = decision_from_json(to_json(x));
    CHECK(y.is_true() == x.is_true());
    CHECK(y.is_false() == x.is_false());
  }
}

TEST_CASE("links and moves") {
  const FramedLink link = FramedLink::hopf(2, -1);
  CHECK(link_from_json(to_json(link)) == link);
  const std::vector<KirbyMove> moves{BlowUp{-1}, BlowDown{2}, HandleSlide{0, 1, -1}};
  for (const auto& m : moves) CHECK(move_from_json(to_json(m)) == m);
  CHECK(move_from_json(Json::parse(R"({"blowup": 1})")) == KirbyMove(BlowUp{1}));
  CHECK(move_from_json(Json::parse(R"({"blowdown": 1})")) == KirbyMove(BlowDown{0}));
  CHECK(move_from_json(Json::parse(R"({"slide": [2, 1]})")) == KirbyMove(HandleSlide{1, 0, 1}));
  CHECK(move_from_json(Json::parse(R"({"slide": [2, 1, -1]})")) == KirbyMove(HandleSlide{1, 0, -1}));
  CHECK_THROWS_AS(move_from_json(Json::parse(R"({"twist": 1})")), Error);
  CHECK_THROWS_AS(link_from_json(Json::parse(R"({"framings": ["0"], "linking": [["1"]]})")), Error);
}

TEST_CASE("coefficient elements and maps") {
  const TmfCoeffTable& t = TmfCoeffTable::builtin();
  for (const char* text : {"0", "eta", "-nu", "eta^2", "2*nu^2"}) {
    const TmfElement e = t.parse(text);
    CHECK(element_from_json(to_json(e), t) == e);
  }
  const TmfMap f = builtin_map("duality_L0", -1, t);
  CHECK(map_from_json(to_json(f), t) == f);
  CHECK_THROWS_AS(map_from_json(Json::parse(R"({"source_shifts": [0], "target_shifts": [0], "degree": 0, "entries": [["eta"]]})"), t),
                  Error);
}

TEST_CASE("module expressions") {
  const std::vector<TmfModuleExpr> exprs{
      TmfModuleExpr::tmf(3),
      TmfModuleExpr::cone_nu(-1),
      TmfModuleExpr::line(BilinearForm::diagonal({5, 0}), 2),
      TmfModuleExpr::sum({TmfModuleExpr::tmf(), TmfModuleExpr::cone_nu(4)}, -1),
      TmfModuleExpr::tensor({TmfModuleExpr::line(BilinearForm::diagonal({3})), TmfModuleExpr::cone_nu()}, 5),
  };
  for (const auto& e : exprs) {
    const TmfModuleExpr back = module_from_json(to_json(e));
    CHECK(back.normal_form() == e.normal_form());
    CHECK(back.to_string() == e.to_string());
  }
  CHECK(module_from_json(Json::parse(R"({"atom": "TMF", "shift": 2})")).normal_form() == NormalForm::tmf(2));
  CHECK_THROWS_AS(module_from_json(Json::parse(R"({"atom": "KO"})")), Error);
  const Json nf = to_json(TmfModuleExpr::line(BilinearForm::diagonal({5})).normal_form());
  CHECK(nf.value("opaque_equality", "") == "pm_equivalence");
  CHECK(!to_json(NormalForm::tmf()).contains("opaque_equality"));
}

TEST_CASE("series") {
  const QSeries d = delta_series(12).pow(-1);
  const QSeries back = series_from_json(to_json(d));
  CHECK(back == d);
  CHECK(back.weight() == d.weight());
  const Json e = to_json(edge_image(builtin_form("E8"), 3));
  CHECK(e.at("conjectural") == true);
  CHECK(e.at("sign_ambiguous") == true);
}
