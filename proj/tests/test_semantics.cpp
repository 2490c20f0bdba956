#include <catch2/catch_amalgamated.hpp>

#include "itl/semantics.hpp"
#include "itl/structures.hpp"
#include "test_util.hpp"

using namespace itl;

namespace {
Formula F(const char* s) { return parse_formula(s); }
}

TEST_CASE("model validation") {
  RawModel ok;
  ok.worlds = {"w"};
  ok.succ = {{"w", "w"}};
  ok.valuation["w"] = {"p"};
  CHECK(validate_model(ok).ok());

  // successor swap on a chain breaks forward confluence (and a cycle in the
  // order would break antisymmetry)
  RawModel confl;
  confl.worlds = {"w", "v"};
  confl.order = {{"w", "v"}};
  confl.succ = {{"w", "v"}, {"v", "w"}};
  auto res = validate_model(confl);
  REQUIRE_FALSE(res.ok());
  CHECK(res.errors[0].find("forward confluence") != std::string::npos);

  RawModel cyc;
  cyc.worlds = {"w", "v"};
  cyc.order = {{"w", "v"}, {"v", "w"}};
  cyc.succ = {{"w", "w"}, {"v", "v"}};
  res = validate_model(cyc);
  REQUIRE_FALSE(res.ok());
  CHECK(res.errors[0].find("antisymmetric") != std::string::npos);

  RawModel mono;
  mono.worlds = {"w", "v"};
  mono.order = {{"w", "v"}};
  mono.succ = {{"w", "w"}, {"v", "v"}};
  mono.valuation["w"] = {"p"};
  res = validate_model(mono);
  REQUIRE_FALSE(res.ok());
  CHECK(res.errors[0].find("monotone") != std::string::npos);

  RawModel partial;
  partial.worlds = {"w", "v"};
  partial.succ = {{"w", "v"}};
  res = validate_model(partial);
  REQUIRE_FALSE(res.ok());  // successor not total

  RawModel twice;
  twice.worlds = {"w"};
  twice.succ = {{"w", "w"}, {"w", "w"}};
  CHECK_FALSE(validate_model(twice).ok());
}

TEST_CASE("evaluation on single-world models") {
  RawModel raw;
  raw.worlds = {"w"};
  raw.succ = {{"w", "w"}};
  raw.valuation["w"] = {"p"};
  Model m = *validate_model(raw).model;
  CHECK(eval(m, 0, F("F p")));
  CHECK(eval(m, 0, F("X p")));
  CHECK(eval(m, 0, F("G p")));

  RawModel empty;
  empty.worlds = {"w"};
  empty.succ = {{"w", "w"}};
  Model m2 = *validate_model(empty).model;
  CHECK(eval(m2, 0, F("G (p -> p)")));
  CHECK_FALSE(eval(m2, 0, F("F p")));
  CHECK_THROWS_AS(eval(m2, 3, F("p")), std::invalid_argument);
}

TEST_CASE("the three-world model refutes next-implication distribution") {
  Model m = testutil::three_world_model();
  Formula f = F("(X p -> X q) -> X (p -> q)");
  auto x = m.world_index("x");
  REQUIRE(x.has_value());
  CHECK_FALSE(eval(m, *x, f));
  CHECK_FALSE(model_valid(m, f));
  CHECK(model_valid(m, F("p -> p")));
  // the falsifier must itself be a legal model
  CHECK(eval(m, *m.world_index("z"), F("p")));
  CHECK(eval(m, *m.world_index("u"), F("p -> q")));
}

TEST_CASE("validity of an axiom instance on arbitrary models") {
  testutil::Rng rng(4242);
  for (int i = 0; i < 60; ++i) {
    Model m = testutil::random_model(rng, 6, {"p", "q"});
    CHECK(model_valid(m, F("p | X F p -> F p")));
  }
}

TEST_CASE("persistence: truth is upward closed") {
  testutil::Rng rng(1123);
  for (int i = 0; i < 150; ++i) {
    Model m = testutil::random_model(rng, 6, {"p", "q"});
    Formula f = testutil::random_formula(rng, {"p", "q"}, testutil::pick(rng, 0, 4),
                                         /*box_free=*/false, /*allow_bottom=*/true);
    ClosurePtr sigma = closure(f);
    auto truth = truth_table(m, *sigma);
    const auto& row = truth[sigma->at(f)];
    for (std::size_t a = 0; a < m.world_count(); ++a)
      for (std::size_t b = 0; b < m.world_count(); ++b)
        if (m.leq(static_cast<int>(a), static_cast<int>(b)) && row[a]) {
          INFO(render(f));
          CHECK(row[b]);
        }
  }
}

TEST_CASE("both Kripke-only schemata hold on random models") {
  testutil::Rng rng(5150);
  Formula a = F("G (p | q) -> F p | G q");
  Formula b = F("G (X p -> p) & G (p | q) -> p | G q");
  for (int i = 0; i < 100; ++i) {
    Model m = testutil::random_model(rng, 6, {"p", "q"});
    CHECK(model_valid(m, a));
    CHECK(model_valid(m, b));
  }
}

TEST_CASE("truth labelling produces quasimodels") {
  Model m = testutil::three_world_model();
  ClosurePtr sigma = closure(F("p"));
  LabelledStructure ls = truth_labelling(m, sigma);
  auto x = *ls.world_index("x");
  auto z = *ls.world_index("z");
  auto u = *ls.world_index("u");
  CHECK_FALSE(ls.label(x).positive(F("p")));
  CHECK(ls.label(z).positive(F("p")));
  CHECK_FALSE(ls.label(u).positive(F("p")));

  CHECK(validate_frame(ls).empty());
  CHECK(classify(ls).cls == StructureClass::Quasimodel);

  // single p-world with a self-loop over sub(F p)
  RawModel raw;
  raw.worlds = {"w"};
  raw.succ = {{"w", "w"}};
  raw.valuation["w"] = {"p"};
  Model single = *validate_model(raw).model;
  LabelledStructure l2 = truth_labelling(single, closure(F("F p")));
  CHECK(l2.label(0).positive(F("p")));
  CHECK(l2.label(0).positive(F("F p")));

  testutil::Rng rng(808);
  for (int i = 0; i < 60; ++i) {
    Model rm = testutil::random_model(rng, 5, {"p", "q"});
    Formula f = testutil::random_formula(rng, {"p", "q"}, testutil::pick(rng, 1, 4));
    LabelledStructure lab = truth_labelling(rm, closure(f));
    CHECK(validate_frame(lab).empty());
    CHECK(classify(lab).cls == StructureClass::Quasimodel);
  }
}

TEST_CASE("model files parse") {
  std::string text =
      "# comment\nworld a\nworld b\norder a b\nsucc a a\nsucc b b\nval b p q\n";
  RawModel raw = parse_raw_model(text);
  CHECK(raw.worlds.size() == 2);
  auto res = validate_model(raw);
  REQUIRE(res.ok());
  CHECK(res.model->holds_atom(1, "q"));
  CHECK_THROWS_AS(parse_raw_model("bogus x\n"), StructureParseError);
}
