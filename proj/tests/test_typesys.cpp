#include <catch2/catch_amalgamated.hpp>

#include "itl/typesys.hpp"
#include "test_util.hpp"

using namespace itl;

namespace {
Formula F(const char* s) { return parse_formula(s); }
}

TEST_CASE("type enumeration over small closures") {
  auto tp = enumerate_types(closure(F("p")));
  REQUIRE(tp.size() == 2);
  CHECK(tp[0].negative(F("p")));  // all-negative comes first
  CHECK(tp[1].positive(F("p")));

  auto tfp = enumerate_types(closure(F("F p")));
  REQUIRE(tfp.size() == 3);  // ({p,Fp};), ({p};{Fp}), (;{p,Fp})
  CHECK(tfp[0].negative(F("p")));
  CHECK(tfp[0].negative(F("F p")));
  CHECK(tfp[1].negative(F("p")));
  CHECK(tfp[1].positive(F("F p")));
  CHECK(tfp[2].positive(F("p")));
  CHECK(tfp[2].positive(F("F p")));

  auto tbot = enumerate_types(closure(bottom()));
  REQUIRE(tbot.size() == 1);
  CHECK(tbot[0].negative(bottom()));

  CHECK_THROWS_AS(enumerate_types(closure(F("G p"))), std::invalid_argument);
}

TEST_CASE("local conditions: conjunction, disjunction, implication") {
  // p & q is positive exactly when both conjuncts are
  for (const auto& t : enumerate_types(closure(F("p & q"))))
    CHECK(t.positive(F("p & q")) == (t.positive(F("p")) && t.positive(F("q"))));
  for (const auto& t : enumerate_types(closure(F("p | q"))))
    CHECK(t.positive(F("p | q")) == (t.positive(F("p")) || t.positive(F("q"))));
  for (const auto& t : enumerate_types(closure(F("p -> q"))))
    if (t.positive(F("p -> q"))) CHECK((t.negative(F("p")) || t.positive(F("q"))));
  // the implication condition is one-directional: p negative, q negative,
  // p -> q negative is a legal type
  bool found = false;
  for (const auto& t : enumerate_types(closure(F("p -> q"))))
    if (t.negative(F("p")) && t.negative(F("q")) && t.negative(F("p -> q"))) found = true;
  CHECK(found);
}

TEST_CASE("type orders") {
  auto sigma = closure(F("F p"));
  auto ts = enumerate_types(sigma);
  REQUIRE(ts.size() == 3);
  CHECK(type_leq(ts[0], ts[2]));
  CHECK_FALSE(type_leq(ts[2], ts[1]));
  for (const auto& t : ts) CHECK(type_leq(t, t));

  // partial order: antisymmetry and transitivity over the enumeration
  for (const auto& a : ts)
    for (const auto& b : ts) {
      if (type_leq(a, b) && type_leq(b, a)) CHECK(a == b);
      for (const auto& c : ts)
        if (type_leq(a, b) && type_leq(b, c)) CHECK(type_leq(a, c));
    }

  auto sp = closure(F("p"));
  auto small = enumerate_types(sp);
  // ({p};) over {p} embeds into ({p};{F p}) over {p, F p}
  CHECK(type_sub(small[0], ts[1]));
  CHECK_FALSE(type_sub(small[0], ts[2]));
  CHECK(type_sub(small[1], ts[2]));
  CHECK(type_sub(ts[1], ts[1]));
  CHECK_THROWS_AS(type_sub(ts[1], small[0]), std::invalid_argument);
}

TEST_CASE("temporal compatibility") {
  auto sigma = closure(F("F p"));
  auto ts = enumerate_types(sigma);
  const auto& t_none = ts[0];  // ({p, F p};)
  const auto& t_pend = ts[1];  // ({p};{F p})
  const auto& t_full = ts[2];  // (;{p, F p})

  CHECK(st_related(t_pend, t_full));   // pending eventuality stays positive
  CHECK_FALSE(st_related(t_pend, t_none));
  CHECK_FALSE(st_related(t_none, t_full));  // refuted eventuality stays negative
  CHECK(st_related(t_none, t_none));
  CHECK(st_related(t_full, t_none));  // fulfilled: no constraint ahead

  // next: both signs transfer
  auto sx = closure(F("X p"));
  for (const auto& a : enumerate_types(sx))
    for (const auto& b : enumerate_types(sx))
      CHECK(st_related(a, b) == (a.positive(F("X p")) == b.positive(F("p"))));

  // without temporal formulas the relation is total
  auto sprop = closure(F("p & q"));
  for (const auto& a : enumerate_types(sprop))
    for (const auto& b : enumerate_types(sprop)) CHECK(st_related(a, b));
}

TEST_CASE("rendering") {
  auto ts = enumerate_types(closure(F("F p")));
  CHECK(ts[1].to_string() == "+{F p} -{p}");
}
