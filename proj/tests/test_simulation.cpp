#include <catch2/catch_amalgamated.hpp>

#include "itl/semantics.hpp"
#include "itl/simulation.hpp"
#include "test_util.hpp"

using namespace itl;

namespace {

Formula F(const char* s) { return parse_formula(s); }

// exhaustive search over subsets of the label-compatible pairs
std::vector<SimRelation> all_simulations(const LabelledStructure& x,
                                         const LabelledStructure& y) {
  std::vector<std::pair<int, int>> compatible;
  for (std::size_t a = 0; a < x.world_count(); ++a)
    for (std::size_t b = 0; b < y.world_count(); ++b) {
      SimRelation probe{{{static_cast<int>(a), static_cast<int>(b)}}};
      bool label_ok = true;
      const Closure& sx = *x.sigma();
      const Closure& sy = *y.sigma();
      for (std::size_t i = 0; i < sx.size() && label_ok; ++i)
        if (((x.label_mask(static_cast<int>(a)) >> i) & 1u) !=
            ((y.label_mask(static_cast<int>(b)) >> sy.at(sx[i])) & 1u))
          label_ok = false;
      if (label_ok) compatible.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
  REQUIRE(compatible.size() <= 14);
  std::vector<SimRelation> out;
  for (std::uint32_t mask = 0; mask < (1u << compatible.size()); ++mask) {
    SimRelation e;
    for (std::size_t k = 0; k < compatible.size(); ++k)
      if ((mask >> k) & 1u) e.pairs.push_back(compatible[k]);
    if (is_simulation(x, y, e)) out.push_back(e);
  }
  return out;
}

LabelledStructure chain2(const ClosurePtr& sigma, TypeMask lo, TypeMask hi) {
  LabelledStructure x(sigma, {"a", "b"}, {lo, hi});
  x.add_order_edge(0, 1);
  x.close_order();
  return x;
}

}  // namespace

TEST_CASE("largest simulation on the pointed examples") {
  auto sp = closure(F("p"));

  LabelledStructure w1(sp, {"w"}, {1});
  auto e = largest_simulation(w1, w1);
  CHECK(e.pairs == std::vector<std::pair<int, int>>{{0, 0}});

  LabelledStructure pos(sp, {"w"}, {1});
  LabelledStructure neg(sp, {"w"}, {0});
  CHECK(largest_simulation(pos, neg).pairs.empty());

  LabelledStructure chain = chain2(sp, 0, 1);
  auto e2 = largest_simulation(chain, pos);
  CHECK(e2.pairs == std::vector<std::pair<int, int>>{{1, 0}});
  CHECK(simulates(chain, 1, pos, 0));
  CHECK_FALSE(simulates(chain, 0, pos, 0));
}

TEST_CASE("largest simulation equals the union of all simulations") {
  testutil::Rng rng(777);
  for (int round = 0; round < 25; ++round) {
    Formula f = testutil::random_formula(rng, {"p", "q"}, testutil::pick(rng, 1, 2));
    ClosurePtr sigma = closure(f);
    Model mx = testutil::random_model(rng, round % 3 == 0 ? 4 : 3, {"p", "q"});
    Model my = testutil::random_model(rng, 3, {"p", "q"});
    LabelledStructure x = truth_labelling(mx, sigma);
    LabelledStructure y = truth_labelling(my, sigma);

    SimRelation computed = largest_simulation(x, y);
    CHECK(is_simulation(x, y, computed));

    std::set<std::pair<int, int>> in_union;
    for (const auto& e : all_simulations(x, y))
      for (auto pr : e.pairs) in_union.insert(pr);
    std::set<std::pair<int, int>> in_computed(computed.pairs.begin(), computed.pairs.end());
    CHECK(in_union == in_computed);
  }
}

TEST_CASE("composition of simulations is a simulation") {
  testutil::Rng rng(778);
  for (int round = 0; round < 25; ++round) {
    Formula f = testutil::random_formula(rng, {"p", "q"}, testutil::pick(rng, 1, 3));
    ClosurePtr sigma = closure(f);
    LabelledStructure x = truth_labelling(testutil::random_model(rng, 4, {"p", "q"}), sigma);
    LabelledStructure y = truth_labelling(testutil::random_model(rng, 4, {"p", "q"}), sigma);
    LabelledStructure z = truth_labelling(testutil::random_model(rng, 4, {"p", "q"}), sigma);
    SimRelation exy = largest_simulation(x, y);
    SimRelation eyz = largest_simulation(y, z);
    SimRelation comp;
    for (auto [a, b] : exy.pairs)
      for (auto [b2, c] : eyz.pairs)
        if (b == b2 && !comp.contains(a, c)) comp.pairs.push_back({a, c});
    std::sort(comp.pairs.begin(), comp.pairs.end());
    CHECK(is_simulation(x, z, comp));
  }
}

TEST_CASE("dynamic simulations") {
  auto sp = closure(F("p"));

  LabelledStructure a(sp, {"w"}, {0});
  a.ensure_succ();
  a.add_succ_edge(0, 0);

  // the empty relation is vacuously dynamic; identity on a functional graph
  // is dynamic
  CHECK(is_dynamic_simulation(a, a, SimRelation{}));
  CHECK(is_dynamic_simulation(a, a, SimRelation{{{0, 0}}}));

  // b steps but a cannot: the square fails
  LabelledStructure no_step(sp, {"w"}, {0});
  no_step.ensure_succ();
  CHECK_FALSE(is_dynamic_simulation(no_step, a, SimRelation{{{0, 0}}}));

  LabelledStructure no_succ(sp, {"w"}, {0});
  CHECK_THROWS_AS(is_dynamic_simulation(no_succ, a, SimRelation{}), std::invalid_argument);
}

TEST_CASE("simulation formulas, literally") {
  auto sp = closure(F("p"));

  LabelledStructure pos(sp, {"w"}, {1});
  CHECK(render(sim_formula(pos, 0)) == "p -> false");

  LabelledStructure neg(sp, {"w"}, {0});
  CHECK(render(sim_formula(neg, 0)) == "true -> p");

  LabelledStructure chain = chain2(sp, 0, 1);
  CHECK(render(sim_formula(chain, 0)) == "true -> p | (p -> false)");
  CHECK(render(sim_formula(chain, 1)) == "p -> false");

  CHECK(render(simplify_units(sim_formula(chain, 0))) == "p | (p -> false)");
  CHECK_THROWS_AS(sim_formula(chain, 7), std::invalid_argument);
}

TEST_CASE("simulation formulas characterize simulability") {
  // on random frame/model pairs: the model refutes Sim(w) at x exactly when
  // some y above x simulates w
  testutil::Rng rng(424242);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    Formula base = testutil::random_formula(rng, {"p", "q"}, testutil::pick(rng, 1, 2));
    ClosurePtr sigma = closure(base);
    LabelledStructure w_frame =
        truth_labelling(testutil::random_model(rng, 4, {"p", "q"}), sigma);
    Model m = testutil::random_model(rng, 5, {"p", "q"});

    for (std::size_t w = 0; w < w_frame.world_count(); ++w) {
      Formula sim = sim_formula(w_frame, static_cast<int>(w));
      std::vector<Formula> delta_gen = sigma->items();
      delta_gen.push_back(sim);
      ClosurePtr delta = closure_of(delta_gen);
      LabelledStructure x = truth_labelling(m, delta);
      auto truth = truth_table(m, *delta);
      const auto& sim_row = truth[delta->at(sim)];
      SimRelation big = largest_simulation(w_frame, x);
      for (std::size_t v = 0; v < m.world_count(); ++v) {
        bool refuted = !sim_row[v];
        bool simulated = false;
        for (std::size_t y = 0; y < x.world_count() && !simulated; ++y)
          if (x.leq(static_cast<int>(v), static_cast<int>(y)) &&
              big.contains(static_cast<int>(w), static_cast<int>(y)))
            simulated = true;
        INFO("w=" << w << " v=" << v << " sim=" << render(sim));
        CHECK(refuted == simulated);
        ++checked;
      }
    }
  }
  CHECK(checked >= 200);
}
