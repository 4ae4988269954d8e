// Randomized property suites with fixed seeds.  The same sweeps back the
// acceptance criteria; here they run at reduced iteration counts for quick
// feedback.

#include "doctest.h"
#include "partact/partrep.hpp"
#include "support.hpp"

using namespace partact;
using namespace testsupport;

TEST_SUITE_BEGIN("properties");

TEST_CASE("restriction of a random global action always verifies") {
  std::mt19937 rng(424242);
  RatField Q;
  FpField F5(5);
  for (int trial = 0; trial < 12; ++trial) {
    int block = 1 + static_cast<int>(rng() % 2);
    if (trial % 2 == 0) {
      auto glob = random_global_action(Q, rng, block);
      REQUIRE(verify_tpa(glob).passed());
      REQUIRE(is_global(glob));
      auto rr = restrict_global(glob, random_unital_ideal(*glob.R, glob.R, rng));
      CHECK(verify_tpa(rr.action).passed());
    } else {
      auto glob = random_global_action(F5, rng, block);
      REQUIRE(verify_tpa(glob).passed());
      auto rr = restrict_global(glob, random_unital_ideal(*glob.R, glob.R, rng));
      CHECK(verify_tpa(rr.action).passed());
    }
  }
}

TEST_CASE("planted factor-set twists over F5 are always recovered") {
  std::mt19937 rng(31337);
  Groupoid g = four_arrow_groupoid();
  FpField F5(5);
  PmEnumeration<FpField> pm = enumerate_pm(F5, g);
  REQUIRE(!pm.sigmas.empty());
  for (int trial = 0; trial < 12; ++trial) {
    const auto& base = pm.sigmas[rng() % pm.sigmas.size()];
    std::vector<Mod> nu;
    for (int i = 0; i < g.size(); ++i) nu.push_back(Mod(1 + rng() % 4, 5));
    auto twisted = base;
    for (auto [x, y] : g.composable_pairs()) {
      if (twisted.at(x, y).is_zero()) continue;
      twisted.at(x, y) = nu[static_cast<size_t>(x)] * nu[static_cast<size_t>(y)] /
                         nu[static_cast<size_t>(g.compose(x, y))] * base.at(x, y);
    }
    auto witness = equivalent_factor_sets(base, twisted);
    REQUIRE(witness.has_value());
    for (auto [x, y] : g.composable_pairs()) {
      if (base.at(x, y).is_zero()) continue;
      CHECK((*witness)[static_cast<size_t>(x)] * (*witness)[static_cast<size_t>(y)] /
                (*witness)[static_cast<size_t>(g.compose(x, y))] * twisted.at(x, y) ==
            base.at(x, y));
    }
  }
}

TEST_CASE("groupoid table mutations are always detected") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    Groupoid g = random_groupoid(rng);
    if (g.size() < 2) g = Groupoid::disjoint_union(g, Groupoid::cyclic_group(2));
    REQUIRE(verify_groupoid(g).passed());
    GroupoidMutation mut = mutate_groupoid(g, rng);
    CHECK(!verify_groupoid(mut.mutated).passed());
  }
}

TEST_SUITE_END();
