#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "oracle_values.hpp"
#include "percolab/errors.hpp"
#include "percolab/isoperimetry.hpp"

using namespace percolab;
using testing::q;

namespace {

std::vector<GroupElement> random_set(const GroupContext& ctx, PhiloxStream& rng) {
  std::set<GroupElement> out;
  const auto n = 1 + rng.below(8);
  while (out.size() < n) out.insert(testing::random_element(ctx, rng, 3));
  return {out.begin(), out.end()};
}

}  // namespace

TEST_CASE("boundary plus overlap covers every slot") {
  PhiloxStream rng(21, 0);
  int cases = 0;
  for (const auto& ctx : testing::three_families()) {
    const auto s = standard_generators(ctx);
    for (int i = 0; i < 334; ++i, ++cases) {
      const auto f = phi(ctx, s, random_set(ctx, rng));
      REQUIRE(f.phi + f.overlap == 1);
      for (std::size_t e = 0; e < s.num_entries(); ++e)
        REQUIRE(f.boundary_counts[e] + f.overlap_counts[e] == f.size());
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("phi is invariant under right translation") {
  PhiloxStream rng(22, 0);
  for (const auto& ctx : testing::three_families()) {
    const auto s = standard_generators(ctx);
    for (int i = 0; i < 100; ++i) {
      const auto f = random_set(ctx, rng);
      const auto g = testing::random_element(ctx, rng, 4);
      std::vector<GroupElement> fg;
      for (const auto& x : f) fg.push_back(ctx.mul(x, g));
      REQUIRE(phi(ctx, s, f).phi == phi(ctx, s, fg).phi);
    }
  }
}

TEST_CASE("ball-based and group-based phi agree") {
  const auto ctx = GroupContext::free_group(2);
  const auto ball = build_ball(ctx, standard_generators(ctx), 3);
  std::vector<std::uint32_t> v = {0, 1, 2, 5, 9};
  std::vector<GroupElement> els;
  for (auto i : v) els.push_back(ball.vertex(i));
  CHECK(phi(ball, v).phi == phi(ctx, standard_generators(ctx), els).phi);
}

TEST_CASE("exhaustive minima on the tree") {
  const auto ctx = GroupContext::free_group(2);
  const auto ball = build_ball(ctx, standard_generators(ctx), 5);
  const auto r = folner_search_exhaustive(ball, {.max_size = 6});
  REQUIRE(r.min_phi_by_size.size() == 6);
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    CHECK(*r.min_phi_by_size[n - 1] == q(oracle::kTreeMinPhi[n - 1]));
    // a tree set of size n has 2n + 2 boundary slots out of 4n
    CHECK(*r.min_phi_by_size[n - 1] == make_rational(2 * n + 2, 4 * n));
  }
  CHECK(r.best.phi == q(oracle::kTreeMinPhi[5]));
}

TEST_CASE("exhaustive minima on the square grid") {
  const auto ctx = GroupContext::zd(2);
  const auto ball = build_ball(ctx, standard_generators(ctx), 6);
  const auto r = folner_search_exhaustive(ball, {.max_size = 7});
  for (int n = 1; n <= 7; ++n) {
    CAPTURE(n);
    CHECK(*r.min_phi_by_size[n - 1] == q(oracle::kGridMinPhi[n - 1]));
  }
}

TEST_CASE("exhaustive search is deterministic across thread counts") {
  const auto ctx = GroupContext::zd(2);
  const auto ball = build_ball(ctx, standard_generators(ctx), 6);
  const auto a = folner_search_exhaustive(ball, {.max_size = 7, .threads = 1});
  const auto b = folner_search_exhaustive(ball, {.max_size = 7, .threads = 4});
  CHECK(a.best.elements == b.best.elements);
  CHECK(a.min_phi_by_size == b.min_phi_by_size);
  CHECK(a.sets_visited == b.sets_visited);
  CHECK_THROWS_AS(folner_search_exhaustive(ball, {.max_size = 9}), RangeError);
}

TEST_CASE("annealing finds low-phi sets and reports exact phi") {
  const auto ctx = GroupContext::zd(2);
  const auto ball = build_ball(ctx, standard_generators(ctx), 10);
  const auto r = folner_search_anneal(ball, {.steps = 20000, .seed = 3});
  CHECK(r.best.phi == phi(ctx, standard_generators(ctx), r.best.elements).phi);
  CHECK(r.best.phi <= make_rational(1, 2));
  const auto again = folner_search_anneal(ball, {.steps = 20000, .seed = 3});
  CHECK(again.best.elements == r.best.elements);
}

TEST_CASE("Mohar bounds") {
  const double rho = std::sqrt(3.0) / 2;
  const auto b = mohar_bounds(rho, rho, 4, true);
  REQUIRE(b.lower);
  CHECK(*b.lower == doctest::Approx(oracle::kMoharLowerTree).epsilon(1e-14));
  CHECK(b.lower_source == HLowerSource::mohar_from_exact_rho);
  REQUIRE(b.upper);
  CHECK(*b.upper == doctest::Approx(0.5).epsilon(1e-14));
  // every h bound is bracketed by the search results
  CHECK(*b.lower <= to_double(q(oracle::kTreeMinPhi[5])));
  CHECK_THROWS_AS(mohar_bounds(std::nullopt, rho, 1), RangeError);
  CHECK_THROWS_AS(mohar_bounds(1.5, std::nullopt, 4), ArgumentError);
}

TEST_CASE("criterion is strict and needs certified input") {
  CHECK_FALSE(criterion_check(kCriterionThreshold, HLowerSource::mohar_from_exact_rho).certified);
  CHECK(criterion_check(kCriterionThreshold + 1e-9, HLowerSource::mohar_from_exact_rho).certified);
  const auto r = criterion_check(0.9, HLowerSource::none);
  CHECK_FALSE(r.certified);
  CHECK_FALSE(r.input_certified);
  CHECK(r.margin == doctest::Approx(0.9 - kCriterionThreshold));
}

TEST_CASE("power witness search") {
  const auto r = witness_power_search(4, std::sqrt(3.0) / 2, 12);
  REQUIRE(r.n);
  CHECK(*r.n == 9);
  REQUIRE(r.trail.size() >= 9);
  CHECK(*r.trail[7].bounds.lower == doctest::Approx(oracle::kWitnessH8).epsilon(1e-12));
  CHECK(*r.trail[8].bounds.lower == doctest::Approx(oracle::kWitnessH9).epsilon(1e-12));
  CHECK(*r.trail[7].bounds.lower < kCriterionThreshold);
  CHECK_FALSE(witness_power_search(4, std::sqrt(3.0) / 2, 8).n);
  CHECK_THROWS_AS(witness_power_search(4, 1.2, 8), ArgumentError);
}
