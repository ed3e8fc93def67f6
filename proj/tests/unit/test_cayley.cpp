#include "doctest.h"
#include "percolab/cayley.hpp"
#include "percolab/errors.hpp"
#include "percolab/multiset.hpp"

using namespace percolab;

TEST_CASE("ball sizes") {
  const auto f2 = GroupContext::free_group(2);
  for (int r = 0; r <= 6; ++r) {
    const auto ball = build_ball(f2, standard_generators(f2), r);
    std::size_t expect = 1;
    for (int k = 1, s = 4; k <= r; ++k, s *= 3) expect += static_cast<std::size_t>(s);
    CHECK(ball.size() == expect);
  }
  const auto z2 = GroupContext::zd(2);
  for (int r = 0; r <= 8; ++r)
    CHECK(build_ball(z2, standard_generators(z2), r).size() ==
          static_cast<std::size_t>(2 * r * r + 2 * r + 1));
}

TEST_CASE("slots point at s x and pair with inverses") {
  const auto f2 = GroupContext::free_group(2);
  const auto s = standard_generators(f2);
  const auto ball = build_ball(f2, s, 4);
  REQUIRE(ball.symmetric());
  for (std::uint32_t v = 0; v < ball.size(); ++v) {
    for (std::size_t i = 0; i < ball.num_entries(); ++i) {
      const auto t = ball.neighbor(v, i);
      const auto target = f2.mul(s.entries()[i].element, ball.vertex(v));
      if (t == BallGraph::kOutside) {
        CHECK(f2.word_length(target) > 4);
        continue;
      }
      CHECK(ball.vertex(t) == target);
      CHECK(ball.neighbor(t, ball.partner(i)) == v);
    }
  }
}

TEST_CASE("spheres and budgets") {
  const auto f2 = GroupContext::free_group(2);
  const auto ball = build_ball(f2, standard_generators(f2), 3);
  CHECK(sphere(ball, 3).size() == 36);
  CHECK_THROWS_AS(sphere(ball, 4), RangeError);
  CHECK_THROWS_AS(build_ball(f2, standard_generators(f2), 12, {.max_vertices = 1000}),
                  BudgetError);
}
