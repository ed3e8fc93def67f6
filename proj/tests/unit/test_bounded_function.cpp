#include "doctest.h"
#include "helpers.hpp"
#include "percolab/bounded_function.hpp"
#include "percolab/errors.hpp"

using namespace percolab;
using testing::q;

namespace {

BoundedFunction random_prefix_function(const GroupContext& ctx, PhiloxStream& rng) {
  std::vector<std::pair<GroupElement, Rational>> nodes = {{ctx.identity(), 0}};
  for (int i = 0; i < 5; ++i)
    nodes.emplace_back(testing::random_element(ctx, rng, 1 + static_cast<int>(rng.below(3))),
                       make_rational(static_cast<std::int64_t>(rng.below(9)) - 4,
                                     1 + static_cast<std::int64_t>(rng.below(5))));
  // later duplicates would be ambiguous; keep the first value per node
  std::vector<std::pair<GroupElement, Rational>> unique;
  for (const auto& n : nodes) {
    bool seen = false;
    for (const auto& u : unique) seen = seen || u.first == n.first;
    if (!seen) unique.push_back(n);
  }
  return BoundedFunction::from_nodes(ctx, unique);
}

}  // namespace

TEST_CASE("cylinder indicators and translation") {
  const auto ctx = GroupContext::free_group(2);
  const auto a = ctx.generator(0);
  const auto a_minus = BoundedFunction::cylinder_indicator(ctx, ctx.inv(a));
  const auto moved = translate(a, a_minus);
  const auto expect =
      BoundedFunction::constant(ctx, 1) - BoundedFunction::cylinder_indicator(ctx, a);
  CHECK(moved == expect);
  CHECK(moved(ctx.identity()) == 1);
  CHECK(moved(ctx.parse_element("ab")) == 0);
  CHECK(moved(ctx.parse_element("ba")) == 1);
  CHECK(expect.sup() == 1);
  CHECK(expect.inf() == 0);
}

TEST_CASE("translation is a left action, pointwise") {
  PhiloxStream rng(31, 0);
  for (const auto& ctx : {GroupContext::free_group(2), GroupContext::free_product_cyclic({2, 3})}) {
    for (int i = 0; i < 60; ++i) {
      const auto f = random_prefix_function(ctx, rng);
      const auto g = testing::random_element(ctx, rng, 3);
      const auto h = testing::random_element(ctx, rng, 3);
      REQUIRE(translate(g, translate(h, f)) == translate(ctx.mul(g, h), f));
      const auto gf = translate(g, f);
      for (int j = 0; j < 10; ++j) {
        const auto x = testing::random_element(ctx, rng, 6);
        REQUIRE(gf(x) == f(ctx.mul(ctx.inv(g), x)));
      }
      REQUIRE(gf.sup() == f.sup());
      REQUIRE(gf.inf() == f.inf());
    }
  }
}

TEST_CASE("finite support translation on zd") {
  const auto ctx = GroupContext::zd(2);
  const auto f = BoundedFunction::from_support(
      ctx, {{ctx.from_coordinates({0, 0}), 2}, {ctx.from_coordinates({1, 0}), -1}});
  const auto g = translate(ctx.from_coordinates({0, 3}), f);
  CHECK(g(ctx.from_coordinates({0, 3})) == 2);
  CHECK(g(ctx.from_coordinates({1, 3})) == -1);
  CHECK(g(ctx.from_coordinates({0, 0})) == 0);
  CHECK(g.norm_inf() == 2);
  CHECK(g.inf() == -1);
  CHECK_THROWS_AS(lift_to_prefix(f), CoercionError);
}

TEST_CASE("averaging contracts sup and inf") {
  PhiloxStream rng(32, 0);
  const auto ctx = GroupContext::free_group(2);
  for (int i = 0; i < 30; ++i) {
    const auto f = random_prefix_function(ctx, rng);
    std::vector<GroupElement> set;
    for (int j = 0; j < 4; ++j) set.push_back(testing::random_element(ctx, rng, 2));
    const auto avg = average_convolve(set, f);
    REQUIRE(avg.sup() <= f.sup());
    REQUIRE(avg.inf() >= f.inf());
  }
  CHECK_THROWS_AS(average_convolve({}, BoundedFunction::constant(ctx, 1)), ArgumentError);
}

TEST_CASE("lifting keeps the function") {
  const auto ctx = GroupContext::free_group(2);
  const auto f = BoundedFunction::from_support(
      ctx, {{ctx.parse_element("ab"), q("3/2")}, {ctx.identity(), -1}});
  const auto lifted = lift_to_prefix(f);
  CHECK(lifted.representation() == Representation::prefix);
  PhiloxStream rng(33, 0);
  for (int i = 0; i < 200; ++i) {
    const auto x = testing::random_element(ctx, rng, 4);
    REQUIRE(lifted(x) == f(x));
  }
  CHECK(lifted.sup() == q("3/2"));
  CHECK(lifted.inf() == -1);
  CHECK((lifted - f).is_zero());
}

TEST_CASE("sums and canonical form") {
  const auto ctx = GroupContext::free_group(2);
  const auto a = BoundedFunction::cylinder_indicator(ctx, ctx.generator(0));
  const auto b = BoundedFunction::cylinder_indicator(ctx, ctx.generator(1));
  CHECK(sum({a, b, -a}) == b);
  CHECK((a - a).is_zero());
  CHECK((make_rational(2) * a)(ctx.parse_element("a^3")) == 2);
  CHECK_THROWS_AS(sum({}), ArgumentError);
}

TEST_CASE("JSON round trip") {
  PhiloxStream rng(34, 0);
  const auto ctx = GroupContext::free_group(2);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_prefix_function(ctx, rng);
    const auto text = to_json(f);
    REQUIRE(bounded_function_from_json(ctx, text) == f);
    REQUIRE(to_json(bounded_function_from_json(ctx, text)) == text);
  }
  const auto z = GroupContext::zd(1);
  const auto g = BoundedFunction::from_support(z, {{z.from_coordinates({4}), q("-7/3")}});
  CHECK(bounded_function_from_json(z, to_json(g)) == g);
  CHECK_THROWS_AS(bounded_function_from_json(ctx, "{"), ParseError);
}

TEST_CASE("depth budget") {
  const auto ctx = GroupContext::free_group(2);
  const auto f = BoundedFunction::cylinder_indicator(ctx, ctx.parse_element("ab"));
  CHECK_THROWS_AS(translate(ctx.parse_element("a^5"), f, {.max_depth = 4}), BudgetError);
  CHECK_NOTHROW(translate(ctx.parse_element("a^5"), f, {.max_depth = 8}));
}
