#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "percolab/errors.hpp"
#include "percolab/multiset.hpp"

using namespace percolab;

TEST_CASE("standard multisets and parsing") {
  const auto f2 = GroupContext::free_group(2);
  const auto s = standard_generators(f2);
  CHECK(s.size() == 4);
  CHECK(s.is_symmetric(f2));
  CHECK(parse_multiset(f2, "[a, a^-1, b, b^-1]").same_multiset(s));
  CHECK(parse_multiset(f2, "std").same_multiset(s));
  CHECK_FALSE(parse_multiset(f2, "[a,b]").is_symmetric(f2));
  CHECK_THROWS_AS(parse_multiset(f2, "[a,"), ParseError);
}

TEST_CASE("powers keep the nominal size and collapse the support") {
  const auto f2 = GroupContext::free_group(2);
  const auto s = standard_generators(f2);
  for (int n = 1; n <= 4; ++n) {
    const auto p = multiset_power(f2, s, n);
    CHECK(p.size() == static_cast<std::uint64_t>(std::pow(4, n)));
  }
  // S^2 on free:2 has e with multiplicity 4 and 12 reduced words of length 2.
  const auto p2 = multiset_power(f2, s, 2);
  CHECK(p2.multiplicity(f2.identity()) == 4);
  CHECK(p2.support().size() == 13);
  CHECK(p2.is_symmetric(f2));
}

TEST_CASE("power of a symmetric multiset is symmetric in every family") {
  for (const auto& ctx : testing::three_families()) {
    const auto p = multiset_power(ctx, standard_generators(ctx), 3);
    CHECK(p.is_symmetric(ctx));
    Rational total = 0;
    for (const auto& e : p.support()) total += p.weight(e.element);
    CHECK(total == 1);
  }
}
