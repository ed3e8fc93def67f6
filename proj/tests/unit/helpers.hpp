#pragma once

#include <string>
#include <vector>

#include "percolab/group.hpp"
#include "percolab/rational.hpp"
#include "percolab/rng.hpp"

namespace testing {

inline percolab::Rational q(const char* text) { return percolab::parse_rational(text); }

// Random element built from `letters` standard generator steps.
inline percolab::GroupElement random_element(const percolab::GroupContext& ctx,
                                             percolab::PhiloxStream& rng, int letters) {
  auto g = ctx.identity();
  const auto k = static_cast<std::uint64_t>(ctx.num_generators());
  for (int i = 0; i < letters; ++i) {
    const int gen = static_cast<int>(rng.below(k));
    const int sign = rng.below(2) ? 1 : -1;
    g = ctx.mul(g, ctx.generator(gen, sign));
  }
  return g;
}

inline std::vector<percolab::GroupContext> three_families() {
  return {percolab::GroupContext::free_group(2), percolab::GroupContext::zd(2),
          percolab::GroupContext::free_product_cyclic({2, 3})};
}

}  // namespace testing
