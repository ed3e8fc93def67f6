#include "percolab/cayley.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "percolab/errors.hpp"

namespace percolab {

std::pair<std::uint32_t, std::uint32_t> BallGraph::sphere_range(int r) const {
  if (r < 0 || r > radius_)
    throw RangeError("sphere radius " + std::to_string(r) + " outside ball of radius " +
                     std::to_string(radius_));
  return {sphere_offsets_[r], sphere_offsets_[r + 1]};
}

std::vector<std::uint32_t> sphere(const BallGraph& ball, int r) {
  auto [first, last] = ball.sphere_range(r);
  std::vector<std::uint32_t> out(last - first);
  for (std::uint32_t v = first; v < last; ++v) out[v - first] = v;
  return out;
}

std::optional<std::uint32_t> CayleyBall::index_of(const GroupElement& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CayleyBall build_ball(const GroupContext& ctx, const GeneratorMultiset& s, int radius,
                      BallBudget budget) {
  if (radius < 0) throw ArgumentError("ball radius must be non-negative");
  if (s.empty()) throw ArgumentError("cannot build a ball over an empty multiset");
  for (const auto& e : s.entries()) ctx.check(e.element);

  CayleyBall ball;
  ball.ctx_ = ctx;
  ball.generators_ = s;
  ball.radius_ = radius;
  ball.multiset_size_ = s.size();
  for (const auto& e : s.entries()) ball.multiplicity_.push_back(e.multiplicity);
  if (s.is_symmetric(ctx)) {
    try {
      ball.partner_ = s.inverse_pairing(ctx);
    } catch (const ArgumentError&) {
      ball.partner_.clear();
    }
  }

  std::vector<GroupElement> steps;
  for (const auto& e : symmetric_closure(ctx, s).support())
    if (!ctx.is_identity(e.element)) steps.push_back(e.element);

  ball.vertices_.push_back(ctx.identity());
  ball.index_.emplace(ctx.identity(), 0);
  ball.distance_.push_back(0);
  ball.sphere_offsets_ = {0, 1};
  for (int r = 1; r <= radius; ++r) {
    const std::uint32_t first = ball.sphere_offsets_[r - 1];
    const std::uint32_t last = ball.sphere_offsets_[r];
    std::vector<GroupElement> level;
    for (std::uint32_t v = first; v < last; ++v) {
      for (const auto& t : steps) {
        GroupElement y = ctx.mul(t, ball.vertices_[v]);
        if (!ball.index_.contains(y)) level.push_back(std::move(y));
      }
    }
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
    if (ball.vertices_.size() + level.size() > budget.max_vertices)
      throw BudgetError("ball of radius " + std::to_string(radius) + " in " + ctx.spec() +
                        " exceeds the vertex guard of " +
                        std::to_string(budget.max_vertices));
    for (auto& y : level) {
      ball.index_.emplace(y, static_cast<std::uint32_t>(ball.vertices_.size()));
      ball.vertices_.push_back(std::move(y));
      ball.distance_.push_back(r);
    }
    ball.sphere_offsets_.push_back(static_cast<std::uint32_t>(ball.vertices_.size()));
  }

  const std::size_t m = s.num_entries();
  ball.neighbors_.assign(ball.vertices_.size() * m, BallGraph::kOutside);
  for (std::uint32_t v = 0; v < ball.vertices_.size(); ++v) {
    for (std::size_t i = 0; i < m; ++i) {
      auto it = ball.index_.find(ctx.mul(s.entries()[i].element, ball.vertices_[v]));
      if (it != ball.index_.end()) ball.neighbors_[v * m + i] = it->second;
    }
  }
  return ball;
}

void write_edge_list(std::ostream& os, const CayleyBall& ball) {
  os << "# ball group=" << ball.context().spec() << " R=" << ball.radius()
     << " |S|=" << ball.multiset_size() << '\n';
  for (std::uint32_t u = 0; u < ball.size(); ++u) {
    for (std::size_t i = 0; i < ball.num_entries(); ++i) {
      const auto v = ball.neighbor(u, i);
      if (v != BallGraph::kOutside) os << u << ' ' << v << ' ' << i << '\n';
    }
  }
}

Point act(const GroupContext& ctx, const GroupAction& action, const GroupElement& g,
          const Point& p) {
  ctx.check(g);
  const auto n = static_cast<std::size_t>(ctx.num_generators());
  if (action.forward.size() != n)
    throw ActionError("action needs one forward map per generator of " + ctx.spec());
  auto apply = [&](int gen, bool inverse, const Point& x) -> Point {
    if (!inverse) return action.forward[gen](x);
    if (gen >= static_cast<int>(action.inverse.size()) || !action.inverse[gen])
      throw ActionError("no inverse map supplied for generator " + ctx.generator_name(gen));
    return action.inverse[gen](x);
  };
  Point x = p;
  const auto data = g.data();
  switch (ctx.family()) {
    case Family::zd:
      for (int i = static_cast<int>(data.size()) - 1; i >= 0; --i)
        for (int k = 0; k < std::abs(data[i]); ++k) x = apply(i, data[i] < 0, x);
      break;
    case Family::free_group:
      for (auto it = data.rbegin(); it != data.rend(); ++it)
        x = apply(std::abs(*it) - 1, *it < 0, x);
      break;
    case Family::free_product_cyclic:
      for (auto it = data.rbegin(); it != data.rend(); ++it) {
        const int gen = (*it >> 16) - 1;
        const int e = *it & 0xffff;
        for (int k = 0; k < e; ++k) x = apply(gen, false, x);
      }
      break;
  }
  return x;
}

std::optional<std::uint32_t> SchreierBall::index_of(const Point& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SchreierBall build_schreier_ball(const GroupContext& ctx, const GroupAction& action,
                                 const GeneratorMultiset& s, const Point& basepoint,
                                 int radius, bool symmetrize, BallBudget budget) {
  if (radius < 0) throw ArgumentError("ball radius must be non-negative");
  if (s.empty()) throw ArgumentError("cannot build a ball over an empty multiset");
  const GeneratorMultiset gens = symmetrize ? symmetric_closure(ctx, s) : s;

  SchreierBall ball;
  ball.generators_ = gens;
  ball.radius_ = radius;
  ball.multiset_size_ = gens.size();
  for (const auto& e : gens.entries()) ball.multiplicity_.push_back(e.multiplicity);
  if (gens.is_symmetric(ctx)) {
    try {
      ball.partner_ = gens.inverse_pairing(ctx);
    } catch (const ArgumentError&) {
      ball.partner_.clear();
    }
  }

  const std::size_t m = gens.num_entries();
  // Images are computed once per (vertex, entry) and reused for the slots.
  std::vector<Point> images;
  ball.points_.push_back(basepoint);
  ball.index_.emplace(basepoint, 0);
  ball.distance_.push_back(0);
  ball.sphere_offsets_ = {0, 1};
  for (int r = 0; r <= radius; ++r) {
    const std::uint32_t first = ball.sphere_offsets_[r];
    const std::uint32_t last = ball.sphere_offsets_[r + 1];
    std::set<Point> level;
    for (std::uint32_t v = first; v < last; ++v) {
      for (std::size_t i = 0; i < m; ++i) {
        Point y = act(ctx, action, gens.entries()[i].element, ball.points_[v]);
        if (r < radius && !ball.index_.contains(y)) level.insert(y);
        images.push_back(std::move(y));
      }
    }
    if (r == radius) break;
    if (ball.points_.size() + level.size() > budget.max_vertices)
      throw BudgetError("Schreier ball exceeds the vertex guard of " +
                        std::to_string(budget.max_vertices));
    for (const auto& y : level) {
      ball.index_.emplace(y, static_cast<std::uint32_t>(ball.points_.size()));
      ball.points_.push_back(y);
      ball.distance_.push_back(r + 1);
    }
    ball.sphere_offsets_.push_back(static_cast<std::uint32_t>(ball.points_.size()));
  }

  ball.neighbors_.assign(ball.points_.size() * m, BallGraph::kOutside);
  for (std::size_t k = 0; k < images.size(); ++k) {
    auto it = ball.index_.find(images[k]);
    if (it != ball.index_.end()) ball.neighbors_[k] = it->second;
  }
  return ball;
}

}  // namespace percolab
