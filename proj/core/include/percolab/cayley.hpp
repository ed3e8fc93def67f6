#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "percolab/group.hpp"
#include "percolab/multiset.hpp"

namespace percolab {

// Topology shared by Cayley and Schreier balls: vertices are in BFS order
// (so each sphere is a contiguous index range) and every vertex owns one
// edge slot per multiset entry, pointing at the vertex reached by that entry
// or at kOutside when the target lies beyond the radius.
class BallGraph {
 public:
  static constexpr std::uint32_t kOutside = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::size_t kUnpaired = std::numeric_limits<std::size_t>::max();

  std::size_t size() const { return distance_.size(); }
  int radius() const { return radius_; }
  std::size_t num_entries() const { return multiplicity_.size(); }
  std::uint64_t multiset_size() const { return multiset_size_; }

  std::uint32_t neighbor(std::uint32_t v, std::size_t entry) const {
    return neighbors_[static_cast<std::size_t>(v) * num_entries() + entry];
  }
  std::span<const std::uint32_t> slots(std::uint32_t v) const {
    return {neighbors_.data() + static_cast<std::size_t>(v) * num_entries(),
            num_entries()};
  }
  int distance(std::uint32_t v) const { return distance_[v]; }
  bool is_frontier(std::uint32_t v) const { return distance_[v] == radius_; }
  std::uint64_t multiplicity(std::size_t entry) const { return multiplicity_[entry]; }

  // Entry carrying the inverse element, or kUnpaired when the multiset is
  // not symmetric.
  std::size_t partner(std::size_t entry) const {
    return partner_.empty() ? kUnpaired : partner_[entry];
  }
  bool symmetric() const { return !partner_.empty(); }

  // Vertex indices [first, last) at distance r.
  std::pair<std::uint32_t, std::uint32_t> sphere_range(int r) const;

 protected:
  int radius_ = 0;
  std::uint64_t multiset_size_ = 0;
  std::vector<std::uint64_t> multiplicity_;
  std::vector<std::size_t> partner_;
  std::vector<std::uint32_t> neighbors_;
  std::vector<int> distance_;
  std::vector<std::uint32_t> sphere_offsets_;
};

struct BallBudget {
  std::size_t max_vertices = 5'000'000;
};

// Radius-R ball of the Cayley multigraph x -> s x around the identity.
class CayleyBall : public BallGraph {
 public:
  const GroupContext& context() const { return ctx_; }
  const GeneratorMultiset& generators() const { return generators_; }
  const GroupElement& center() const { return vertices_.front(); }
  const GroupElement& vertex(std::uint32_t v) const { return vertices_[v]; }
  std::optional<std::uint32_t> index_of(const GroupElement& g) const;

 private:
  friend CayleyBall build_ball(const GroupContext&, const GeneratorMultiset&,
                               int, BallBudget);
  GroupContext ctx_ = GroupContext::free_group(1);
  GeneratorMultiset generators_;
  std::vector<GroupElement> vertices_;
  std::unordered_map<GroupElement, std::uint32_t, GroupElementHash> index_;
};

// BFS ball: vertices are the elements within R steps of the identity using
// the support of S together with its inverses; slots follow the entries of S
// as given. Ties inside a sphere are broken by normal-form order. Throws
// BudgetError past budget.max_vertices.
CayleyBall build_ball(const GroupContext& ctx, const GeneratorMultiset& s, int radius,
                      BallBudget budget = {});

// Vertices at exactly distance r. Throws RangeError when r > radius.
std::vector<std::uint32_t> sphere(const BallGraph& ball, int r);

// `# ball group=<spec> R=<R> |S|=<n>` followed by `u v entry_index` lines.
void write_edge_list(std::ostream& os, const CayleyBall& ball);

using Point = std::vector<std::int64_t>;

// A left action of a group on points, given generator by generator.
// inverse[i] may be empty; elements needing it then raise ActionError.
struct GroupAction {
  std::vector<std::function<Point(const Point&)>> forward;
  std::vector<std::function<Point(const Point&)>> inverse;
};

// Applies g to p: for g = x1 x2 ... xn, returns x1(x2(...xn(p))).
Point act(const GroupContext& ctx, const GroupAction& action, const GroupElement& g,
          const Point& p);

class SchreierBall : public BallGraph {
 public:
  const Point& point(std::uint32_t v) const { return points_[v]; }
  const Point& basepoint() const { return points_.front(); }
  std::optional<std::uint32_t> index_of(const Point& p) const;
  const GeneratorMultiset& generators() const { return generators_; }

 private:
  friend SchreierBall build_schreier_ball(const GroupContext&, const GroupAction&,
                                          const GeneratorMultiset&, const Point&,
                                          int, bool, BallBudget);
  GeneratorMultiset generators_;
  std::vector<Point> points_;
  std::map<Point, std::uint32_t> index_;
};

// Orbit ball of radius R around the basepoint with edges x -> s.x. With
// `symmetrize`, S is first replaced by its symmetric closure, which needs the
// inverse maps (ActionError otherwise).
SchreierBall build_schreier_ball(const GroupContext& ctx, const GroupAction& action,
                                 const GeneratorMultiset& s, const Point& basepoint,
                                 int radius, bool symmetrize = true,
                                 BallBudget budget = {});

}  // namespace percolab
