#include "percolab/isoperimetry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "parallel.hpp"
#include "percolab/errors.hpp"
#include "percolab/rng.hpp"

namespace percolab {

__extension__ typedef unsigned __int128 u128;

namespace {

Rational ratio(std::uint64_t num, std::uint64_t size, std::size_t f) {
  return Rational(BigInt(num), BigInt(size) * BigInt(f));
}

FolnerCandidate finish(std::vector<GroupElement> elements, const GeneratorMultiset& s,
                       std::vector<std::uint64_t> boundary,
                       std::vector<std::uint64_t> overlap) {
  FolnerCandidate c;
  std::uint64_t b = 0, o = 0;
  const auto& entries = s.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    b += entries[i].multiplicity * boundary[i];
    o += entries[i].multiplicity * overlap[i];
  }
  c.phi = ratio(b, s.size(), elements.size());
  c.overlap = ratio(o, s.size(), elements.size());
  c.elements = std::move(elements);
  c.boundary_counts = std::move(boundary);
  c.overlap_counts = std::move(overlap);
  c.multiset = s;
  return c;
}

}  // namespace

FolnerCandidate phi(const GroupContext& ctx, const GeneratorMultiset& s,
                    const std::vector<GroupElement>& f) {
  if (f.empty()) throw ArgumentError("phi of an empty set");
  if (s.empty()) throw ArgumentError("phi against an empty multiset");
  std::vector<GroupElement> elements;
  std::unordered_set<GroupElement, GroupElementHash> members;
  for (const auto& g : f) {
    ctx.check(g);
    if (members.insert(g).second) elements.push_back(g);
  }
  std::vector<std::uint64_t> boundary, overlap;
  for (const auto& e : s.entries()) {
    ctx.check(e.element);
    std::unordered_set<GroupElement, GroupElementHash> translate;
    for (const auto& x : elements) translate.insert(ctx.mul(e.element, x));
    std::uint64_t out = 0, in = 0;
    for (const auto& y : translate) (members.contains(y) ? in : out) += 1;
    boundary.push_back(out);
    overlap.push_back(in);
  }
  return finish(std::move(elements), s, std::move(boundary), std::move(overlap));
}

FolnerCandidate phi(const CayleyBall& ball, const std::vector<std::uint32_t>& vertices) {
  if (vertices.empty()) throw ArgumentError("phi of an empty set");
  std::vector<char> member(ball.size(), 0);
  std::vector<std::uint32_t> unique;
  for (auto v : vertices) {
    if (v >= ball.size()) throw RangeError("vertex index outside the ball");
    if (!member[v]) {
      member[v] = 1;
      unique.push_back(v);
    }
  }
  const std::size_t m = ball.num_entries();
  std::vector<std::uint64_t> boundary(m, 0), overlap(m, 0);
  for (auto v : unique) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto t = ball.neighbor(v, i);
      (t != BallGraph::kOutside && member[t] ? overlap[i] : boundary[i]) += 1;
    }
  }
  std::vector<GroupElement> elements;
  elements.reserve(unique.size());
  for (auto v : unique) elements.push_back(ball.vertex(v));
  return finish(std::move(elements), ball.generators(), std::move(boundary),
                std::move(overlap));
}

namespace {

// Undirected adjacency plus the incoming slots of every vertex, both in CSR
// form, with the weighted boundary bookkeeping shared by both searches.
struct SearchGraph {
  std::vector<std::uint32_t> adj_offsets, adj;
  std::vector<std::uint32_t> in_offsets, in_source;
  std::vector<std::uint64_t> in_weight;
  std::vector<std::uint64_t> weight;  // per entry
  const BallGraph* ball = nullptr;

  explicit SearchGraph(const BallGraph& b) : ball(&b) {
    const std::size_t n = b.size(), m = b.num_entries();
    for (std::size_t i = 0; i < m; ++i) weight.push_back(b.multiplicity(i));
    std::vector<std::vector<std::uint32_t>> nb(n);
    std::vector<std::uint32_t> in_count(n + 1, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < m; ++i) {
        const auto t = b.neighbor(v, i);
        if (t == BallGraph::kOutside) continue;
        ++in_count[t + 1];
        if (t == v) continue;
        nb[v].push_back(t);
        nb[t].push_back(v);
      }
    }
    adj_offsets.push_back(0);
    for (auto& list : nb) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      adj.insert(adj.end(), list.begin(), list.end());
      adj_offsets.push_back(static_cast<std::uint32_t>(adj.size()));
    }
    for (std::size_t v = 0; v < n; ++v) in_count[v + 1] += in_count[v];
    in_offsets = in_count;
    in_source.resize(in_offsets.back());
    in_weight.resize(in_offsets.back());
    std::vector<std::uint32_t> fill(in_offsets.begin(), in_offsets.end() - 1);
    for (std::uint32_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < m; ++i) {
        const auto t = b.neighbor(v, i);
        if (t == BallGraph::kOutside) continue;
        in_source[fill[t]] = v;
        in_weight[fill[t]] = weight[i];
        ++fill[t];
      }
    }
  }

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {adj.data() + adj_offsets[v], adj_offsets[v + 1] - adj_offsets[v]};
  }

  // Weighted boundary after adding w to the set marked by `member`.
  std::uint64_t boundary_after_add(std::uint64_t b, std::uint32_t w,
                                   const std::vector<char>& member) const {
    const std::size_t m = weight.size();
    for (std::size_t i = 0; i < m; ++i) {
      const auto t = ball->neighbor(w, i);
      if (t == BallGraph::kOutside || (t != w && !member[t])) b += weight[i];
    }
    for (auto k = in_offsets[w]; k < in_offsets[w + 1]; ++k)
      if (in_source[k] != w && member[in_source[k]]) b -= in_weight[k];
    return b;
  }

  // Weighted boundary after removing w (currently a member).
  std::uint64_t boundary_after_remove(std::uint64_t b, std::uint32_t w,
                                      const std::vector<char>& member) const {
    const std::size_t m = weight.size();
    for (std::size_t i = 0; i < m; ++i) {
      const auto t = ball->neighbor(w, i);
      if (t == BallGraph::kOutside || (t != w && !member[t])) b -= weight[i];
    }
    for (auto k = in_offsets[w]; k < in_offsets[w + 1]; ++k)
      if (in_source[k] != w && member[in_source[k]]) b += in_weight[k];
    return b;
  }
};

// b1/f1 < b2/f2 exactly.
bool less_ratio(std::uint64_t b1, std::uint64_t f1, std::uint64_t b2, std::uint64_t f2) {
  return static_cast<u128>(b1) * f2 < static_cast<u128>(b2) * f1;
}

struct BranchResult {
  std::vector<std::uint32_t> best;
  std::uint64_t best_b = 0;
  // Per size: weighted boundary of the minimizer, or max for none.
  std::vector<std::uint64_t> min_b;
  std::uint64_t visited = 0;
};

class ConnectedEnumerator {
 public:
  ConnectedEnumerator(const SearchGraph& g, int max_size, std::atomic<std::uint64_t>& total,
                      std::uint64_t max_sets)
      : g_(g),
        max_size_(static_cast<std::size_t>(max_size)),
        total_(total),
        max_sets_(max_sets),
        member_(g.ball->size(), 0),
        closed_(g.ball->size(), 0) {
    result_.min_b.assign(max_size_, std::numeric_limits<std::uint64_t>::max());
  }

  void push(std::uint32_t w) {
    b_ = g_.boundary_after_add(b_, w, member_);
    member_[w] = 1;
    sub_.push_back(w);
    ++closed_[w];
    for (auto u : g_.neighbors(w)) ++closed_[u];
  }

  void pop() {
    const auto w = sub_.back();
    sub_.pop_back();
    --closed_[w];
    for (auto u : g_.neighbors(w)) --closed_[u];
    b_ = g_.boundary_after_remove(b_, w, member_);
    member_[w] = 0;
  }

  void visit() {
    ++result_.visited;
    if (total_.fetch_add(1, std::memory_order_relaxed) >= max_sets_)
      throw BudgetError("exhaustive search exceeded " + std::to_string(max_sets_) +
                        " sets");
    const std::size_t n = sub_.size();
    auto& slot = result_.min_b[n - 1];
    if (slot == std::numeric_limits<std::uint64_t>::max() || b_ < slot) slot = b_;
    if (result_.best.empty() || less_ratio(b_, n, result_.best_b, result_.best.size())) {
      result_.best = sub_;
      result_.best_b = b_;
    }
  }

  // Wernicke's ESU extension step restricted to sets containing the root:
  // every connected superset of the current set is produced exactly once.
  void extend(std::vector<std::uint32_t> ext) {
    visit();
    if (sub_.size() == max_size_) return;
    while (!ext.empty()) {
      const auto w = ext.back();
      ext.pop_back();
      std::vector<std::uint32_t> next = ext;
      for (auto u : g_.neighbors(w))
        if (closed_[u] == 0) next.push_back(u);
      push(w);
      extend(std::move(next));
      pop();
    }
  }

  BranchResult take() { return std::move(result_); }

 private:
  const SearchGraph& g_;
  std::size_t max_size_;
  std::atomic<std::uint64_t>& total_;
  std::uint64_t max_sets_;
  std::vector<char> member_;
  std::vector<std::uint32_t> closed_;
  std::vector<std::uint32_t> sub_;
  std::uint64_t b_ = 0;
  BranchResult result_;
};

FolnerSearchResult assemble(const CayleyBall& ball, const std::vector<BranchResult>& parts,
                            std::size_t max_size, std::string mode) {
  const BranchResult* best = nullptr;
  std::vector<std::uint64_t> min_b(max_size, std::numeric_limits<std::uint64_t>::max());
  FolnerSearchResult out;
  for (const auto& p : parts) {
    out.sets_visited += p.visited;
    for (std::size_t k = 0; k < max_size; ++k) min_b[k] = std::min(min_b[k], p.min_b[k]);
    if (p.best.empty()) continue;
    if (!best || less_ratio(p.best_b, p.best.size(), best->best_b, best->best.size()))
      best = &p;
  }
  out.best = phi(ball, best->best);
  for (std::size_t k = 0; k < max_size; ++k) {
    if (min_b[k] == std::numeric_limits<std::uint64_t>::max())
      out.min_phi_by_size.push_back(std::nullopt);
    else
      out.min_phi_by_size.push_back(ratio(min_b[k], ball.multiset_size(), k + 1));
  }
  out.mode = std::move(mode);
  return out;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  long double c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / i;
  return c > 1.8e19L ? std::numeric_limits<std::uint64_t>::max()
                     : static_cast<std::uint64_t>(std::llround(c));
}

// All subsets of the ball containing the center, connected or not.
FolnerSearchResult all_subsets(const CayleyBall& ball, const SearchGraph& g,
                               const ExhaustiveOptions& opts) {
  const std::size_t n = ball.size();
  const std::size_t max_size = static_cast<std::size_t>(opts.max_size);
  std::uint64_t expected = 0;
  for (std::size_t k = 1; k <= max_size; ++k) {
    const auto c = binomial_saturating(n - 1, k - 1);
    expected = c > opts.max_sets - std::min(expected, opts.max_sets) ? opts.max_sets + 1
                                                                      : expected + c;
  }
  if (expected > opts.max_sets)
    throw BudgetError("unrestricted subset enumeration would visit more than " +
                      std::to_string(opts.max_sets) + " sets");

  BranchResult r;
  r.min_b.assign(max_size, std::numeric_limits<std::uint64_t>::max());
  std::vector<char> member(n, 0);
  std::vector<std::uint32_t> sub;
  std::uint64_t b = 0;
  auto visit = [&] {
    ++r.visited;
    auto& slot = r.min_b[sub.size() - 1];
    slot = std::min(slot, b);
    if (r.best.empty() || less_ratio(b, sub.size(), r.best_b, r.best.size())) {
      r.best = sub;
      r.best_b = b;
    }
  };
  auto recurse = [&](auto&& self, std::uint32_t from) -> void {
    visit();
    if (sub.size() == max_size) return;
    for (std::uint32_t v = from; v < n; ++v) {
      b = g.boundary_after_add(b, v, member);
      member[v] = 1;
      sub.push_back(v);
      self(self, v + 1);
      sub.pop_back();
      b = g.boundary_after_remove(b, v, member);
      member[v] = 0;
    }
  };
  b = g.boundary_after_add(0, 0, member);
  member[0] = 1;
  sub.push_back(0);
  recurse(recurse, 1);
  return assemble(ball, {r}, max_size, "exhaustive-all-subsets");
}

}  // namespace

FolnerSearchResult folner_search_exhaustive(const CayleyBall& ball, ExhaustiveOptions opts) {
  if (opts.max_size < 1) throw ArgumentError("exhaustive search needs max_size >= 1");
  if (opts.max_size > opts.size_cap)
    throw ArgumentError("max_size " + std::to_string(opts.max_size) + " exceeds the cap " +
                        std::to_string(opts.size_cap));
  if (ball.radius() < opts.max_size - 1)
    throw RangeError("a ball of radius " + std::to_string(ball.radius()) +
                     " cannot hold every connected set of size " +
                     std::to_string(opts.max_size) + " through its center");
  const SearchGraph g(ball);
  if (opts.include_disconnected) return all_subsets(ball, g, opts);

  std::atomic<std::uint64_t> total{0};
  // The root alone, then one independent branch per first extension vertex,
  // in the order the sequential recursion would take them.
  const auto roots = g.neighbors(0);
  const std::vector<std::uint32_t> first(roots.begin(), roots.end());
  std::vector<BranchResult> parts(first.size() + 1);
  {
    ConnectedEnumerator e(g, opts.max_size, total, opts.max_sets);
    e.push(0);
    e.visit();
    parts[0] = e.take();
  }
  if (opts.max_size > 1) {
    detail::run_parallel(first.size(), opts.threads, [&](std::size_t j) {
      const std::size_t k = first.size() - 1 - j;
      std::vector<std::uint32_t> ext(first.begin(), first.begin() + k);
      ConnectedEnumerator e(g, opts.max_size, total, opts.max_sets);
      e.push(0);
      const auto w = first[k];
      std::vector<std::uint32_t> next = ext;
      // Same closed-neighbourhood test as the recursion, evaluated before w
      // joins the set.
      std::vector<char> near(ball.size(), 0);
      near[0] = 1;
      for (auto u : g.neighbors(0)) near[u] = 1;
      for (auto u : g.neighbors(w))
        if (!near[u]) next.push_back(u);
      e.push(w);
      e.extend(std::move(next));
      parts[j + 1] = e.take();
    });
  }
  for (auto& p : parts)
    if (p.min_b.empty())
      p.min_b.assign(opts.max_size, std::numeric_limits<std::uint64_t>::max());
  return assemble(ball, parts, static_cast<std::size_t>(opts.max_size),
                  "exhaustive-connected");
}

namespace {

// A vertex set with its inner boundary (members with an edge leaving the
// set) and outer boundary (non-members adjacent to it), kept as indexable
// pools so proposals can draw from them uniformly.
class AnnealState {
 public:
  AnnealState(const SearchGraph& g, const BallGraph& ball)
      : g_(g),
        member_(ball.size(), 0),
        inside_(ball.size(), 0),
        leaks_(ball.size(), 0),
        members_(ball.size()),
        inner_(ball.size()),
        outer_(ball.size()) {
    for (std::uint32_t v = 0; v < ball.size(); ++v)
      for (auto t : ball.slots(v))
        if (t == BallGraph::kOutside) leaks_[v] = 1;
  }

  const std::vector<char>& membership() const { return member_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<std::uint32_t>& items() const { return members_.items; }
  const std::vector<std::uint32_t>& inner() const { return inner_.items; }
  const std::vector<std::uint32_t>& outer() const { return outer_.items; }

  void add(std::uint32_t v) {
    member_[v] = 1;
    members_.insert(v);
    for (auto u : g_.neighbors(v)) ++inside_[u];
    refresh(v);
    for (auto u : g_.neighbors(v)) refresh(u);
  }
  void remove(std::uint32_t v) {
    member_[v] = 0;
    members_.erase(v);
    for (auto u : g_.neighbors(v)) --inside_[u];
    refresh(v);
    for (auto u : g_.neighbors(v)) refresh(u);
  }

 private:
  struct Pool {
    explicit Pool(std::size_t n) : position(n, kAbsent) {}
    static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> items, position;
    std::size_t size() const { return items.size(); }
    void insert(std::uint32_t v) {
      if (position[v] != kAbsent) return;
      position[v] = static_cast<std::uint32_t>(items.size());
      items.push_back(v);
    }
    void erase(std::uint32_t v) {
      const auto p = position[v];
      if (p == kAbsent) return;
      items[p] = items.back();
      position[items[p]] = p;
      items.pop_back();
      position[v] = kAbsent;
    }
  };

  void refresh(std::uint32_t v) {
    const auto degree = g_.neighbors(v).size();
    if (member_[v]) {
      outer_.erase(v);
      if (leaks_[v] || inside_[v] < degree) {
        inner_.insert(v);
      } else {
        inner_.erase(v);
      }
    } else {
      inner_.erase(v);
      if (inside_[v] > 0) {
        outer_.insert(v);
      } else {
        outer_.erase(v);
      }
    }
  }

  const SearchGraph& g_;
  std::vector<char> member_;
  std::vector<std::uint32_t> inside_;  // neighbours in the set
  std::vector<char> leaks_;            // has a slot leaving the ball
  Pool members_, inner_, outer_;
};

BranchResult anneal_chain(const SearchGraph& g, const AnnealOptions& opts,
                          std::uint64_t size, unsigned chain) {
  PhiloxStream rng(opts.seed, chain);
  AnnealState st(g, *g.ball);
  std::uint64_t b = g.boundary_after_add(0, 0, st.membership());
  st.add(0);

  BranchResult r;
  r.best = st.items();
  r.best_b = b;
  auto phi_of = [&](std::uint64_t bb, std::size_t f) {
    return static_cast<double>(bb) / (static_cast<double>(size) * static_cast<double>(f));
  };
  double temperature = opts.initial_temperature;
  for (std::uint64_t step = 0; step < opts.steps; ++step) {
    if (step > 0 && step % opts.moves_per_temperature == 0) temperature *= opts.cooling;
    ++r.visited;
    const bool grow = st.size() == 1 || rng.uniform() < 0.5;
    const auto& pool = grow ? st.outer() : st.inner();
    if (pool.empty()) continue;
    const std::uint32_t v = pool[rng.below(pool.size())];
    const std::uint64_t nb = grow ? g.boundary_after_add(b, v, st.membership())
                                  : g.boundary_after_remove(b, v, st.membership());
    const std::size_t nf = grow ? st.size() + 1 : st.size() - 1;
    const double delta = phi_of(nb, nf) - phi_of(b, st.size());
    bool accept;
    if (delta < 0) {
      accept = true;
    } else if (delta == 0) {
      accept = !grow;
    } else {
      accept = temperature > 0 && rng.uniform() < std::exp(-delta / temperature);
    }
    if (!accept) continue;
    if (grow) {
      st.add(v);
    } else {
      st.remove(v);
    }
    b = nb;
    if (less_ratio(b, st.size(), r.best_b, r.best.size()) ||
        (!less_ratio(r.best_b, r.best.size(), b, st.size()) && st.size() < r.best.size())) {
      r.best = st.items();
      r.best_b = b;
    }
  }
  std::sort(r.best.begin(), r.best.end());
  return r;
}

}  // namespace

FolnerSearchResult folner_search_anneal(const CayleyBall& ball, AnnealOptions opts) {
  if (opts.steps == 0) throw ArgumentError("annealing needs at least one step");
  if (opts.chains == 0) throw ArgumentError("annealing needs at least one chain");
  if (opts.moves_per_temperature == 0)
    throw ArgumentError("annealing needs at least one move per temperature");
  if (!(opts.initial_temperature >= 0) || !(opts.cooling > 0 && opts.cooling <= 1))
    throw ArgumentError("temperature schedule must have T0 >= 0 and 0 < factor <= 1");
  const SearchGraph g(ball);
  std::vector<BranchResult> parts(opts.chains);
  detail::run_parallel(opts.chains, opts.threads, [&](std::size_t c) {
    parts[c] = anneal_chain(g, opts, ball.multiset_size(), static_cast<unsigned>(c));
  });
  const BranchResult* best = &parts[0];
  std::uint64_t visited = 0;
  for (const auto& p : parts) {
    visited += p.visited;
    if (less_ratio(p.best_b, p.best.size(), best->best_b, best->best.size())) best = &p;
  }
  FolnerSearchResult out;
  out.best = phi(ball, best->best);
  out.sets_visited = visited;
  out.mode = "anneal";
  return out;
}

const char* to_string(HLowerSource s) {
  switch (s) {
    case HLowerSource::none: return "none";
    case HLowerSource::mohar_from_exact_rho: return "mohar-from-exact-rho";
    case HLowerSource::mohar_from_rho_upper: return "mohar-from-rho-upper";
  }
  return "none";
}

const char* to_string(HUpperSource s) {
  switch (s) {
    case HUpperSource::none: return "none";
    case HUpperSource::candidate_set: return "candidate-set";
    case HUpperSource::mohar_from_rho_lower: return "mohar-from-rho-lower";
  }
  return "none";
}

namespace {

void require_unit(std::optional<double> x, const char* what) {
  if (x && !(*x >= 0.0 && *x <= 1.0))
    throw ArgumentError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

HBounds mohar_bounds(std::optional<double> rho_lower, std::optional<double> rho_upper,
                     std::uint64_t multiset_size, bool rho_upper_is_exact) {
  require_unit(rho_lower, "rho lower bound");
  require_unit(rho_upper, "rho upper bound");
  if (multiset_size == 0) throw ArgumentError("multiset size must be positive");
  HBounds h;
  h.rho_lower = rho_lower;
  h.rho_upper = rho_upper;
  h.multiset_size = multiset_size;
  if (rho_lower) {
    h.upper = std::sqrt(1.0 - *rho_lower * *rho_lower);
    h.upper_source = HUpperSource::mohar_from_rho_lower;
  }
  if (rho_upper) {
    if (multiset_size == 1)
      throw RangeError("the lower Mohar bound divides by |S| - 1 = 0");
    const double n = static_cast<double>(multiset_size);
    h.lower = std::min(1.0, (1.0 - *rho_upper) * n / (n - 1.0));
    h.lower_source = rho_upper_is_exact ? HLowerSource::mohar_from_exact_rho
                                        : HLowerSource::mohar_from_rho_upper;
  }
  return h;
}

void add_candidate(HBounds& bounds, const FolnerCandidate& f) {
  const double v = to_double(f.phi);
  if (!bounds.candidate_phi || f.phi < *bounds.candidate_phi) bounds.candidate_phi = f.phi;
  if (!bounds.upper || v < *bounds.upper) {
    bounds.upper = v;
    bounds.upper_source = HUpperSource::candidate_set;
  }
}

CriterionResult criterion_check(double h_lower, HLowerSource source) {
  CriterionResult r;
  r.input_certified = source != HLowerSource::none;
  r.margin = h_lower - kCriterionThreshold;
  r.certified = r.input_certified && h_lower > kCriterionThreshold;
  return r;
}

WitnessSearchResult witness_power_search(std::uint64_t s0_size, double rho_exact,
                                         int n_max, bool rho_is_exact) {
  if (n_max < 1) throw ArgumentError("witness search needs n_max >= 1");
  require_unit(rho_exact, "rho");
  if (s0_size < 2) throw RangeError("the lower Mohar bound needs |S0| >= 2");
  WitnessSearchResult out;
  for (int n = 1; n <= n_max; ++n) {
    WitnessStep step;
    step.n = n;
    step.rho_power = std::pow(rho_exact, n);
    const long double size = std::pow(static_cast<long double>(s0_size), n);
    step.multiset_size = static_cast<double>(size);
    auto& b = step.bounds;
    b.rho_upper = step.rho_power;
    b.multiset_size = size > 1.8e19L ? std::numeric_limits<std::uint64_t>::max()
                                     : static_cast<std::uint64_t>(size);
    b.lower = static_cast<double>(
        std::min(1.0L, (1.0L - step.rho_power) * size / (size - 1.0L)));
    b.lower_source =
        rho_is_exact ? HLowerSource::mohar_from_exact_rho : HLowerSource::mohar_from_rho_upper;
    if (rho_is_exact) {
      b.rho_lower = step.rho_power;
      b.upper = std::sqrt(1.0 - step.rho_power * step.rho_power);
      b.upper_source = HUpperSource::mohar_from_rho_lower;
    }
    out.trail.push_back(step);
    if (criterion_check(*b.lower, b.lower_source).certified) {
      out.n = n;
      break;
    }
  }
  return out;
}

}  // namespace percolab
