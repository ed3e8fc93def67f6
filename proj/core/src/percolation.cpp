#include "percolab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

#include "parallel.hpp"
#include "percolab/errors.hpp"
#include "percolab/rng.hpp"

namespace percolab {

PercolationGraph::PercolationGraph(const BallGraph& ball, std::optional<int> boundary_radius)
    : num_vertices_(ball.size()) {
  if (!ball.symmetric())
    throw ArgumentError(
        "percolation needs a ball over a symmetric multiset (use symmetric_closure)");
  boundary_radius_ = boundary_radius.value_or(ball.radius());
  if (boundary_radius_ < 0 || boundary_radius_ > ball.radius())
    throw RangeError("boundary radius " + std::to_string(boundary_radius_) +
                     " outside [0, " + std::to_string(ball.radius()) + "]");

  const std::size_t m = ball.num_entries();
  std::vector<std::uint32_t> degree(num_vertices_ + 1, 0);
  for (std::uint32_t v = 0; v < num_vertices_; ++v) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto t = ball.neighbor(v, i);
      if (t == BallGraph::kOutside) continue;
      const std::size_t j = ball.partner(i);
      if (v < t || (v == t && i <= j)) {
        edge_u_.push_back(v);
        edge_v_.push_back(t);
        edge_key_.push_back(static_cast<std::uint64_t>(v) * m + i);
        ++degree[v + 1];
        if (t != v) ++degree[t + 1];
      }
    }
  }
  std::partial_sum(degree.begin(), degree.end(), degree.begin());
  incident_offsets_ = degree;
  incident_.resize(incident_offsets_.back());
  std::vector<std::uint32_t> fill(incident_offsets_.begin(), incident_offsets_.end() - 1);
  for (std::uint32_t e = 0; e < edge_u_.size(); ++e) {
    incident_[fill[edge_u_[e]]++] = e;
    if (edge_v_[e] != edge_u_[e]) incident_[fill[edge_v_[e]]++] = e;
  }

  boundary_.assign(num_vertices_, 0);
  for (std::uint32_t v = 0; v < num_vertices_; ++v) {
    if (ball.distance(v) == boundary_radius_) {
      boundary_[v] = 1;
      ++boundary_count_;
    }
  }
}

bool edge_open(const PercolationGraph& g, std::size_t e, double p, std::uint64_t seed,
               std::uint64_t sample) {
  return edge_variate(seed, sample, g.edge_key(e)) < p;
}

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("p must lie in [0, 1]");
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
  std::vector<std::uint32_t> parent, size;
};

}  // namespace

ClusterStats percolate_once(const PercolationGraph& g, double p, std::uint64_t seed,
                            std::uint64_t sample) {
  check_p(p);
  const std::size_t n = g.num_vertices();
  UnionFind uf(n);
  ClusterStats stats;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!edge_open(g, e, p, seed, sample)) continue;
    ++stats.open_edges;
    uf.unite(g.edge_u(e), g.edge_v(e));
  }
  std::vector<char> seen(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto r = uf.find(v);
    if (r == v) stats.cluster_sizes.push_back(uf.size[r]);
    if (g.on_boundary(v) && !seen[r]) {
      seen[r] = 1;
      ++stats.boundary_clusters;
    }
  }
  std::sort(stats.cluster_sizes.begin(), stats.cluster_sizes.end(), std::greater<>());
  stats.root_reaches_boundary = n > 0 && seen[uf.find(0)];
  return stats;
}

std::vector<bool> open_edge_set(const PercolationGraph& g, double p, std::uint64_t seed,
                                std::uint64_t sample) {
  check_p(p);
  std::vector<bool> open(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) open[e] = edge_open(g, e, p, seed, sample);
  return open;
}

bool root_reaches_boundary(const PercolationGraph& g, double p, std::uint64_t seed,
                           std::uint64_t sample) {
  check_p(p);
  if (g.num_vertices() == 0) return false;
  if (g.on_boundary(0)) return true;
  std::vector<char> visited(g.num_vertices(), 0);
  std::vector<std::uint32_t> stack{0};
  visited[0] = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto e : g.incident(v)) {
      const auto w = g.other_end(e, v);
      if (visited[w] || !edge_open(g, e, p, seed, sample)) continue;
      if (g.on_boundary(w)) return true;
      visited[w] = 1;
      stack.push_back(w);
    }
  }
  return false;
}

double reach_threshold(const PercolationGraph& g, std::uint64_t seed, std::uint64_t sample) {
  constexpr double kNever = std::numeric_limits<double>::infinity();
  if (g.num_vertices() == 0) return kNever;
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::vector<char> done(g.num_vertices(), 0);
  queue.emplace(0.0, 0);
  while (!queue.empty()) {
    const auto [level, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    if (g.on_boundary(v)) return level;
    done[v] = 1;
    for (auto e : g.incident(v)) {
      const auto w = g.other_end(e, v);
      if (done[w]) continue;
      queue.emplace(std::max(level, edge_variate(seed, sample, g.edge_key(e))), w);
    }
  }
  return kNever;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) throw ArgumentError("Wilson interval of zero samples");
  if (successes > n) throw ArgumentError("more successes than samples");
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  // Keep the point estimate inside despite rounding at 0 and 1.
  ci.lo = std::min(ci.lo, phat);
  ci.hi = std::max(ci.hi, phat);
  return ci;
}

double score_sigma(double theta, std::uint64_t n) {
  if (n == 0) throw ArgumentError("score sigma of zero samples");
  return std::sqrt(theta * (1.0 - theta) / static_cast<double>(n));
}

ThetaPoint theta_hat(const PercolationGraph& g, double p, const SamplingOptions& opts) {
  check_p(p);
  if (opts.samples == 0) throw ArgumentError("need at least one sample");
  std::vector<char> reach(opts.samples, 0);
  std::vector<std::uint32_t> clusters(opts.census ? opts.samples : 0, 0);
  detail::run_parallel(opts.samples, opts.threads, [&](std::size_t k) {
    if (opts.census) {
      const auto stats = percolate_once(g, p, opts.seed, k);
      reach[k] = stats.root_reaches_boundary;
      clusters[k] = stats.boundary_clusters;
    } else {
      reach[k] = root_reaches_boundary(g, p, opts.seed, k);
    }
  });
  ThetaPoint pt;
  pt.p = p;
  pt.samples = opts.samples;
  pt.successes = static_cast<std::uint64_t>(std::count(reach.begin(), reach.end(), 1));
  pt.theta = static_cast<double>(pt.successes) / static_cast<double>(pt.samples);
  pt.ci = wilson_interval(pt.successes, pt.samples);
  if (opts.census) {
    std::uint64_t total = 0;
    for (auto c : clusters) total += c;
    pt.boundary_clusters_mean = static_cast<double>(total) / static_cast<double>(opts.samples);
  }
  return pt;
}

std::vector<ThetaPoint> theta_curve(const PercolationGraph& g, const std::vector<double>& ps,
                                    const SamplingOptions& opts) {
  std::vector<ThetaPoint> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(theta_hat(g, p, opts));
  return out;
}

std::vector<double> reach_thresholds(const PercolationGraph& g,
                                     const SamplingOptions& sampling) {
  if (sampling.samples == 0) throw ArgumentError("need at least one sample");
  std::vector<double> t(sampling.samples);
  detail::run_parallel(sampling.samples, sampling.threads, [&](std::size_t k) {
    t[k] = reach_threshold(g, sampling.seed, k);
  });
  return t;
}

PcEstimate pc_from_thresholds(std::vector<double> thresholds, PcOptions opts) {
  if (!(opts.tau > 0.0 && opts.tau < 1.0)) throw ArgumentError("tau must lie in (0, 1)");
  if (thresholds.empty()) throw ArgumentError("need at least one sample");
  std::sort(thresholds.begin(), thresholds.end());
  const std::uint64_t n = thresholds.size();
  // Samples whose root reaches the boundary at p.
  auto successes = [&](double p) {
    return static_cast<std::uint64_t>(
        std::lower_bound(thresholds.begin(), thresholds.end(), p) - thresholds.begin());
  };
  auto theta = [&](double p) {
    return static_cast<double>(successes(p)) / static_cast<double>(n);
  };

  PcEstimate est;
  est.tau = opts.tau;
  est.samples = n;
  std::vector<std::pair<double, double>> evaluated;
  auto bisect = [&](auto above, bool record) {
    // Smallest p in [0, 1] with above(p), assuming above is monotone.
    double lo = 0.0, hi = 1.0;
    if (!above(hi)) return 1.0;
    int it = 0;
    while (hi - lo > opts.tolerance && it < opts.max_iterations) {
      const double mid = 0.5 * (lo + hi);
      if (record) evaluated.emplace_back(mid, theta(mid));
      (above(mid) ? hi : lo) = mid;
      ++it;
    }
    if (record) est.iterations = it;
    return hi;
  };
  est.p = bisect([&](double p) { return theta(p) >= opts.tau; }, true);
  std::sort(evaluated.begin(), evaluated.end());
  for (std::size_t i = 1; i < evaluated.size(); ++i)
    if (evaluated[i].second < evaluated[i - 1].second)
      throw InvariantViolation("theta_hat decreased in p under coupled sampling");
  est.ci.lo = bisect(
      [&](double p) { return wilson_interval(successes(p), n).hi >= opts.tau; }, false);
  est.ci.hi = bisect(
      [&](double p) { return wilson_interval(successes(p), n).lo > opts.tau; }, false);
  est.ci.lo = std::min(est.ci.lo, est.p);
  est.ci.hi = std::max(est.ci.hi, est.p);
  return est;
}

PcEstimate pc_estimate(const PercolationGraph& g, const SamplingOptions& sampling,
                       PcOptions opts) {
  if (!(opts.tau > 0.0 && opts.tau < 1.0)) throw ArgumentError("tau must lie in (0, 1)");
  return pc_from_thresholds(reach_thresholds(g, sampling), opts);
}

namespace {

void check_tree(int b, int d, int radius) {
  if (b < 1 || d < 1 || radius < 1)
    throw ArgumentError("tree oracle needs b >= 1, d >= 1, R >= 1");
}

}  // namespace

double tree_theta_oracle(int b, int d, double p, int radius) {
  check_tree(b, d, radius);
  check_p(p);
  double u = 1.0 - p;
  for (int r = 1; r < radius; ++r) u = 1.0 - p * (1.0 - std::pow(u, b));
  return 1.0 - std::pow(u, d);
}

Rational tree_theta_oracle_exact(int b, int d, const Rational& p, int radius) {
  check_tree(b, d, radius);
  if (p < 0 || p > 1) throw ArgumentError("p must lie in [0, 1]");
  auto power = [](const Rational& x, int k) {
    Rational y = 1;
    for (int i = 0; i < k; ++i) y *= x;
    return y;
  };
  Rational u = 1 - p;
  for (int r = 1; r < radius; ++r) u = 1 - p * (1 - power(u, b));
  return 1 - power(u, d);
}

double tree_theta_crossing(int b, int d, int radius, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("tau must lie in (0, 1)");
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (tree_theta_oracle(b, d, mid, radius) < tau ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

UniquenessProbe uniqueness_probe(const PercolationGraph& g, double p,
                                 const SamplingOptions& sampling) {
  check_p(p);
  if (sampling.samples == 0) throw ArgumentError("need at least one sample");
  std::vector<std::uint32_t> counts(sampling.samples);
  detail::run_parallel(sampling.samples, sampling.threads, [&](std::size_t k) {
    counts[k] = percolate_once(g, p, sampling.seed, k).boundary_clusters;
  });
  UniquenessProbe probe;
  probe.p = p;
  probe.samples = sampling.samples;
  std::uint64_t total = 0;
  for (auto c : counts) {
    ++probe.histogram[c];
    total += c;
  }
  probe.mean = static_cast<double>(total) / static_cast<double>(sampling.samples);
  return probe;
}

PcBound bs_pc_bound(double multiset_size, double h, HKind kind) {
  if (!(multiset_size >= 1.0)) throw ArgumentError("multiset size must be at least 1");
  if (!(h >= 0.0)) throw ArgumentError("h must be non-negative");
  if (kind == HKind::upper_bound)
    throw MethodNotApplicable(
        "an upper bound on h gives no bound on p_c; supply an exact value or a lower bound");
  PcBound b;
  b.value = 1.0 / (multiset_size * h + 1.0);
  b.provenance = Provenance::certified_bound;
  b.note = kind == HKind::exact ? "p_c <= 1/(|S| h + 1) with exact h"
                                : "p_c <= 1/(|S| h + 1) with a lower bound on h";
  return b;
}

UniquenessReport bs_uniqueness_report(std::optional<CertifiedValue> rho_upper,
                                      std::optional<CertifiedValue> pc_upper,
                                      double multiset_size) {
  UniquenessReport r;
  r.multiset_size = multiset_size;
  if (rho_upper) r.rho_upper = rho_upper->value;
  if (pc_upper) r.pc_upper = pc_upper->value;
  if (rho_upper && pc_upper) r.product = rho_upper->value * pc_upper->value * multiset_size;
  if (!rho_upper || !is_certified(rho_upper->provenance)) {
    r.reason = "no certified upper bound on rho";
  } else if (!pc_upper || !is_certified(pc_upper->provenance)) {
    r.reason = "no certified upper bound on p_c";
  } else if (*r.product < 1.0) {
    r.certified = true;
    r.reason = "rho p_c |S| < 1";
  } else {
    r.reason = "rho p_c |S| >= 1";
  }
  return r;
}

void write_theta_csv(std::ostream& os, const std::vector<ThetaPoint>& curve) {
  os << "p,theta_hat,ci_lo,ci_hi,n_samples,boundary_clusters_mean\n";
  char buf[160];
  for (const auto& pt : curve) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%llu,", pt.p, pt.theta, pt.ci.lo,
                  pt.ci.hi, static_cast<unsigned long long>(pt.samples));
    os << buf;
    if (pt.boundary_clusters_mean) {
      std::snprintf(buf, sizeof buf, "%.17g", *pt.boundary_clusters_mean);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace percolab
