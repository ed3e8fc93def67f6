#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "percolab/cayley.hpp"
#include "percolab/provenance.hpp"
#include "percolab/rational.hpp"

namespace percolab {

// Undirected edge set of a ball over a symmetric multiset. Each pair of
// mutually inverse slots is one edge; parallel edges stay distinct. Edges
// leaving the ball are dropped.
class PercolationGraph {
 public:
  // Throws ArgumentError unless the ball carries an inverse pairing (build
  // it over symmetric_closure(S)). boundary_radius defaults to the ball
  // radius and must not exceed it (RangeError).
  explicit PercolationGraph(const BallGraph& ball,
                            std::optional<int> boundary_radius = std::nullopt);

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edge_u_.size(); }
  std::uint32_t edge_u(std::size_t e) const { return edge_u_[e]; }
  std::uint32_t edge_v(std::size_t e) const { return edge_v_[e]; }
  // Stable edge key (the representative slot index); keys the edge variate.
  std::uint64_t edge_key(std::size_t e) const { return edge_key_[e]; }
  int boundary_radius() const { return boundary_radius_; }
  bool on_boundary(std::uint32_t v) const { return boundary_[v] != 0; }
  std::size_t boundary_size() const { return boundary_count_; }

  // Incident edges of v (loops listed once).
  std::span<const std::uint32_t> incident(std::uint32_t v) const {
    return {incident_.data() + incident_offsets_[v],
            incident_offsets_[v + 1] - incident_offsets_[v]};
  }
  std::uint32_t other_end(std::size_t e, std::uint32_t v) const {
    return edge_u_[e] == v ? edge_v_[e] : edge_u_[e];
  }

 private:
  std::size_t num_vertices_ = 0;
  int boundary_radius_ = 0;
  std::size_t boundary_count_ = 0;
  std::vector<std::uint32_t> edge_u_, edge_v_;
  std::vector<std::uint64_t> edge_key_;
  std::vector<char> boundary_;
  std::vector<std::uint32_t> incident_offsets_, incident_;
};

// Edge e is open in sample k at parameter p iff edge_variate(seed, k,
// key(e)) < p. One variate per edge and sample, shared across p.
bool edge_open(const PercolationGraph& g, std::size_t e, double p, std::uint64_t seed,
               std::uint64_t sample);

struct ClusterStats {
  bool root_reaches_boundary = false;
  // Sizes of all clusters, largest first.
  std::vector<std::uint32_t> cluster_sizes;
  // Distinct clusters containing a boundary vertex.
  std::uint32_t boundary_clusters = 0;
  std::uint64_t open_edges = 0;
};

// Full union-find census of one sample. Root = vertex 0 (the ball center).
ClusterStats percolate_once(const PercolationGraph& g, double p, std::uint64_t seed,
                            std::uint64_t sample);

// Open-edge indicator of one sample, for coupling checks.
std::vector<bool> open_edge_set(const PercolationGraph& g, double p, std::uint64_t seed,
                                std::uint64_t sample);

// Root-to-boundary connection for one sample by depth-first search over open
// edges, stopping at the first boundary vertex. Same answer as the census,
// far cheaper below criticality.
bool root_reaches_boundary(const PercolationGraph& g, double p, std::uint64_t seed,
                           std::uint64_t sample);

// Smallest p at which the root reaches the boundary in this sample: the
// minimax edge variate over root-boundary paths. The root reaches the
// boundary at p iff threshold < p.
double reach_threshold(const PercolationGraph& g, std::uint64_t seed, std::uint64_t sample);

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for `successes` out of n at the given z.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = kWilsonZ95);
// sqrt(theta (1 - theta) / n): the score-test standard deviation under a
// hypothesized theta.
double score_sigma(double theta, std::uint64_t n);

struct ThetaPoint {
  double p = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t samples = 0;
  double theta = 0.0;
  Interval ci;
  // Mean number of boundary clusters, present when a census was requested.
  std::optional<double> boundary_clusters_mean;
};

struct SamplingOptions {
  std::uint64_t samples = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Run the full union-find census per sample (fills boundary cluster means).
  bool census = false;
};

ThetaPoint theta_hat(const PercolationGraph& g, double p, const SamplingOptions& opts);

std::vector<ThetaPoint> theta_curve(const PercolationGraph& g, const std::vector<double>& ps,
                                    const SamplingOptions& opts);

struct PcEstimate {
  double p = 0.0;
  // Set of p at which tau lies inside the Wilson interval of theta_hat(p).
  Interval ci;
  double tau = 0.05;
  std::uint64_t samples = 0;
  int iterations = 0;
  std::string method = "coupled-bisection";
  Provenance provenance = Provenance::monte_carlo_ci;
};

struct PcOptions {
  double tau = 0.05;
  double tolerance = 1e-9;
  int max_iterations = 100;
};

// Bisection for theta_hat(p) = tau on coupled samples. theta_hat(p) is the
// fraction of per-sample reach thresholds below p, so it is monotone by
// construction; a violation raises InvariantViolation. Throws ArgumentError
// unless 0 < tau < 1.
PcEstimate pc_estimate(const PercolationGraph& g, const SamplingOptions& sampling,
                       PcOptions opts = {});

// Same crossing, from thresholds already computed.
PcEstimate pc_from_thresholds(std::vector<double> thresholds, PcOptions opts = {});

// Per-sample reach thresholds, in sample order.
std::vector<double> reach_thresholds(const PercolationGraph& g,
                                     const SamplingOptions& sampling);

// Exact survival on a tree ball where the root has d children and every
// other vertex b: u_1 = 1 - p, u_{r+1} = 1 - p (1 - u_r^b), theta = 1 - u_R^d.
// Throws ArgumentError for b < 1, d < 1, R < 1 or p outside [0, 1].
double tree_theta_oracle(int b, int d, double p, int radius);
Rational tree_theta_oracle_exact(int b, int d, const Rational& p, int radius);
// The p with tree_theta_oracle(b, d, p, R) = tau, by bisection to 1e-15.
double tree_theta_crossing(int b, int d, int radius, double tau);

struct UniquenessProbe {
  // boundary-cluster count -> number of samples
  std::map<std::uint32_t, std::uint64_t> histogram;
  double mean = 0.0;
  std::uint64_t samples = 0;
  double p = 0.0;
  std::string note =
      "clusters touching the boundary sphere; a finite-volume proxy, not an estimate of "
      "the number of infinite clusters";
};

UniquenessProbe uniqueness_probe(const PercolationGraph& g, double p,
                                 const SamplingOptions& sampling);

// How a value of h was obtained, for deciding what it can certify.
enum class HKind { exact, lower_bound, upper_bound };

struct PcBound {
  double value = 1.0;
  Provenance provenance = Provenance::certified_bound;
  std::string note;
};

// 1 / (|S| h + 1). A lower bound on h gives a valid upper bound on p_c
// because the map is decreasing; an upper bound on h certifies nothing and
// raises MethodNotApplicable. Throws ArgumentError for h < 0 or |S| < 1.
PcBound bs_pc_bound(double multiset_size, double h, HKind kind);

struct CertifiedValue {
  double value = 0.0;
  Provenance provenance = Provenance::none;
};

struct UniquenessReport {
  std::optional<double> rho_upper;
  std::optional<double> pc_upper;
  double multiset_size = 0.0;
  std::optional<double> product;
  bool certified = false;
  std::string reason;
};

// The non-uniqueness flag: rho_upper * pc_upper * |S| < 1 with both inputs
// certified (exact or certified bound). Pure arithmetic.
UniquenessReport bs_uniqueness_report(std::optional<CertifiedValue> rho_upper,
                                      std::optional<CertifiedValue> pc_upper,
                                      double multiset_size);

// `p,theta_hat,ci_lo,ci_hi,n_samples,boundary_clusters_mean` rows with
// %.17g numbers; the mean column is empty when no census was run.
void write_theta_csv(std::ostream& os, const std::vector<ThetaPoint>& curve);

}  // namespace percolab
