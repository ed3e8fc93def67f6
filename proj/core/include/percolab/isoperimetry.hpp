#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percolab/cayley.hpp"
#include "percolab/group.hpp"
#include "percolab/multiset.hpp"
#include "percolab/provenance.hpp"
#include "percolab/rational.hpp"

namespace percolab {

// A finite set F with its boundary data against a multiset S:
//   phi     = sum_s mult(s) |sF \ F| / (|S| |F|)
//   overlap = sum_s mult(s) |sF n F| / (|S| |F|)
// |S| is the nominal size, so collapsed powers are handled verbatim.
struct FolnerCandidate {
  std::vector<GroupElement> elements;
  // Indexed like S.entries(); counts are not weighted by multiplicity.
  std::vector<std::uint64_t> boundary_counts;
  std::vector<std::uint64_t> overlap_counts;
  Rational phi;
  Rational overlap;
  // The multiset the numbers were computed against.
  GeneratorMultiset multiset;

  std::size_t size() const { return elements.size(); }
};

// Exact Phi(F). Duplicate elements in F are ignored. Throws ArgumentError on
// an empty F and ContextMismatch for foreign elements.
FolnerCandidate phi(const GroupContext& ctx, const GeneratorMultiset& s,
                    const std::vector<GroupElement>& f);

// Same quantity for a set of ball vertices, using the ball's slots (a slot
// pointing outside the ball is a boundary slot, so the value is exact
// wherever F sits in the ball).
FolnerCandidate phi(const CayleyBall& ball, const std::vector<std::uint32_t>& vertices);

struct ExhaustiveOptions {
  int max_size = 8;
  // Hard cap on max_size.
  int size_cap = 9;
  // Also enumerate disconnected subsets of the ball (small sizes only).
  bool include_disconnected = false;
  // Upper bound on the number of sets visited.
  std::uint64_t max_sets = 200'000'000;
  unsigned threads = 1;
};

struct AnnealOptions {
  std::uint64_t steps = 100'000;
  std::uint64_t seed = 1;
  double initial_temperature = 0.5;
  double cooling = 0.995;
  // Moves attempted at each temperature before cooling by `cooling`.
  std::uint64_t moves_per_temperature = 1;
  unsigned chains = 1;
  unsigned threads = 1;
};

struct FolnerSearchResult {
  FolnerCandidate best;
  // Exhaustive mode: minimum phi over the explored sets of size n at index
  // n - 1 (nullopt where no set of that size exists).
  std::vector<std::optional<Rational>> min_phi_by_size;
  std::uint64_t sets_visited = 0;
  std::string mode;
};

// Minimizes phi over connected sets of ball vertices containing the center.
// Right translation F -> Fg preserves phi and connectivity, so this covers
// every connected set of size <= max_size in the group. Requires
// radius >= max_size - 1 (RangeError otherwise). Deterministic for any
// thread count; ties keep the first set in enumeration order.
FolnerSearchResult folner_search_exhaustive(const CayleyBall& ball, ExhaustiveOptions opts);

// Simulated annealing on vertex sets: each step proposes, with equal odds,
// adding a uniformly chosen vertex of the outer boundary of F or removing one
// of its inner boundary (a member with an edge leaving F), with Metropolis acceptance
// on phi (as a double) under a geometric temperature schedule. Equal-phi
// moves are accepted only when they shrink F. The best set seen is reported
// with its exact phi.
FolnerSearchResult folner_search_anneal(const CayleyBall& ball, AnnealOptions opts);

// Bounds on h(Gamma, S) with their provenance.
enum class HLowerSource { none, mohar_from_exact_rho, mohar_from_rho_upper };
enum class HUpperSource { none, candidate_set, mohar_from_rho_lower };

const char* to_string(HLowerSource s);
const char* to_string(HUpperSource s);

struct HBounds {
  std::optional<double> lower;
  HLowerSource lower_source = HLowerSource::none;
  std::optional<double> upper;
  HUpperSource upper_source = HUpperSource::none;
  // Inputs that produced the numbers.
  std::optional<double> rho_lower;
  std::optional<double> rho_upper;
  std::uint64_t multiset_size = 0;
  // Exact upper bound from a concrete set, when one was supplied.
  std::optional<Rational> candidate_phi;

  bool has_certified_lower() const { return lower_source != HLowerSource::none; }
};

// h <= sqrt(1 - rho_lower^2) and h >= (1 - rho_upper) |S| / (|S| - 1),
// the latter clamped to 1. `rho_upper_is_exact` only changes the recorded
// provenance. Throws ArgumentError for inputs outside [0, 1] or size 0, and
// RangeError when a lower bound is requested with |S| = 1.
HBounds mohar_bounds(std::optional<double> rho_lower, std::optional<double> rho_upper,
                     std::uint64_t multiset_size, bool rho_upper_is_exact = false);

// Folds a concrete set into the bounds: upper becomes min(upper, phi(F)).
void add_candidate(HBounds& bounds, const FolnerCandidate& f);

inline constexpr double kCriterionThreshold = 0.70710678118654752440;  // sqrt(1/2)

struct CriterionResult {
  bool certified = false;
  // False when the input had no certified provenance; `certified` is then
  // false as well and `margin` is still filled in for reporting.
  bool input_certified = false;
  double margin = 0.0;
};

// h_lower > sqrt(1/2), strictly.
CriterionResult criterion_check(double h_lower, HLowerSource source);

struct WitnessStep {
  int n = 0;
  double rho_power = 0.0;
  // |S0|^n as a double (exact up to 2^53).
  double multiset_size = 0.0;
  HBounds bounds;
};

struct WitnessSearchResult {
  std::optional<int> n;
  std::vector<WitnessStep> trail;
};

// Smallest n <= n_max with (1 - rho^n) |S0|^n / (|S0|^n - 1) > sqrt(1/2),
// using rho(S0^n) = rho(S0)^n for symmetric S0. Throws ArgumentError for
// n_max < 1 or rho outside [0, 1].
WitnessSearchResult witness_power_search(std::uint64_t s0_size, double rho_exact,
                                         int n_max, bool rho_is_exact = true);

}  // namespace percolab
