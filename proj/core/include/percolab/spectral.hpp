#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "percolab/cayley.hpp"
#include "percolab/group.hpp"
#include "percolab/multiset.hpp"
#include "percolab/provenance.hpp"
#include "percolab/rational.hpp"

namespace percolab {

// Finitely supported probability measure with exact rational masses.
class WalkMeasure {
 public:
  using Map = std::unordered_map<GroupElement, Rational, GroupElementHash>;

  WalkMeasure() = default;
  explicit WalkMeasure(Map masses);

  static WalkMeasure delta(const GroupElement& g);
  // The measure 1_S/|S|.
  static WalkMeasure uniform(const GeneratorMultiset& s);

  const Map& masses() const { return masses_; }
  Rational at(const GroupElement& g) const;
  Rational total_mass() const;
  std::size_t support_size() const { return masses_.size(); }

 private:
  Map masses_;
};

// (mu * nu)(x) = sum_g mu(g) nu(g^-1 x).
WalkMeasure convolve_step(const GroupContext& ctx, const WalkMeasure& mu,
                          const WalkMeasure& nu);

struct ReturnBudget {
  // Largest support the truncated exact convolution may hold.
  std::size_t max_support = 2'000'000;
};

// p_n = (1_S/|S|)^{*n}(e) for n = 1..steps, exact. Requires symmetric S
// (MethodNotApplicable otherwise). Uses the radial distance chain when S is
// a uniform multiple of the standard generators of a free group, and the
// truncated group-algebra convolution in every other case.
std::vector<Rational> return_probabilities(const GroupContext& ctx,
                                           const GeneratorMultiset& s, int steps,
                                           ReturnBudget budget = {});

// Always the truncated group-algebra convolution (no radial shortcut).
std::vector<Rational> return_probabilities_by_convolution(const GroupContext& ctx,
                                                          const GeneratorMultiset& s,
                                                          int steps,
                                                          ReturnBudget budget = {});

// Double-precision version of the truncated convolution for step counts past
// the exact budget. Results are heuristic: rounding is not controlled.
std::vector<double> return_probabilities_float(const GroupContext& ctx,
                                               const GeneratorMultiset& s, int steps,
                                               ReturnBudget budget = {});

enum class RhoMethod { returns, power_iteration };

inline const char* to_string(RhoMethod m) {
  return m == RhoMethod::returns ? "returns" : "power-iteration";
}

struct RhoEstimate {
  RhoMethod method = RhoMethod::returns;
  // For `returns`: entry k is p_{2(k+1)}^{1/(2(k+1))}. For `power_iteration`:
  // entry t is the norm ratio after t+1 applications.
  std::vector<double> lower_bounds;
  double best = 0.0;
  Provenance provenance = Provenance::certified_bound;
  std::optional<double> exact;
  std::string note;
};

// Lower bounds p_{2n}^{1/(2n)} on rho for every even index available.
RhoEstimate rho_lower_from_returns(const std::vector<Rational>& returns);

// Norm of the convolution operator compressed to the ball, by power
// iteration from the center indicator with a fixed iteration count.
// Symmetric S: iterate f <- P f / |P f| and record |P f|, a certified lower
// bound. Non-symmetric S: iterate the normal-equations operator P*P and
// record |P f|, flagged heuristic. The start vector is fixed, so the result
// is reproducible bit for bit. Throws ArgumentError for iters == 0.
RhoEstimate rho_power_iteration(const BallGraph& ball, int iters);

// sqrt(2k-1)/k: spectral radius of free:k with its standard generators.
// Closed form from the literature, used as an external oracle.
double free_group_rho(int rank);

// True when S is a uniform multiple of the standard generators of free:k,
// i.e. when the radial chain and free_group_rho apply.
bool is_standard_free_multiset(const GroupContext& ctx, const GeneratorMultiset& s);

// `n, p_2n_num, p_2n_den, lower_bound_float` rows for every even index.
void write_returns_csv(std::ostream& os, const std::vector<Rational>& returns);

}  // namespace percolab
