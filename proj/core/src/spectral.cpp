#include "percolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "percolab/errors.hpp"

namespace percolab {

WalkMeasure::WalkMeasure(Map masses) : masses_(std::move(masses)) {
  for (const auto& [g, q] : masses_)
    if (q <= 0) throw ArgumentError("walk measures carry positive masses only");
}

WalkMeasure WalkMeasure::delta(const GroupElement& g) {
  Map m;
  m.emplace(g, Rational(1));
  return WalkMeasure(std::move(m));
}

WalkMeasure WalkMeasure::uniform(const GeneratorMultiset& s) {
  if (s.empty()) throw ArgumentError("uniform measure of an empty multiset");
  Map m;
  for (const auto& e : s.support())
    m.emplace(e.element, Rational(BigInt(e.multiplicity), BigInt(s.size())));
  return WalkMeasure(std::move(m));
}

Rational WalkMeasure::at(const GroupElement& g) const {
  auto it = masses_.find(g);
  return it == masses_.end() ? Rational(0) : it->second;
}

Rational WalkMeasure::total_mass() const {
  Rational total = 0;
  for (const auto& [g, q] : masses_) total += q;
  return total;
}

WalkMeasure convolve_step(const GroupContext& ctx, const WalkMeasure& mu,
                          const WalkMeasure& nu) {
  WalkMeasure::Map out;
  out.reserve(mu.support_size() * nu.support_size());
  // x = g y with mu at g and nu at y = g^-1 x.
  for (const auto& [g, a] : mu.masses())
    for (const auto& [y, b] : nu.masses()) out[ctx.mul(g, y)] += a * b;
  return WalkMeasure(std::move(out));
}

bool is_standard_free_multiset(const GroupContext& ctx, const GeneratorMultiset& s) {
  if (ctx.family() != Family::free_group || s.empty()) return false;
  const auto support = s.support();
  if (support.size() != static_cast<std::size_t>(2 * ctx.num_generators())) return false;
  const std::uint64_t m = support.front().multiplicity;
  for (const auto& e : support) {
    if (e.multiplicity != m || ctx.word_length(e.element) != 1) return false;
  }
  return true;
}

namespace {

void require_symmetric(const GroupContext& ctx, const GeneratorMultiset& s) {
  if (s.empty()) throw ArgumentError("return probabilities of an empty multiset");
  if (!s.is_symmetric(ctx))
    throw MethodNotApplicable(
        "return-probability bounds need a symmetric multiset; use power iteration "
        "on a ball for general S");
}

// Elements farther than `remaining` steps from the identity cannot come back.
// Each step moves by at most `max_len` in word length.
bool can_return(const GroupContext& ctx, const GroupElement& g, int max_len,
                int remaining) {
  if (max_len == 0) return true;
  const int len = ctx.word_length(g);
  return (len + max_len - 1) / max_len <= remaining;
}

template <typename Scalar, typename MakeWeight>
std::vector<Scalar> truncated_returns(const GroupContext& ctx, const GeneratorMultiset& s,
                                      int steps, ReturnBudget budget,
                                      MakeWeight make_weight) {
  const auto support = s.support();
  std::vector<std::pair<GroupElement, Scalar>> step;
  int max_len = 0;
  for (const auto& e : support) {
    step.emplace_back(e.element, make_weight(e.multiplicity, s.size()));
    max_len = std::max(max_len, ctx.word_length(e.element));
  }
  std::unordered_map<GroupElement, Scalar, GroupElementHash> current;
  current.emplace(ctx.identity(), Scalar(1));
  std::vector<Scalar> out;
  out.reserve(steps);
  const GroupElement e = ctx.identity();
  for (int n = 1; n <= steps; ++n) {
    std::unordered_map<GroupElement, Scalar, GroupElementHash> next;
    next.reserve(current.size() * 2);
    for (const auto& [g, mass] : current) {
      for (const auto& [t, w] : step) {
        GroupElement x = ctx.mul(t, g);
        if (!can_return(ctx, x, max_len, steps - n)) continue;
        next[std::move(x)] += w * mass;
      }
      if (next.size() > budget.max_support)
        throw BudgetError("exact convolution support exceeds " +
                          std::to_string(budget.max_support) + " at step " +
                          std::to_string(n));
    }
    current = std::move(next);
    auto it = current.find(e);
    out.push_back(it == current.end() ? Scalar(0) : it->second);
  }
  return out;
}

// Distance-from-identity chain for free:k with a uniform multiple of the
// standard generators: 0 -> 1 surely, r -> r-1 w.p. 1/(2k), r -> r+1 w.p.
// (2k-1)/(2k).
std::vector<Rational> radial_returns(int rank, int steps) {
  const Rational down(BigInt(1), BigInt(2 * rank));
  const Rational up(BigInt(2 * rank - 1), BigInt(2 * rank));
  std::vector<Rational> dist{Rational(1)};
  std::vector<Rational> out;
  out.reserve(steps);
  for (int n = 1; n <= steps; ++n) {
    std::vector<Rational> next(dist.size() + 1);
    for (std::size_t r = 0; r < dist.size(); ++r) {
      if (dist[r] == 0) continue;
      if (r == 0) {
        next[1] += dist[0];
      } else {
        next[r - 1] += dist[r] * down;
        next[r + 1] += dist[r] * up;
      }
    }
    dist = std::move(next);
    out.push_back(dist[0]);
  }
  return out;
}

}  // namespace

std::vector<Rational> return_probabilities_by_convolution(const GroupContext& ctx,
                                                          const GeneratorMultiset& s,
                                                          int steps,
                                                          ReturnBudget budget) {
  require_symmetric(ctx, s);
  if (steps < 1) throw ArgumentError("need at least one step");
  return truncated_returns<Rational>(ctx, s, steps, budget,
                                     [](std::uint64_t m, std::uint64_t n) {
                                       return Rational(BigInt(m), BigInt(n));
                                     });
}

std::vector<Rational> return_probabilities(const GroupContext& ctx,
                                           const GeneratorMultiset& s, int steps,
                                           ReturnBudget budget) {
  require_symmetric(ctx, s);
  if (steps < 1) throw ArgumentError("need at least one step");
  if (is_standard_free_multiset(ctx, s)) return radial_returns(ctx.num_generators(), steps);
  return return_probabilities_by_convolution(ctx, s, steps, budget);
}

std::vector<double> return_probabilities_float(const GroupContext& ctx,
                                               const GeneratorMultiset& s, int steps,
                                               ReturnBudget budget) {
  require_symmetric(ctx, s);
  if (steps < 1) throw ArgumentError("need at least one step");
  return truncated_returns<double>(ctx, s, steps, budget,
                                   [](std::uint64_t m, std::uint64_t n) {
                                     return static_cast<double>(m) /
                                            static_cast<double>(n);
                                   });
}

RhoEstimate rho_lower_from_returns(const std::vector<Rational>& returns) {
  if (returns.empty()) throw ArgumentError("empty return-probability sequence");
  RhoEstimate est;
  est.method = RhoMethod::returns;
  est.provenance = Provenance::certified_bound;
  for (std::size_t k = 2; k <= returns.size(); k += 2) {
    const double p = to_double(returns[k - 1]);
    const double bound = p > 0 ? std::pow(p, 1.0 / static_cast<double>(k)) : 0.0;
    est.lower_bounds.push_back(bound);
    est.best = std::max(est.best, bound);
  }
  est.note = "p_2n^(1/2n) <= rho for the self-adjoint walk operator";
  return est;
}

RhoEstimate rho_power_iteration(const BallGraph& ball, int iters) {
  if (iters <= 0) throw ArgumentError("power iteration needs iters >= 1");
  const std::size_t n = ball.size();
  const std::size_t m = ball.num_entries();
  const double inv_size = 1.0 / static_cast<double>(ball.multiset_size());
  std::vector<double> weight(m);
  for (std::size_t i = 0; i < m; ++i)
    weight[i] = static_cast<double>(ball.multiplicity(i)) * inv_size;

  // (P f)(x) = (1/|S|) sum_i mult_i f(s_i^-1 x): scatter along slots.
  auto apply = [&](const std::vector<double>& f, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::uint32_t y = 0; y < n; ++y) {
      if (f[y] == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) {
        const auto x = ball.neighbor(y, i);
        if (x != BallGraph::kOutside) out[x] += weight[i] * f[y];
      }
    }
  };
  // (P* f)(y) = (1/|S|) sum_i mult_i f(s_i y): gather along slots.
  auto apply_adjoint = [&](const std::vector<double>& f, std::vector<double>& out) {
    for (std::uint32_t y = 0; y < n; ++y) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const auto x = ball.neighbor(y, i);
        if (x != BallGraph::kOutside) acc += weight[i] * f[x];
      }
      out[y] = acc;
    }
  };
  auto norm = [](const std::vector<double>& f) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s);
  };

  RhoEstimate est;
  est.method = RhoMethod::power_iteration;
  est.provenance = ball.symmetric() ? Provenance::certified_bound : Provenance::heuristic;
  est.note = ball.symmetric()
                 ? "norm of the compression to the ball; never exceeds rho"
                 : "normal-equations iteration on a non-symmetric multiset";
  // Vectors stay nonnegative in the symmetric case, so every sum below has
  // nonnegative terms and carries relative error at most gamma_k = k u / (1 - k u)
  // (u the unit roundoff). Deflating by the combined bound keeps the reported
  // ratio below the exact ||P f|| / ||f||.
  const double u = std::numeric_limits<double>::epsilon() / 2;
  const double terms = static_cast<double>(n + m + 4);
  const double rel = 2.0 * terms * u / (1.0 - 2.0 * terms * u);
  const double deflate = (1.0 - rel) / (1.0 + rel);

  std::vector<double> f(n, 0.0), g(n, 0.0);
  f[0] = 1.0;
  for (int t = 0; t < iters; ++t) {
    apply(f, g);
    const double len_g = norm(g);
    const double ratio = ball.symmetric() ? len_g / norm(f) * deflate : len_g;
    est.lower_bounds.push_back(ratio);
    est.best = std::max(est.best, ratio);
    if (len_g == 0.0) break;
    if (ball.symmetric()) {
      for (std::size_t k = 0; k < n; ++k) f[k] = g[k] / len_g;
    } else {
      apply_adjoint(g, f);
      const double len = norm(f);
      if (len == 0.0) break;
      for (double& v : f) v /= len;
    }
  }
  return est;
}

double free_group_rho(int rank) {
  if (rank < 1) throw ArgumentError("free group rank must be positive");
  return std::sqrt(2.0 * rank - 1.0) / rank;
}

void write_returns_csv(std::ostream& os, const std::vector<Rational>& returns) {
  const RhoEstimate est = rho_lower_from_returns(returns);
  os << "n,p_2n_num,p_2n_den,lower_bound_float\n";
  char buf[64];
  for (std::size_t k = 2; k <= returns.size(); k += 2) {
    const auto& q = returns[k - 1];
    std::snprintf(buf, sizeof buf, "%.17g", est.lower_bounds[k / 2 - 1]);
    os << k / 2 << ',' << numerator(q) << ',' << denominator(q) << ',' << buf << '\n';
  }
}

}  // namespace percolab
