#pragma once

#include <optional>
#include <string>
#include <vector>

#include "percolab/bounded_function.hpp"
#include "percolab/group.hpp"
#include "percolab/isoperimetry.hpp"
#include "percolab/multiset.hpp"
#include "percolab/rational.hpp"

namespace percolab {

struct WitnessPair {
  BoundedFunction h;
  GroupElement gamma;
};

// A family of pairs (h_i, gamma_i) with H = sum_i h_i - gamma_i . h_i.
// Pairs are kept as given (a multiset; equal gammas are not merged).
class DixmierWitness {
 public:
  DixmierWitness(GroupContext ctx, std::vector<WitnessPair> pairs);

  const GroupContext& context() const { return ctx_; }
  const std::vector<WitnessPair>& pairs() const { return pairs_; }
  // {gamma_i} in pair order.
  GeneratorMultiset multiset() const;
  // 2 |S| max_i ||h_i||.
  Rational normalization() const;
  const BoundedFunction& H() const { return H_; }
  Rational sup() const { return H_.sup(); }
  // -sup(H) when negative.
  std::optional<Rational> epsilon() const;
  // Same witness scaled so the normalization is 1. Throws ArgumentError when
  // every h_i vanishes.
  DixmierWitness normalized() const;

 private:
  // H already known to equal build_H(pairs).
  DixmierWitness(GroupContext ctx, std::vector<WitnessPair> pairs, BoundedFunction H);

  GroupContext ctx_;
  std::vector<WitnessPair> pairs_;
  BoundedFunction H_;
};

// sum_i h_i - gamma_i . h_i. Throws ArgumentError on an empty list and
// ContextMismatch across contexts.
BoundedFunction build_H(const std::vector<WitnessPair>& pairs, FunctionBudget budget = {});

struct PartitionChecks {
  // sum A_i + sum B_j + C = 1
  bool partition = false;
  // sum gamma_i . A_i = 1
  bool gamma_cover = false;
  // sum eta_j . B_j = 1
  bool eta_cover = false;
  bool all() const { return partition && gamma_cover && eta_cover; }
};

struct ParadoxicalDecomposition {
  std::vector<BoundedFunction> a_pieces;
  std::vector<BoundedFunction> b_pieces;
  BoundedFunction c_piece;
  // gammas[0] and etas[0] are the identity.
  std::vector<GroupElement> gammas;
  std::vector<GroupElement> etas;

  // s + t, an upper bound on the Tarski number.
  int tarski_count() const { return static_cast<int>(a_pieces.size() + b_pieces.size()); }
  PartitionChecks check() const;
  // sum_{i>=2} (A_i - gamma_i . A_i) + sum_{j>=2} (B_j - eta_j . B_j), whose
  // sup is at most -1.
  BoundedFunction difference_sum() const;
  // difference_sum() / (s + t - 2).
  BoundedFunction scaled_difference() const;
};

// Pairs (A_i / (2(s+t-2)), gamma_i) for i >= 2 and likewise for the B side;
// normalization 1 and sup(H) <= -1 / (2(s+t-2)). Throws ArgumentError when
// the decomposition fails its checks or s + t <= 2.
DixmierWitness witness_from_decomposition(const ParadoxicalDecomposition& d);

struct ParadoxicalF2 {
  ParadoxicalDecomposition decomposition;
  DixmierWitness witness;
};

// free(2): A1 = aX, A2 = a^-1 X, B1 = bX, B2 = b^-1 X (cylinders), C = {e},
// gamma = (e, a), eta = (e, b).
ParadoxicalF2 paradoxical_witness_f2();

struct IterationReport {
  // Overlap of F against the witness multiset.
  Rational k;
  Rational phi;
  std::size_t set_size = 0;
  Rational normalization_before;
  // Normalization of the new pairs before rescaling; (1 - k) times the old.
  Rational normalization_after;
  Rational norm_before;
  // ||H_1|| before rescaling.
  Rational norm_after;
  Rational sup_before;
  Rational sup_after;
  // Whether H_1 = (1/|F|) 1_F * H_0 and sup(H_1) <= sup(H_0) were asserted
  // (abelian groups only; otherwise the sups are just recorded).
  bool averaging_checked = false;
  std::size_t pairs_before = 0;
  std::size_t pairs_after = 0;
};

struct DixmierIteration {
  // Rescaled to normalization 1 (left as is if H_1 has no pairs).
  DixmierWitness witness;
  IterationReport report;
};

// One averaging step. Each pair (h, s) becomes, for every f in F \ sF, the
// pair (f.h / |F|, s^j) where s^j f is the first point of the chain
// f, sf, s^2 f, ... outside F; together these sum to
// (1/|F|)(1_F - 1_{sF}) * h, so the new H is the averaged one and the new
// normalization is exactly (1 - k) times the old.
// Throws ArgumentError unless f.multiset is the witness multiset, and
// InvariantViolation if a bound that holds by construction fails.
DixmierIteration dixmier_iterate(const DixmierWitness& w, const FolnerCandidate& f,
                                 FunctionBudget budget = {});

struct ChainReport {
  std::vector<IterationReport> steps;
  // prod (1 - k_i)
  Rational chain_bound;
  // ||H_m|| in the scale of the starting witness.
  Rational measured_norm;
  Rational initial_normalization;
  std::optional<Rational> initial_epsilon;
  // epsilon > chain_bound * initial normalization: the starting witness
  // cannot exist, so the construction is rejected.
  bool contradiction = false;
  DixmierWitness final_witness;
};

// Iterates with the sets produced by next_set(current multiset, step).
template <typename NextSet>
ChainReport dixmier_chain(const DixmierWitness& start, int steps, NextSet next_set,
                          FunctionBudget budget = {});

// zd only: the box {sum_i a_i c_i e_i : 0 <= a_i < side}, where c_i is the
// smallest positive i-th coordinate among axis elements of S. Throws
// ArgumentError for other families, off-axis elements or a missing axis.
std::vector<GroupElement> lattice_box(const GroupContext& ctx, const GeneratorMultiset& s,
                                      int side);

std::string to_json(const DixmierWitness& w);
DixmierWitness dixmier_witness_from_json(const GroupContext& ctx, const std::string& text);
std::string to_json(const ParadoxicalDecomposition& d, const GroupContext& ctx);

// ---------------------------------------------------------------------------

namespace detail {
ChainReport chain_start(const DixmierWitness& start);
void chain_step(ChainReport& r, const DixmierIteration& it);
}  // namespace detail

template <typename NextSet>
ChainReport dixmier_chain(const DixmierWitness& start, int steps, NextSet next_set,
                          FunctionBudget budget) {
  ChainReport r = detail::chain_start(start);
  for (int m = 0; m < steps; ++m) {
    const GeneratorMultiset s = r.final_witness.multiset();
    const FolnerCandidate f = phi(start.context(), s, next_set(s, m));
    detail::chain_step(r, dixmier_iterate(r.final_witness, f, budget));
  }
  return r;
}

}  // namespace percolab
