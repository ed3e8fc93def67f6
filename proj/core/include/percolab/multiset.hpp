#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "percolab/group.hpp"
#include "percolab/rational.hpp"

namespace percolab {

struct MultisetEntry {
  GroupElement element;
  std::uint64_t multiplicity = 1;
};

// A finite multiset S of group elements. Entries keep the order they were
// given in (entry indices label Cayley-graph edge slots). The nominal size
// |S| is the sum of multiplicities, which for collapsed powers S^n is |S0|^n
// even though only the support is stored.
class GeneratorMultiset {
 public:
  GeneratorMultiset() = default;
  explicit GeneratorMultiset(std::vector<GroupElement> elements);
  explicit GeneratorMultiset(std::vector<MultisetEntry> entries);

  const std::vector<MultisetEntry>& entries() const { return entries_; }
  std::size_t num_entries() const { return entries_.size(); }
  std::uint64_t size() const { return size_; }
  bool empty() const { return entries_.empty(); }

  // Deduplicated, multiplicities summed, sorted by normal form.
  std::vector<MultisetEntry> support() const;
  Rational weight(const GroupElement& g) const;
  // Multiplicity of g summed over entries.
  std::uint64_t multiplicity(const GroupElement& g) const;

  bool is_symmetric(const GroupContext& ctx) const;

  // For a symmetric multiset: partner[i] is the entry carrying the inverse of
  // entry i, matched by occurrence order. Throws ArgumentError when the
  // entry-level matching is impossible.
  std::vector<std::size_t> inverse_pairing(const GroupContext& ctx) const;

  // Same multiset irrespective of entry order.
  bool same_multiset(const GeneratorMultiset& other) const;

 private:
  std::vector<MultisetEntry> entries_;
  std::uint64_t size_ = 0;
};

// Concatenation of S and its elementwise inverses; size 2|S|.
GeneratorMultiset symmetrize(const GroupContext& ctx, const GeneratorMultiset& s);

// S itself when already symmetric, symmetrize(S) otherwise.
GeneratorMultiset symmetric_closure(const GroupContext& ctx,
                                    const GeneratorMultiset& s);

struct PowerBudget {
  std::size_t max_support = 2'000'000;
};

// S^n collapsed to (support, count) pairs with nominal size |S|^n.
GeneratorMultiset multiset_power(const GroupContext& ctx,
                                 const GeneratorMultiset& s, int n,
                                 PowerBudget budget = {});

// The standard symmetric generating multiset: each generator and its inverse
// (an order-2 generator appears once), unit vectors +-e_i on zd.
GeneratorMultiset standard_generators(const GroupContext& ctx);

// "std", "std^n", "[a, a^-1, b, b^-1]", "[a,b]^3". Throws ParseError.
GeneratorMultiset parse_multiset(const GroupContext& ctx, std::string_view spec);

std::string to_string(const GroupContext& ctx, const GeneratorMultiset& s);

}  // namespace percolab
