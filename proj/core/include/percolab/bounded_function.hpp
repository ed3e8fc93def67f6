#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "percolab/group.hpp"
#include "percolab/rational.hpp"

namespace percolab {

enum class Representation {
  // Free families only. A finite set of nodes (reduced words, always
  // including the identity) with values; f(x) is the value of the longest
  // node that is a token prefix of x. Every node's value is attained at the
  // node itself, so sup and inf are exact over the infinite group.
  prefix,
  // Finitely many values, zero elsewhere.
  finite_support,
};

const char* to_string(Representation r);

struct FunctionBudget {
  int max_depth = 12;
  std::size_t max_nodes = 5'000'000;
};

// A bounded function on a group with exact rational values, in one of the
// two closed representations above. Stored in canonical form (no node equal
// to its nearest ancestor, no explicit zeros), so == is function equality.
class BoundedFunction {
 public:
  static BoundedFunction zero(const GroupContext& ctx,
                              Representation rep = Representation::finite_support);
  // Prefix representation.
  static BoundedFunction constant(const GroupContext& ctx, const Rational& value);
  // Indicator of the words whose normal form starts with w (all of the
  // group for w = e).
  static BoundedFunction cylinder_indicator(const GroupContext& ctx, const GroupElement& w);
  // Prefix representation from explicit nodes. The identity must be a node.
  static BoundedFunction from_nodes(const GroupContext& ctx,
                                    const std::vector<std::pair<GroupElement, Rational>>& nodes);
  // Finite-support representation.
  static BoundedFunction indicator(const GroupContext& ctx, const std::vector<GroupElement>& set);
  static BoundedFunction from_support(
      const GroupContext& ctx, const std::vector<std::pair<GroupElement, Rational>>& values);

  Representation representation() const { return rep_; }
  const GroupContext& context() const { return ctx_; }

  Rational operator()(const GroupElement& x) const;
  // Exact sup / inf over the whole group.
  Rational sup() const;
  Rational inf() const;
  Rational norm_inf() const;
  bool is_zero() const;
  // Longest node / support element, in normal-form tokens.
  int depth() const;
  // Stored nodes or support entries.
  std::size_t size() const;
  // (node or support element, value) in normal-form order of the tokens.
  std::vector<std::pair<GroupElement, Rational>> entries() const;

  BoundedFunction operator-() const;
  friend BoundedFunction operator+(const BoundedFunction& a, const BoundedFunction& b);
  friend BoundedFunction operator-(const BoundedFunction& a, const BoundedFunction& b);
  friend BoundedFunction operator*(const Rational& c, const BoundedFunction& f);
  friend bool operator==(const BoundedFunction& a, const BoundedFunction& b);

 private:
  using Tokens = std::vector<std::int32_t>;
  BoundedFunction(GroupContext ctx, Representation rep) : ctx_(std::move(ctx)), rep_(rep) {}

  void canonicalize();
  const Rational& node_value(const Tokens& x) const;

  friend BoundedFunction lift_to_prefix(const BoundedFunction& f, FunctionBudget budget);
  friend BoundedFunction sum(const std::vector<BoundedFunction>& terms);
  friend BoundedFunction translate(const GroupElement& g, const BoundedFunction& f,
                                   FunctionBudget budget);
  template <typename Op>
  static BoundedFunction combine(const BoundedFunction& a, const BoundedFunction& b, Op op);

  GroupContext ctx_;
  Representation rep_;
  // prefix: token sequence -> value (lexicographic, so a cylinder is a range)
  std::map<Tokens, Rational> nodes_;
  // finite_support
  std::map<GroupElement, Rational> support_;
};

// The same function in the prefix representation. Throws CoercionError for
// families without one (zd) or when the result would exceed the depth cap.
BoundedFunction lift_to_prefix(const BoundedFunction& f, FunctionBudget budget = {});

// (g . f)(x) = f(g^-1 x). Depth grows by at most the token length of g;
// BudgetError past the cap.
BoundedFunction translate(const GroupElement& g, const BoundedFunction& f,
                          FunctionBudget budget = {});

// Sum of many functions on one context, cheaper than repeated +. Throws
// ArgumentError on an empty list.
BoundedFunction sum(const std::vector<BoundedFunction>& terms);

// (1/|F|) (1_F * f) = (1/|F|) sum_{g in F} g . f. Throws ArgumentError for
// an empty F.
BoundedFunction average_convolve(const std::vector<GroupElement>& f_set,
                                 const BoundedFunction& f, FunctionBudget budget = {});

// JSON object with values as "num/den" strings and elements as words.
std::string to_json(const BoundedFunction& f);
BoundedFunction bounded_function_from_json(const GroupContext& ctx, const std::string& text);

}  // namespace percolab
