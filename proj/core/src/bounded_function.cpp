#include "percolab/bounded_function.hpp"

#include <algorithm>
#include <unordered_map>
#include "json.hpp"

#include "percolab/errors.hpp"

namespace percolab {

const char* to_string(Representation r) {
  return r == Representation::prefix ? "prefix" : "finite-support";
}

namespace {

const Rational kZero = 0;

bool is_token_prefix(const std::vector<std::int32_t>& p, const std::vector<std::int32_t>& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

void require_prefix_family(const GroupContext& ctx) {
  if (!ctx.is_free_family())
    throw ArgumentError("the prefix representation needs a free group or free product (" +
                        ctx.spec() + " given)");
}

}  // namespace

BoundedFunction BoundedFunction::zero(const GroupContext& ctx, Representation rep) {
  if (rep == Representation::prefix) return constant(ctx, 0);
  return BoundedFunction(ctx, rep);
}

BoundedFunction BoundedFunction::constant(const GroupContext& ctx, const Rational& value) {
  require_prefix_family(ctx);
  BoundedFunction f(ctx, Representation::prefix);
  f.nodes_.emplace(Tokens{}, value);
  return f;
}

BoundedFunction BoundedFunction::cylinder_indicator(const GroupContext& ctx,
                                                    const GroupElement& w) {
  require_prefix_family(ctx);
  ctx.check(w);
  BoundedFunction f(ctx, Representation::prefix);
  const auto t = w.data();
  if (t.empty()) {
    f.nodes_.emplace(Tokens{}, 1);
    return f;
  }
  f.nodes_.emplace(Tokens{}, 0);
  f.nodes_.emplace(Tokens(t.begin(), t.end()), 1);
  return f;
}

BoundedFunction BoundedFunction::from_nodes(
    const GroupContext& ctx, const std::vector<std::pair<GroupElement, Rational>>& nodes) {
  require_prefix_family(ctx);
  BoundedFunction f(ctx, Representation::prefix);
  for (const auto& [g, v] : nodes) {
    ctx.check(g);
    const auto t = g.data();
    if (!f.nodes_.emplace(Tokens(t.begin(), t.end()), v).second)
      throw ArgumentError("node " + ctx.to_string(g) + " given twice");
  }
  if (!f.nodes_.contains(Tokens{}))
    throw ArgumentError("a prefix function needs a value at the identity");
  f.canonicalize();
  return f;
}

BoundedFunction BoundedFunction::indicator(const GroupContext& ctx,
                                           const std::vector<GroupElement>& set) {
  BoundedFunction f(ctx, Representation::finite_support);
  for (const auto& g : set) {
    ctx.check(g);
    f.support_[g] = 1;
  }
  return f;
}

BoundedFunction BoundedFunction::from_support(
    const GroupContext& ctx, const std::vector<std::pair<GroupElement, Rational>>& values) {
  BoundedFunction f(ctx, Representation::finite_support);
  for (const auto& [g, v] : values) {
    ctx.check(g);
    f.support_[g] += v;
  }
  f.canonicalize();
  return f;
}

void BoundedFunction::canonicalize() {
  if (rep_ == Representation::finite_support) {
    std::erase_if(support_, [](const auto& kv) { return kv.second == 0; });
    return;
  }
  // Lexicographic order visits every node after all of its ancestors.
  std::vector<const Tokens*> kept;
  for (auto it = nodes_.begin(); it != nodes_.end();) {
    while (!kept.empty() && !is_token_prefix(*kept.back(), it->first)) kept.pop_back();
    if (!kept.empty() && nodes_.at(*kept.back()) == it->second) {
      it = nodes_.erase(it);
    } else {
      kept.push_back(&it->first);
      ++it;
    }
  }
}

const Rational& BoundedFunction::node_value(const Tokens& x) const {
  const std::size_t top = std::min<std::size_t>(x.size(), static_cast<std::size_t>(depth()));
  Tokens probe(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(top));
  for (;;) {
    auto it = nodes_.find(probe);
    if (it != nodes_.end()) return it->second;
    if (probe.empty()) throw InvariantViolation("prefix function without a root node");
    probe.pop_back();
  }
}

Rational BoundedFunction::operator()(const GroupElement& x) const {
  ctx_.check(x);
  if (rep_ == Representation::finite_support) {
    auto it = support_.find(x);
    return it == support_.end() ? kZero : it->second;
  }
  const auto t = x.data();
  return node_value(Tokens(t.begin(), t.end()));
}

namespace {

bool zero_is_attained(const GroupContext& ctx, std::size_t support_size) {
  const auto order = ctx.order();
  return !order || support_size < *order;
}

}  // namespace

Rational BoundedFunction::sup() const {
  if (rep_ == Representation::prefix) {
    Rational best = nodes_.begin()->second;
    for (const auto& [t, v] : nodes_) best = std::max(best, v);
    return best;
  }
  std::optional<Rational> best;
  if (zero_is_attained(ctx_, support_.size())) best = 0;
  for (const auto& [g, v] : support_) best = best ? std::max(*best, v) : v;
  return best.value_or(0);
}

Rational BoundedFunction::inf() const { return -(-*this).sup(); }

Rational BoundedFunction::norm_inf() const {
  const Rational s = sup(), i = inf();
  return std::max(abs(s), abs(i));
}

bool BoundedFunction::is_zero() const {
  if (rep_ == Representation::finite_support) return support_.empty();
  return nodes_.size() == 1 && nodes_.begin()->second == 0;
}

int BoundedFunction::depth() const {
  std::size_t d = 0;
  if (rep_ == Representation::prefix) {
    for (const auto& [t, v] : nodes_) d = std::max(d, t.size());
  } else {
    for (const auto& [g, v] : support_) d = std::max(d, g.token_count());
  }
  return static_cast<int>(d);
}

std::size_t BoundedFunction::size() const {
  return rep_ == Representation::prefix ? nodes_.size() : support_.size();
}

std::vector<std::pair<GroupElement, Rational>> BoundedFunction::entries() const {
  std::vector<std::pair<GroupElement, Rational>> out;
  if (rep_ == Representation::prefix) {
    for (const auto& [t, v] : nodes_) out.emplace_back(ctx_.from_reduced_tokens(t), v);
  } else {
    for (const auto& [g, v] : support_) out.emplace_back(g, v);
  }
  return out;
}

BoundedFunction BoundedFunction::operator-() const { return Rational(-1) * *this; }

BoundedFunction operator*(const Rational& c, const BoundedFunction& f) {
  BoundedFunction out = f;
  for (auto& [t, v] : out.nodes_) v *= c;
  for (auto& [g, v] : out.support_) v *= c;
  out.canonicalize();
  return out;
}

template <typename Op>
BoundedFunction BoundedFunction::combine(const BoundedFunction& a, const BoundedFunction& b,
                                         Op op) {
  if (!(a.ctx_ == b.ctx_))
    throw ContextMismatch("functions on " + a.ctx_.spec() + " and " + b.ctx_.spec());
  if (a.rep_ != b.rep_) {
    if (a.rep_ == Representation::finite_support) return combine(lift_to_prefix(a), b, op);
    return combine(a, lift_to_prefix(b), op);
  }
  BoundedFunction out(a.ctx_, a.rep_);
  if (a.rep_ == Representation::finite_support) {
    for (const auto& [g, v] : a.support_) out.support_[g] = op(v, b(g));
    for (const auto& [g, v] : b.support_)
      if (!a.support_.contains(g)) out.support_[g] = op(kZero, v);
  } else {
    for (const auto& [t, v] : a.nodes_) out.nodes_[t] = op(v, b.node_value(t));
    for (const auto& [t, v] : b.nodes_)
      if (!a.nodes_.contains(t)) out.nodes_[t] = op(a.node_value(t), v);
  }
  out.canonicalize();
  return out;
}

BoundedFunction operator+(const BoundedFunction& a, const BoundedFunction& b) {
  return BoundedFunction::combine(a, b, [](const Rational& x, const Rational& y) {
    return Rational(x + y);
  });
}

BoundedFunction operator-(const BoundedFunction& a, const BoundedFunction& b) {
  return BoundedFunction::combine(a, b, [](const Rational& x, const Rational& y) {
    return Rational(x - y);
  });
}

bool operator==(const BoundedFunction& a, const BoundedFunction& b) {
  if (!(a.ctx_ == b.ctx_)) return false;
  if (a.rep_ == b.rep_) return a.nodes_ == b.nodes_ && a.support_ == b.support_;
  return (a - b).is_zero();
}

BoundedFunction sum(const std::vector<BoundedFunction>& terms) {
  if (terms.empty()) throw ArgumentError("sum of an empty list");
  const bool all_support = std::all_of(terms.begin(), terms.end(), [](const auto& t) {
    return t.rep_ == Representation::finite_support;
  });
  if (!all_support) {
    std::vector<BoundedFunction> level = terms;
    while (level.size() > 1) {
      std::vector<BoundedFunction> next;
      next.reserve((level.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
      if (level.size() % 2) next.push_back(std::move(level.back()));
      level = std::move(next);
    }
    return std::move(level.front());
  }
  const auto& ctx = terms.front().ctx_;
  std::unordered_map<GroupElement, Rational, GroupElementHash> acc;
  for (const auto& t : terms) {
    if (!(t.ctx_ == ctx))
      throw ContextMismatch("functions on " + ctx.spec() + " and " + t.ctx_.spec());
    for (const auto& [g, v] : t.support_) acc[g] += v;
  }
  BoundedFunction out(ctx, Representation::finite_support);
  for (auto& [g, v] : acc)
    if (v != 0) out.support_.emplace(g, std::move(v));
  return out;
}

BoundedFunction lift_to_prefix(const BoundedFunction& f, FunctionBudget budget) {
  if (f.rep_ == Representation::prefix) return f;
  const auto& ctx = f.ctx_;
  if (!ctx.is_free_family())
    throw CoercionError("finite-support functions on " + ctx.spec() +
                        " have no prefix representation");
  if (f.depth() + 1 > budget.max_depth)
    throw CoercionError("lifting to the prefix representation needs depth " +
                        std::to_string(f.depth() + 1) + " > cap " +
                        std::to_string(budget.max_depth));
  BoundedFunction out(ctx, Representation::prefix);
  out.nodes_.emplace(BoundedFunction::Tokens{}, f(ctx.identity()));
  for (const auto& [g, v] : f.support_) {
    const auto t = g.data();
    BoundedFunction::Tokens w(t.begin(), t.end());
    out.nodes_[w] = v;
    for (auto next : ctx.successor_tokens(w.empty() ? 0 : w.back())) {
      auto child = w;
      child.push_back(next);
      auto it = f.support_.find(ctx.from_reduced_tokens(child));
      out.nodes_.emplace(std::move(child), it == f.support_.end() ? kZero : it->second);
    }
  }
  out.canonicalize();
  return out;
}

BoundedFunction translate(const GroupElement& g, const BoundedFunction& f,
                          FunctionBudget budget) {
  const auto& ctx = f.ctx_;
  ctx.check(g);
  if (ctx.is_identity(g)) return f;
  if (f.rep_ == Representation::finite_support) {
    BoundedFunction out(ctx, f.rep_);
    for (const auto& [x, v] : f.support_) out.support_.emplace(ctx.mul(g, x), v);
    return out;
  }
  // Words u longer than |g| keep their last token under u -> g^-1 u, so the
  // cylinder of u maps onto the cylinder of g^-1 u and f's nodes inside it
  // can be relabelled. Shorter words are listed one by one.
  const int t = ctx.token_length(g);
  if (ctx.count_words_up_to(t + 1) > budget.max_nodes)
    throw BudgetError("translating by " + ctx.to_string(g) + " needs more than " +
                      std::to_string(budget.max_nodes) + " nodes");
  const GroupElement g_inv = ctx.inv(g);
  BoundedFunction out(ctx, Representation::prefix);
  for (const auto& u : ctx.words_up_to(t + 1)) {
    const GroupElement v = ctx.mul(g_inv, u);
    const auto vt = v.data();
    const BoundedFunction::Tokens vtok(vt.begin(), vt.end());
    const auto ut = u.data();
    const BoundedFunction::Tokens utok(ut.begin(), ut.end());
    out.nodes_.emplace(utok, f.node_value(vtok));
    if (static_cast<int>(utok.size()) <= t) continue;
    for (auto it = f.nodes_.upper_bound(vtok);
         it != f.nodes_.end() && is_token_prefix(vtok, it->first); ++it) {
      BoundedFunction::Tokens w = utok;
      w.insert(w.end(), it->first.begin() + static_cast<std::ptrdiff_t>(vtok.size()),
               it->first.end());
      out.nodes_.emplace(std::move(w), it->second);
    }
  }
  out.canonicalize();
  if (out.depth() > budget.max_depth)
    throw BudgetError("translated function has depth " + std::to_string(out.depth()) +
                      " > cap " + std::to_string(budget.max_depth));
  return out;
}

BoundedFunction average_convolve(const std::vector<GroupElement>& f_set,
                                 const BoundedFunction& f, FunctionBudget budget) {
  if (f_set.empty()) throw ArgumentError("averaging over an empty set");
  std::vector<GroupElement> unique = f_set;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::vector<BoundedFunction> terms;
  terms.reserve(unique.size());
  for (const auto& g : unique) terms.push_back(translate(g, f, budget));
  return Rational(BigInt(1), BigInt(unique.size())) * sum(terms);
}

std::string to_json(const BoundedFunction& f) {
  nlohmann::ordered_json j;
  j["representation"] = to_string(f.representation());
  j["group"] = f.context().spec();
  auto& entries = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& [g, v] : f.entries())
    entries.push_back({{"element", f.context().to_string(g)}, {"value", to_string(v)}});
  return j.dump();
}

BoundedFunction bounded_function_from_json(const GroupContext& ctx, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bounded function JSON: ") + e.what());
  }
  try {
    if (j.at("group").get<std::string>() != ctx.spec())
      throw ContextMismatch("JSON function is on " + j.at("group").get<std::string>());
    std::vector<std::pair<GroupElement, Rational>> values;
    for (const auto& e : j.at("entries"))
      values.emplace_back(ctx.parse_element(e.at("element").get<std::string>()),
                          parse_rational(e.at("value").get<std::string>()));
    const auto rep = j.at("representation").get<std::string>();
    if (rep == "prefix") return BoundedFunction::from_nodes(ctx, values);
    if (rep == "finite-support") return BoundedFunction::from_support(ctx, values);
    throw ParseError("unknown representation " + rep);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bounded function JSON: ") + e.what());
  }
}

}  // namespace percolab
