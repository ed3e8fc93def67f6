#include "percolab/dixmier.hpp"

#include <algorithm>
#include "json.hpp"
#include <unordered_set>

#include "percolab/errors.hpp"

namespace percolab {

namespace {

using Json = nlohmann::ordered_json;

bool is_one(const BoundedFunction& f) {
  return f.representation() == Representation::prefix && f.size() == 1 && f.sup() == 1 &&
         f.inf() == 1;
}

}  // namespace

BoundedFunction build_H(const std::vector<WitnessPair>& pairs, FunctionBudget budget) {
  if (pairs.empty()) throw ArgumentError("build_H needs at least one pair");
  std::vector<BoundedFunction> terms;
  terms.reserve(2 * pairs.size());
  for (const auto& [h, gamma] : pairs) {
    terms.push_back(h);
    terms.push_back(-translate(gamma, h, budget));
  }
  return sum(terms);
}

DixmierWitness::DixmierWitness(GroupContext ctx, std::vector<WitnessPair> pairs)
    : ctx_(std::move(ctx)),
      pairs_(std::move(pairs)),
      H_(BoundedFunction::zero(ctx_)) {
  for (const auto& p : pairs_) {
    if (!(p.h.context() == ctx_)) throw ContextMismatch("witness pair on " + p.h.context().spec());
    ctx_.check(p.gamma);
  }
  if (!pairs_.empty()) H_ = build_H(pairs_);
}

DixmierWitness::DixmierWitness(GroupContext ctx, std::vector<WitnessPair> pairs,
                               BoundedFunction H)
    : ctx_(std::move(ctx)), pairs_(std::move(pairs)), H_(std::move(H)) {}

GeneratorMultiset DixmierWitness::multiset() const {
  std::vector<GroupElement> g;
  g.reserve(pairs_.size());
  for (const auto& p : pairs_) g.push_back(p.gamma);
  return GeneratorMultiset(std::move(g));
}

Rational DixmierWitness::normalization() const {
  Rational m = 0;
  for (const auto& p : pairs_) m = std::max(m, p.h.norm_inf());
  return Rational(2 * pairs_.size()) * m;
}

std::optional<Rational> DixmierWitness::epsilon() const {
  const Rational s = sup();
  if (s < 0) return -s;
  return std::nullopt;
}

DixmierWitness DixmierWitness::normalized() const {
  const Rational n = normalization();
  if (n == 0) throw ArgumentError("a witness with all h_i = 0 cannot be normalized");
  const Rational c = 1 / n;
  std::vector<WitnessPair> scaled;
  scaled.reserve(pairs_.size());
  for (const auto& p : pairs_) scaled.push_back({c * p.h, p.gamma});
  return DixmierWitness(ctx_, std::move(scaled), c * H_);
}

PartitionChecks ParadoxicalDecomposition::check() const {
  PartitionChecks c;
  BoundedFunction all = c_piece;
  for (const auto& a : a_pieces) all = all + a;
  for (const auto& b : b_pieces) all = all + b;
  c.partition = is_one(lift_to_prefix(all));

  auto cover = [](const std::vector<BoundedFunction>& pieces,
                  const std::vector<GroupElement>& by) {
    if (pieces.empty() || pieces.size() != by.size()) return false;
    BoundedFunction sum = translate(by[0], pieces[0]);
    for (std::size_t i = 1; i < pieces.size(); ++i) sum = sum + translate(by[i], pieces[i]);
    return is_one(lift_to_prefix(sum));
  };
  c.gamma_cover = cover(a_pieces, gammas);
  c.eta_cover = cover(b_pieces, etas);
  return c;
}

BoundedFunction ParadoxicalDecomposition::difference_sum() const {
  std::vector<WitnessPair> pairs;
  for (std::size_t i = 1; i < a_pieces.size(); ++i) pairs.push_back({a_pieces[i], gammas[i]});
  for (std::size_t j = 1; j < b_pieces.size(); ++j) pairs.push_back({b_pieces[j], etas[j]});
  return build_H(pairs);
}

BoundedFunction ParadoxicalDecomposition::scaled_difference() const {
  return Rational(BigInt(1), BigInt(tarski_count() - 2)) * difference_sum();
}

DixmierWitness witness_from_decomposition(const ParadoxicalDecomposition& d) {
  if (d.tarski_count() <= 2) throw ArgumentError("a paradoxical decomposition needs s + t > 2");
  if (d.gammas.empty() || d.etas.empty() ||
      !d.c_piece.context().is_identity(d.gammas[0]) ||
      !d.c_piece.context().is_identity(d.etas[0]))
    throw ArgumentError("the first translators must be the identity");
  if (!d.check().all()) throw ArgumentError("decomposition fails its partition checks");
  const Rational c(BigInt(1), BigInt(2 * (d.tarski_count() - 2)));
  std::vector<WitnessPair> pairs;
  for (std::size_t i = 1; i < d.a_pieces.size(); ++i)
    pairs.push_back({c * d.a_pieces[i], d.gammas[i]});
  for (std::size_t j = 1; j < d.b_pieces.size(); ++j)
    pairs.push_back({c * d.b_pieces[j], d.etas[j]});
  return DixmierWitness(d.c_piece.context(), std::move(pairs));
}

ParadoxicalF2 paradoxical_witness_f2() {
  const auto ctx = GroupContext::free_group(2);
  const auto a = ctx.generator(0), b = ctx.generator(1);
  ParadoxicalDecomposition d{
      .a_pieces = {BoundedFunction::cylinder_indicator(ctx, a),
                   BoundedFunction::cylinder_indicator(ctx, ctx.inv(a))},
      .b_pieces = {BoundedFunction::cylinder_indicator(ctx, b),
                   BoundedFunction::cylinder_indicator(ctx, ctx.inv(b))},
      .c_piece = BoundedFunction::indicator(ctx, {ctx.identity()}),
      .gammas = {ctx.identity(), a},
      .etas = {ctx.identity(), b},
  };
  DixmierWitness w = witness_from_decomposition(d);
  return {std::move(d), std::move(w)};
}

DixmierIteration dixmier_iterate(const DixmierWitness& w, const FolnerCandidate& f,
                                 FunctionBudget budget) {
  const auto& ctx = w.context();
  if (!f.multiset.same_multiset(w.multiset()))
    throw ArgumentError("the set's overlap was computed against a different multiset");
  if (f.elements.empty()) throw ArgumentError("empty averaging set");

  IterationReport r;
  r.k = f.overlap;
  r.phi = f.phi;
  r.set_size = f.size();
  r.normalization_before = w.normalization();
  r.norm_before = w.H().norm_inf();
  r.sup_before = w.sup();
  r.pairs_before = w.pairs().size();

  const std::unordered_set<GroupElement, GroupElementHash> members(f.elements.begin(),
                                                                   f.elements.end());
  const Rational inv_size(BigInt(1), BigInt(members.size()));
  std::vector<WitnessPair> next;
  for (const auto& [h, s] : w.pairs()) {
    if (ctx.is_identity(s)) continue;
    const GroupElement s_inv = ctx.inv(s);
    const BoundedFunction scaled = inv_size * h;
    for (const auto& x : f.elements) {
      if (members.contains(ctx.mul(s_inv, x))) continue;
      GroupElement y = x;
      int j = 0;
      while (members.contains(y)) {
        y = ctx.mul(s, y);
        ++j;
      }
      next.push_back({translate(x, scaled, budget), ctx.pow(s, j)});
    }
  }
  DixmierWitness raw(ctx, std::move(next));

  r.normalization_after = raw.normalization();
  r.norm_after = raw.H().norm_inf();
  r.sup_after = raw.sup();
  r.pairs_after = raw.pairs().size();

  const Rational allowed = (1 - r.k) * r.normalization_before;
  if (r.normalization_after > allowed)
    throw InvariantViolation("normalization " + to_string(r.normalization_after) +
                             " exceeds (1 - k) times the previous one, " + to_string(allowed));
  if (r.norm_after > allowed)
    throw InvariantViolation("||H_1|| = " + to_string(r.norm_after) + " exceeds " +
                             to_string(allowed));

  if (ctx.is_abelian()) {
    // Averaging commutes with translation here, so H_1 is the average of H_0.
    r.averaging_checked = true;
    if (!(raw.H() == average_convolve(f.elements, w.H(), budget)))
      throw InvariantViolation("re-expressed H_1 differs from the averaged H_0");
    if (r.sup_after > r.sup_before)
      throw InvariantViolation("sup(H_1) = " + to_string(r.sup_after) + " > sup(H_0) = " +
                               to_string(r.sup_before));
  }

  if (r.normalization_after == 0) return {std::move(raw), std::move(r)};
  return {raw.normalized(), std::move(r)};
}

namespace detail {

ChainReport chain_start(const DixmierWitness& start) {
  const Rational n0 = start.normalization();
  if (n0 == 0) throw ArgumentError("the starting witness has all h_i = 0");
  ChainReport r{
      .steps = {},
      .chain_bound = 1,
      .measured_norm = start.H().norm_inf(),
      .initial_normalization = n0,
      .initial_epsilon = start.epsilon(),
      .contradiction = false,
      .final_witness = start.normalized(),
  };
  return r;
}

void chain_step(ChainReport& r, const DixmierIteration& it) {
  // The iterated witness had normalization 1; undo the earlier rescalings.
  r.measured_norm = it.report.norm_after * r.chain_bound * r.initial_normalization;
  r.chain_bound *= 1 - it.report.k;
  if (r.measured_norm > r.chain_bound * r.initial_normalization)
    throw InvariantViolation("measured norm above the chain bound");
  r.steps.push_back(it.report);
  r.final_witness = it.witness;
  const bool all_checked = std::all_of(r.steps.begin(), r.steps.end(),
                                       [](const auto& s) { return s.averaging_checked; });
  r.contradiction = all_checked && r.initial_epsilon &&
                    *r.initial_epsilon > r.chain_bound * r.initial_normalization;
}

}  // namespace detail

std::vector<GroupElement> lattice_box(const GroupContext& ctx, const GeneratorMultiset& s,
                                      int side) {
  if (ctx.family() != Family::zd)
    throw ArgumentError("lattice boxes need a zd group (" + ctx.spec() + " given)");
  if (side < 1) throw ArgumentError("box side must be positive");
  const int d = ctx.num_generators();
  std::vector<std::int64_t> step(static_cast<std::size_t>(d), 0);
  for (const auto& e : s.entries()) {
    const auto c = e.element.data();
    int axis = -1;
    for (int i = 0; i < d; ++i) {
      if (c[static_cast<std::size_t>(i)] == 0) continue;
      if (axis >= 0)
        throw ArgumentError("element " + ctx.to_string(e.element) + " is not on an axis");
      axis = i;
    }
    if (axis < 0) continue;
    const std::int64_t v = c[static_cast<std::size_t>(axis)];
    auto& st = step[static_cast<std::size_t>(axis)];
    if (v > 0 && (st == 0 || v < st)) st = v;
  }
  for (int i = 0; i < d; ++i)
    if (step[static_cast<std::size_t>(i)] == 0)
      throw ArgumentError("multiset has no positive element on axis " + std::to_string(i));

  std::vector<GroupElement> box;
  std::vector<std::int32_t> idx(static_cast<std::size_t>(d), 0);
  for (;;) {
    std::vector<std::int32_t> coords(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < coords.size(); ++i)
      coords[i] = static_cast<std::int32_t>(idx[i] * step[i]);
    box.push_back(ctx.from_coordinates(std::move(coords)));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == side) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return box;
}

std::string to_json(const DixmierWitness& w) {
  Json j;
  j["group"] = w.context().spec();
  auto& pairs = j["pairs"] = Json::array();
  for (const auto& p : w.pairs())
    pairs.push_back({{"gamma", w.context().to_string(p.gamma)},
                     {"h", Json::parse(to_json(p.h))}});
  j["normalization"] = to_string(w.normalization());
  j["sup"] = to_string(w.sup());
  return j.dump();
}

DixmierWitness dixmier_witness_from_json(const GroupContext& ctx, const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("group").get<std::string>() != ctx.spec())
      throw ContextMismatch("JSON witness is on " + j.at("group").get<std::string>());
    std::vector<WitnessPair> pairs;
    for (const auto& p : j.at("pairs"))
      pairs.push_back({bounded_function_from_json(ctx, p.at("h").dump()),
                       ctx.parse_element(p.at("gamma").get<std::string>())});
    return DixmierWitness(ctx, std::move(pairs));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("witness JSON: ") + e.what());
  }
}

std::string to_json(const ParadoxicalDecomposition& d, const GroupContext& ctx) {
  auto pieces = [](const std::vector<BoundedFunction>& fs) {
    Json a = Json::array();
    for (const auto& f : fs) a.push_back(Json::parse(to_json(f)));
    return a;
  };
  auto words = [&](const std::vector<GroupElement>& gs) {
    Json a = Json::array();
    for (const auto& g : gs) a.push_back(ctx.to_string(g));
    return a;
  };
  Json j;
  j["group"] = ctx.spec();
  j["A"] = pieces(d.a_pieces);
  j["B"] = pieces(d.b_pieces);
  j["C"] = Json::parse(to_json(d.c_piece));
  j["gammas"] = words(d.gammas);
  j["etas"] = words(d.etas);
  j["tarski_count"] = d.tarski_count();
  return j.dump();
}

}  // namespace percolab
