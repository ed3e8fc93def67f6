#include "percolab/multiset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <unordered_map>

#include "percolab/errors.hpp"

namespace percolab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

}  // namespace

GeneratorMultiset::GeneratorMultiset(std::vector<GroupElement> elements) {
  entries_.reserve(elements.size());
  for (auto& g : elements) entries_.push_back({std::move(g), 1});
  size_ = entries_.size();
}

GeneratorMultiset::GeneratorMultiset(std::vector<MultisetEntry> entries)
    : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.multiplicity == 0)
      throw ArgumentError("multiset entries need a positive multiplicity");
    if (size_ > std::numeric_limits<std::uint64_t>::max() - e.multiplicity)
      throw BudgetError("multiset size overflows 64 bits");
    size_ += e.multiplicity;
  }
}

std::vector<MultisetEntry> GeneratorMultiset::support() const {
  std::map<GroupElement, std::uint64_t> counts;
  for (const auto& e : entries_) counts[e.element] += e.multiplicity;
  std::vector<MultisetEntry> out;
  out.reserve(counts.size());
  for (auto& [g, m] : counts) out.push_back({g, m});
  return out;
}

std::uint64_t GeneratorMultiset::multiplicity(const GroupElement& g) const {
  std::uint64_t m = 0;
  for (const auto& e : entries_)
    if (e.element == g) m += e.multiplicity;
  return m;
}

Rational GeneratorMultiset::weight(const GroupElement& g) const {
  if (size_ == 0) return Rational(0);
  return Rational(BigInt(multiplicity(g)), BigInt(size_));
}

bool GeneratorMultiset::is_symmetric(const GroupContext& ctx) const {
  std::map<GroupElement, std::uint64_t> counts;
  for (const auto& e : entries_) counts[e.element] += e.multiplicity;
  for (const auto& [g, m] : counts) {
    auto it = counts.find(ctx.inv(g));
    if (it == counts.end() || it->second != m) return false;
  }
  return true;
}

std::vector<std::size_t> GeneratorMultiset::inverse_pairing(
    const GroupContext& ctx) const {
  std::map<GroupElement, std::vector<std::size_t>> occurrences;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    occurrences[entries_[i].element].push_back(i);
  std::vector<std::size_t> partner(entries_.size());
  for (const auto& [g, idx] : occurrences) {
    auto it = occurrences.find(ctx.inv(g));
    if (it == occurrences.end() || it->second.size() != idx.size())
      throw ArgumentError("multiset is not symmetric entry by entry");
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::size_t j = it->second[k];
      if (entries_[idx[k]].multiplicity != entries_[j].multiplicity)
        throw ArgumentError("paired entries carry different multiplicities");
      partner[idx[k]] = j;
    }
  }
  return partner;
}

bool GeneratorMultiset::same_multiset(const GeneratorMultiset& other) const {
  auto a = support();
  auto b = other.support();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].element != b[i].element || a[i].multiplicity != b[i].multiplicity)
      return false;
  return true;
}

GeneratorMultiset symmetrize(const GroupContext& ctx, const GeneratorMultiset& s) {
  std::vector<MultisetEntry> out = s.entries();
  out.reserve(2 * s.num_entries());
  for (const auto& e : s.entries()) out.push_back({ctx.inv(e.element), e.multiplicity});
  return GeneratorMultiset(std::move(out));
}

GeneratorMultiset symmetric_closure(const GroupContext& ctx,
                                    const GeneratorMultiset& s) {
  return s.is_symmetric(ctx) ? s : symmetrize(ctx, s);
}

GeneratorMultiset multiset_power(const GroupContext& ctx,
                                 const GeneratorMultiset& s, int n,
                                 PowerBudget budget) {
  if (n < 1) throw ArgumentError("multiset power needs n >= 1");
  if (s.empty()) throw ArgumentError("multiset power of an empty multiset");
  const auto base = s.support();
  std::unordered_map<GroupElement, std::uint64_t, GroupElementHash> current;
  for (const auto& e : base) current[e.element] = e.multiplicity;
  std::uint64_t nominal = s.size();
  for (int step = 2; step <= n; ++step) {
    if (nominal > std::numeric_limits<std::uint64_t>::max() / s.size())
      throw BudgetError("|S|^n overflows 64 bits at n = " + std::to_string(step));
    nominal *= s.size();
    std::unordered_map<GroupElement, std::uint64_t, GroupElementHash> next;
    next.reserve(current.size() * base.size());
    for (const auto& [g, count] : current) {
      for (const auto& e : base) {
        next[ctx.mul(g, e.element)] += count * e.multiplicity;
        if (next.size() > budget.max_support)
          throw BudgetError("support of S^" + std::to_string(n) +
                            " exceeds the configured guard of " +
                            std::to_string(budget.max_support));
      }
    }
    current = std::move(next);
  }
  std::vector<MultisetEntry> entries;
  entries.reserve(current.size());
  for (auto& [g, m] : current) entries.push_back({g, m});
  std::sort(entries.begin(), entries.end(),
            [](const MultisetEntry& a, const MultisetEntry& b) {
              return a.element < b.element;
            });
  GeneratorMultiset out(std::move(entries));
  if (out.size() != nominal)
    throw InvariantViolation("collapsed power lost mass");
  return out;
}

GeneratorMultiset standard_generators(const GroupContext& ctx) {
  std::vector<GroupElement> els;
  for (int i = 0; i < ctx.num_generators(); ++i) {
    els.push_back(ctx.generator(i, 1));
    const bool involution = ctx.family() == Family::free_product_cyclic &&
                            ctx.cyclic_orders()[i] == 2;
    if (!involution) els.push_back(ctx.generator(i, -1));
  }
  return GeneratorMultiset(std::move(els));
}

GeneratorMultiset parse_multiset(const GroupContext& ctx, std::string_view spec) {
  spec = trim(spec);
  int power = 1;
  // Trailing ^n applies to the whole multiset.
  std::string_view body = spec;
  if (auto caret = spec.rfind('^');
      caret != std::string_view::npos &&
      (spec.substr(0, caret) == "std" || trim(spec.substr(0, caret)).ends_with(']'))) {
    auto exp = trim(spec.substr(caret + 1));
    auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), power);
    if (ec != std::errc() || ptr != exp.data() + exp.size() || power < 1)
      throw ParseError("bad multiset power in '" + std::string(spec) + "'");
    body = trim(spec.substr(0, caret));
  }
  GeneratorMultiset base;
  if (body == "std") {
    base = standard_generators(ctx);
  } else {
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
      throw ParseError("multiset literal must look like [a, a^-1, b]: '" +
                       std::string(spec) + "'");
    auto inner = body.substr(1, body.size() - 2);
    std::vector<GroupElement> els;
    std::size_t pos = 0;
    int depth = 0;
    std::size_t start = 0;
    for (pos = 0; pos <= inner.size(); ++pos) {
      const char c = pos < inner.size() ? inner[pos] : ',';
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        auto token = trim(inner.substr(start, pos - start));
        if (token.empty()) {
          if (pos == inner.size() && els.empty()) break;
          throw ParseError("empty multiset entry in '" + std::string(spec) + "'");
        }
        els.push_back(ctx.parse_element(token));
        start = pos + 1;
      }
    }
    if (els.empty()) throw ParseError("multiset literal is empty");
    base = GeneratorMultiset(std::move(els));
  }
  return power == 1 ? base : multiset_power(ctx, base, power);
}

std::string to_string(const GroupContext& ctx, const GeneratorMultiset& s) {
  std::string out = "[";
  bool first = true;
  for (const auto& e : s.entries()) {
    if (!first) out += ", ";
    first = false;
    out += ctx.to_string(e.element);
    if (e.multiplicity != 1) out += " x" + std::to_string(e.multiplicity);
  }
  return out + "]";
}

}  // namespace percolab
