#include "percolab/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include "percolab/errors.hpp"
#include "percolab/rational.hpp"

namespace percolab {

namespace {

constexpr int kMaxRank = 26;
constexpr int kMaxOrder = 0xffff;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > std::numeric_limits<std::uint64_t>::max() / b
             ? std::numeric_limits<std::uint64_t>::max()
             : a * b;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("expected an integer in " + std::string(what) + ": '" +
                     std::string(s) + "'");
  return value;
}

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
  if (auto c = a.tag_ <=> b.tag_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.data_.begin(), a.data_.end(),
                                                b.data_.begin(), b.data_.end());
}

std::size_t GroupElement::hash() const {
  std::uint64_t h = tag_;
  for (std::int32_t v : data_)
    h = mix64(h ^ static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ull;
  return static_cast<std::size_t>(h);
}

GroupContext::GroupContext(Family family, int rank, std::vector<int> orders)
    : family_(family), rank_(rank), orders_(std::move(orders)) {
  switch (family_) {
    case Family::free_group:
      spec_ = "free:" + std::to_string(rank_);
      break;
    case Family::zd:
      spec_ = "zd:" + std::to_string(rank_);
      break;
    case Family::free_product_cyclic: {
      spec_ = "fpc:";
      for (std::size_t i = 0; i < orders_.size(); ++i) {
        if (i) spec_ += ',';
        spec_ += std::to_string(orders_[i]);
      }
      break;
    }
  }
  tag_ = fnv1a(spec_) | 1u;
}

GroupContext GroupContext::free_group(int rank) {
  if (rank < 1 || rank > kMaxRank)
    throw ArgumentError("free group rank must be in [1, 26]");
  return GroupContext(Family::free_group, rank, {});
}

GroupContext GroupContext::zd(int dimension) {
  if (dimension < 1 || dimension > kMaxRank)
    throw ArgumentError("zd dimension must be in [1, 26]");
  return GroupContext(Family::zd, dimension, {});
}

GroupContext GroupContext::free_product_cyclic(std::vector<int> orders) {
  if (orders.empty() || orders.size() > static_cast<std::size_t>(kMaxRank))
    throw ArgumentError("fpc needs between 1 and 26 cyclic factors");
  for (int n : orders)
    if (n < 2 || n > kMaxOrder)
      throw ArgumentError("fpc cyclic orders must be in [2, 65535]");
  const int rank = static_cast<int>(orders.size());
  return GroupContext(Family::free_product_cyclic, rank, std::move(orders));
}

GroupContext GroupContext::parse(std::string_view spec) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("group spec must look like free:k, zd:d or fpc:n1,n2,...");
  const auto family = spec.substr(0, colon);
  const auto args = spec.substr(colon + 1);
  try {
    if (family == "free") return free_group(parse_int(args, "free:k"));
    if (family == "zd") return zd(parse_int(args, "zd:d"));
    if (family == "fpc") {
      std::vector<int> orders;
      std::size_t pos = 0;
      while (pos <= args.size()) {
        auto next = args.find(',', pos);
        if (next == std::string_view::npos) next = args.size();
        orders.push_back(parse_int(args.substr(pos, next - pos), "fpc orders"));
        pos = next + 1;
      }
      return free_product_cyclic(std::move(orders));
    }
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown group family '" + std::string(family) + "'");
}

bool GroupContext::is_abelian() const {
  switch (family_) {
    case Family::zd:
      return true;
    case Family::free_group:
      return rank_ == 1;
    case Family::free_product_cyclic:
      return rank_ == 1;
  }
  return false;
}

bool GroupContext::is_finite() const {
  return family_ == Family::free_product_cyclic && rank_ == 1;
}

std::optional<std::uint64_t> GroupContext::order() const {
  if (!is_finite()) return std::nullopt;
  return static_cast<std::uint64_t>(orders_.front());
}

std::int32_t GroupContext::syllable_token(int gen, int exponent) const {
  return ((gen + 1) << 16) | exponent;
}

int GroupContext::token_generator(std::int32_t token) const {
  if (family_ == Family::free_group) return std::abs(token) - 1;
  return (token >> 16) - 1;
}

int GroupContext::token_exponent(std::int32_t token) const {
  if (family_ == Family::free_group) return token > 0 ? 1 : -1;
  return token & 0xffff;
}

void GroupContext::append_reduced(std::vector<std::int32_t>& word,
                                  std::int32_t token) const {
  if (family_ == Family::free_group) {
    if (!word.empty() && word.back() == -token)
      word.pop_back();
    else
      word.push_back(token);
    return;
  }
  const int gen = token_generator(token);
  if (!word.empty() && token_generator(word.back()) == gen) {
    const int n = orders_[gen];
    const int e = (token_exponent(word.back()) + token_exponent(token)) % n;
    word.pop_back();
    if (e != 0) word.push_back(syllable_token(gen, e));
    return;
  }
  word.push_back(token);
}

GroupElement GroupContext::identity() const {
  if (family_ == Family::zd) return make(std::vector<std::int32_t>(rank_, 0));
  return make({});
}

GroupElement GroupContext::generator(int index, int exponent) const {
  if (index < 0 || index >= rank_)
    throw ArgumentError("generator index out of range for " + spec_);
  switch (family_) {
    case Family::zd: {
      std::vector<std::int32_t> c(rank_, 0);
      c[index] = exponent;
      return make(std::move(c));
    }
    case Family::free_group: {
      std::vector<std::int32_t> w(std::abs(exponent),
                                  exponent > 0 ? index + 1 : -(index + 1));
      return make(std::move(w));
    }
    case Family::free_product_cyclic: {
      const int e = mod(exponent, orders_[index]);
      if (e == 0) return identity();
      return make({syllable_token(index, e)});
    }
  }
  return identity();
}

GroupElement GroupContext::from_coordinates(
    std::vector<std::int32_t> coords) const {
  if (family_ != Family::zd)
    throw ArgumentError("coordinates only make sense on zd groups");
  if (coords.size() != static_cast<std::size_t>(rank_))
    throw ArgumentError("coordinate vector has the wrong dimension for " +
                        spec_);
  return make(std::move(coords));
}

void GroupContext::check(const GroupElement& g) const {
  if (g.context_tag() != tag_)
    throw ContextMismatch("element does not belong to " + spec_);
}

GroupElement GroupContext::mul(const GroupElement& g,
                               const GroupElement& h) const {
  check(g);
  check(h);
  if (family_ == Family::zd) {
    std::vector<std::int32_t> c(g.data_);
    for (int i = 0; i < rank_; ++i) c[i] += h.data_[i];
    return make(std::move(c));
  }
  std::vector<std::int32_t> w;
  w.reserve(g.data_.size() + h.data_.size());
  w = g.data_;
  for (std::int32_t t : h.data_) append_reduced(w, t);
  return make(std::move(w));
}

GroupElement GroupContext::inv(const GroupElement& g) const {
  check(g);
  std::vector<std::int32_t> w(g.data_.rbegin(), g.data_.rend());
  switch (family_) {
    case Family::zd:
      w.assign(g.data_.begin(), g.data_.end());
      for (auto& c : w) c = -c;
      break;
    case Family::free_group:
      for (auto& t : w) t = -t;
      break;
    case Family::free_product_cyclic:
      for (auto& t : w) {
        const int gen = token_generator(t);
        t = syllable_token(gen, orders_[gen] - token_exponent(t));
      }
      break;
  }
  return make(std::move(w));
}

GroupElement GroupContext::pow(const GroupElement& g, int n) const {
  GroupElement base = n < 0 ? inv(g) : g;
  GroupElement result = identity();
  for (int i = 0; i < std::abs(n); ++i) result = mul(result, base);
  return result;
}

bool GroupContext::is_identity(const GroupElement& g) const {
  check(g);
  if (family_ == Family::zd)
    return std::all_of(g.data_.begin(), g.data_.end(),
                       [](std::int32_t c) { return c == 0; });
  return g.data_.empty();
}

int GroupContext::word_length(const GroupElement& g) const {
  check(g);
  int len = 0;
  switch (family_) {
    case Family::zd:
      for (auto c : g.data_) len += std::abs(c);
      break;
    case Family::free_group:
      len = static_cast<int>(g.data_.size());
      break;
    case Family::free_product_cyclic:
      for (auto t : g.data_) {
        const int n = orders_[token_generator(t)];
        const int e = token_exponent(t);
        len += std::min(e, n - e);
      }
      break;
  }
  return len;
}

int GroupContext::token_length(const GroupElement& g) const {
  check(g);
  if (family_ == Family::zd) return word_length(g);
  return static_cast<int>(g.data_.size());
}

GroupElement GroupContext::prefix(const GroupElement& g, std::size_t n) const {
  check(g);
  if (family_ == Family::zd)
    throw ArgumentError("prefixes are only defined for free families");
  n = std::min(n, g.data_.size());
  return make(std::vector<std::int32_t>(g.data_.begin(), g.data_.begin() + n));
}

std::vector<std::int32_t> GroupContext::successor_tokens(
    std::int32_t last) const {
  std::vector<std::int32_t> out;
  if (family_ == Family::free_group) {
    for (int i = rank_; i >= 1; --i)
      if (last != i) out.push_back(-i);
    for (int i = 1; i <= rank_; ++i)
      if (last != -i) out.push_back(i);
    return out;
  }
  if (family_ == Family::free_product_cyclic) {
    const int last_gen = last == 0 ? -1 : token_generator(last);
    for (int gen = 0; gen < rank_; ++gen) {
      if (gen == last_gen) continue;
      for (int e = 1; e < orders_[gen]; ++e) out.push_back(syllable_token(gen, e));
    }
    return out;
  }
  throw ArgumentError("successor tokens are only defined for free families");
}

GroupElement GroupContext::from_reduced_tokens(
    std::vector<std::int32_t> tokens) const {
  if (family_ == Family::zd)
    throw ArgumentError("token words are only defined for free families");
  return make(std::move(tokens));
}

std::vector<GroupElement> GroupContext::words_up_to(int depth) const {
  if (family_ == Family::zd)
    throw ArgumentError("word enumeration is only defined for free families");
  std::vector<GroupElement> out{identity()};
  std::size_t level_begin = 0;
  for (int r = 1; r <= depth; ++r) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const std::int32_t last = out[i].data_.empty() ? 0 : out[i].data_.back();
      for (std::int32_t t : successor_tokens(last)) {
        std::vector<std::int32_t> w = out[i].data_;
        w.push_back(t);
        out.push_back(make(std::move(w)));
      }
    }
    level_begin = level_end;
  }
  return out;
}

std::uint64_t GroupContext::count_words_up_to(int depth) const {
  if (family_ == Family::zd)
    throw ArgumentError("word counting is only defined for free families");
  std::uint64_t total = 1;
  if (family_ == Family::free_group) {
    std::uint64_t level = 1;
    for (int r = 1; r <= depth; ++r) {
      level = saturating_mul(level, r == 1 ? 2 * rank_ : 2 * rank_ - 1);
      total = saturating_add(total, level);
    }
    return total;
  }
  // Count by the generator of the last syllable.
  std::vector<std::uint64_t> by_last(rank_, 0);
  std::uint64_t level_total = 1;
  for (int r = 1; r <= depth; ++r) {
    std::vector<std::uint64_t> next(rank_, 0);
    std::uint64_t next_total = 0;
    for (int gen = 0; gen < rank_; ++gen) {
      const std::uint64_t prev = r == 1 ? 1 : level_total - by_last[gen];
      next[gen] = saturating_mul(prev, orders_[gen] - 1);
      next_total = saturating_add(next_total, next[gen]);
    }
    by_last = std::move(next);
    level_total = next_total;
    total = saturating_add(total, level_total);
  }
  return total;
}

std::string GroupContext::generator_name(int index) const {
  return std::string(1, static_cast<char>('a' + index));
}

std::string GroupContext::to_string(const GroupElement& g) const {
  check(g);
  std::ostringstream os;
  if (family_ == Family::zd) {
    os << '(';
    for (std::size_t i = 0; i < g.data_.size(); ++i) {
      if (i) os << ',';
      os << g.data_[i];
    }
    os << ')';
    return os.str();
  }
  if (g.data_.empty()) return rank_ <= 4 ? "e" : "1";
  auto emit = [&](int gen, int exponent) {
    os << generator_name(gen);
    if (exponent != 1) os << '^' << exponent;
  };
  if (family_ == Family::free_group) {
    std::size_t i = 0;
    while (i < g.data_.size()) {
      std::size_t j = i;
      while (j < g.data_.size() && g.data_[j] == g.data_[i]) ++j;
      const int run = static_cast<int>(j - i);
      emit(std::abs(g.data_[i]) - 1, g.data_[i] > 0 ? run : -run);
      i = j;
    }
    return os.str();
  }
  for (std::int32_t t : g.data_) {
    const int gen = token_generator(t);
    const int n = orders_[gen];
    const int e = token_exponent(t);
    emit(gen, 2 * e <= n ? e : e - n);
  }
  return os.str();
}

GroupElement GroupContext::parse_element(std::string_view text) const {
  const std::string_view original = text;
  text = trim(text);
  if (text.empty()) throw ParseError("empty group element");
  if (text == "1" || (text == "e" && rank_ <= 4) || text == "id")
    return identity();

  GroupElement result = identity();
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("cannot parse element '" + std::string(original) +
                     "' in " + spec_ + ": " + why);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    if (c == '(') {
      if (family_ != Family::zd) fail("coordinate literals need a zd group");
      const auto close = text.find(')', i);
      if (close == std::string_view::npos) fail("unbalanced parenthesis");
      std::vector<std::int32_t> coords;
      auto body = text.substr(i + 1, close - i - 1);
      std::size_t pos = 0;
      while (pos <= body.size()) {
        auto next = body.find(',', pos);
        if (next == std::string_view::npos) next = body.size();
        coords.push_back(parse_int(body.substr(pos, next - pos), "coordinates"));
        pos = next + 1;
      }
      if (coords.size() != static_cast<std::size_t>(rank_))
        fail("wrong number of coordinates");
      result = mul(result, make(std::move(coords)));
      i = close + 1;
      continue;
    }
    if (c < 'a' || c >= 'a' + rank_) fail(std::string("unknown generator '") + c + "'");
    const int gen = c - 'a';
    ++i;
    int exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool paren = i < text.size() && text[i] == '(';
      if (paren) ++i;
      std::size_t j = i;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      exponent = parse_int(text.substr(i, j - i), "exponent");
      i = j;
      if (paren) {
        if (i >= text.size() || text[i] != ')') fail("unbalanced exponent parenthesis");
        ++i;
      }
    }
    result = mul(result, generator(gen, exponent));
  }
  return result;
}

}  // namespace percolab
