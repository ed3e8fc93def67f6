#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace percolab {

enum class Family {
  free_group,           // free:k
  zd,                   // zd:d
  free_product_cyclic,  // fpc:n1,n2,...
};

class GroupContext;

// An element in canonical normal form.
//
// Free families (free:k and fpc) store a reduced token sequence. For free:k a
// token is a signed generator index +-(i+1). For fpc a token is one syllable
// x_i^e with 1 <= e < n_i, packed by GroupContext. zd stores the coordinate
// vector. Equal elements have identical data, so hashing and ordering are
// exact.
class GroupElement {
 public:
  GroupElement() = default;

  std::span<const std::int32_t> data() const { return data_; }
  std::uint64_t context_tag() const { return tag_; }
  std::size_t token_count() const { return data_.size(); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend std::strong_ordering operator<=>(const GroupElement& a,
                                          const GroupElement& b);

  std::size_t hash() const;

 private:
  friend class GroupContext;
  GroupElement(std::uint64_t tag, std::vector<std::int32_t> data)
      : tag_(tag), data_(std::move(data)) {}

  std::uint64_t tag_ = 0;
  std::vector<std::int32_t> data_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

// One of the supported finitely generated group families, with exact
// multiplication, inversion and parsing. Cheap to copy.
class GroupContext {
 public:
  static GroupContext free_group(int rank);
  static GroupContext zd(int dimension);
  static GroupContext free_product_cyclic(std::vector<int> orders);

  // `free:k`, `zd:d`, `fpc:n1,n2,...`. Throws ParseError.
  static GroupContext parse(std::string_view spec);

  Family family() const { return family_; }
  const std::string& spec() const { return spec_; }
  std::uint64_t tag() const { return tag_; }
  int num_generators() const { return rank_; }
  const std::vector<int>& cyclic_orders() const { return orders_; }

  bool is_free_family() const { return family_ != Family::zd; }
  bool is_abelian() const;
  bool is_finite() const;
  // Group order for finite groups.
  std::optional<std::uint64_t> order() const;

  GroupElement identity() const;
  // x_i^exponent (exponent reduced modulo the cyclic order for fpc).
  GroupElement generator(int index, int exponent = 1) const;
  GroupElement from_coordinates(std::vector<std::int32_t> coords) const;

  GroupElement mul(const GroupElement& g, const GroupElement& h) const;
  GroupElement inv(const GroupElement& g) const;
  GroupElement pow(const GroupElement& g, int n) const;

  bool is_identity(const GroupElement& g) const;
  // Throws ContextMismatch unless g was built by an equal context.
  void check(const GroupElement& g) const;

  // Geodesic length for the standard symmetric generators (free:k letters,
  // sum of min(e, n-e) over fpc syllables, L1 norm on zd).
  int word_length(const GroupElement& g) const;
  // Number of normal-form tokens; the unit of prefix depth.
  int token_length(const GroupElement& g) const;

  // Free families: the element made of the first `n` tokens of g.
  GroupElement prefix(const GroupElement& g, std::size_t n) const;
  // Free families: the tokens that may follow `last` (0 = start of word) in
  // a reduced word.
  std::vector<std::int32_t> successor_tokens(std::int32_t last) const;
  // Free families: builds an element from tokens assumed already reduced.
  GroupElement from_reduced_tokens(std::vector<std::int32_t> tokens) const;
  // Free families: all elements with token length <= depth, in shortlex
  // order.
  std::vector<GroupElement> words_up_to(int depth) const;
  // Free families: number of elements with token length <= depth
  // (saturates at UINT64_MAX).
  std::uint64_t count_words_up_to(int depth) const;

  std::string generator_name(int index) const;
  std::string to_string(const GroupElement& g) const;
  // Words like `ab^-1a`, `a^2`, `e`; zd also accepts `(1,-2)`.
  GroupElement parse_element(std::string_view text) const;

  friend bool operator==(const GroupContext& a, const GroupContext& b) {
    return a.tag_ == b.tag_;
  }

 private:
  GroupContext(Family family, int rank, std::vector<int> orders);

  GroupElement make(std::vector<std::int32_t> data) const {
    return GroupElement(tag_, std::move(data));
  }
  std::int32_t syllable_token(int gen, int exponent) const;
  int token_generator(std::int32_t token) const;
  int token_exponent(std::int32_t token) const;
  void append_reduced(std::vector<std::int32_t>& word, std::int32_t token) const;

  Family family_ = Family::free_group;
  int rank_ = 0;
  std::vector<int> orders_;
  std::string spec_;
  std::uint64_t tag_ = 0;
};

}  // namespace percolab
