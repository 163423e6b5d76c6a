#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace treestat {

/// Fixed-width bitset whose width is chosen at construction. Values are
/// ordered by the numeric value of the bit pattern (bit 0 is the least
/// significant).
class Bitset {
 public:
  Bitset() = default;

  explicit Bitset(std::size_t bit_count)
      : bit_count_(bit_count), words_((bit_count + 63) / 64, 0) {}

  std::size_t bit_count() const { return bit_count_; }

  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

  void reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool any() const {
    for (auto w : words_)
      if (w != 0) return true;
    return false;
  }

  bool none() const { return !any(); }

  /// True when no bit is set in both operands.
  bool disjoint_with(const Bitset& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & other.words_[k]) return false;
    return true;
  }

  bool is_subset_of(const Bitset& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }

  /// Complement within the fixed width.
  Bitset complement() const {
    Bitset out(bit_count_);
    for (std::size_t k = 0; k < words_.size(); ++k) out.words_[k] = ~words_[k];
    out.mask_tail();
    return out;
  }

  Bitset operator|(const Bitset& other) const {
    Bitset out(bit_count_);
    for (std::size_t k = 0; k < words_.size(); ++k)
      out.words_[k] = words_[k] | other.words_[k];
    return out;
  }

  Bitset operator&(const Bitset& other) const {
    Bitset out(bit_count_);
    for (std::size_t k = 0; k < words_.size(); ++k)
      out.words_[k] = words_[k] & other.words_[k];
    return out;
  }

  bool operator==(const Bitset& other) const = default;

  /// Numeric order of the bit pattern; widths compare first so that mixed
  /// universes never interleave.
  std::strong_ordering operator<=>(const Bitset& other) const {
    if (auto c = bit_count_ <=> other.bit_count_; c != 0) return c;
    for (std::size_t k = words_.size(); k-- > 0;) {
      if (auto c = words_[k] <=> other.words_[k]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  void mask_tail() {
    const std::size_t used = bit_count_ & 63;
    if (used != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << used) - 1;
  }

  std::size_t bit_count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace treestat
