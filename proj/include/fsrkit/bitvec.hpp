#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fsrkit {

/// Fixed-length bit vector (a_0, ..., a_{m-1}) identified with the integer
/// sum 2^j * a_j, so a_0 is the least significant bit. Lengths up to 64.
class BitVec {
 public:
  static constexpr std::size_t kMaxBits = 64;

  BitVec() = default;
  BitVec(std::size_t length, std::uint64_t value);

  static BitVec from_bits(std::initializer_list<int> bits);
  static BitVec from_bits(std::span<const std::uint8_t> bits);
  static BitVec zeros(std::size_t length) { return BitVec(length, 0); }
  static BitVec ones(std::size_t length) { return BitVec(length, mask(length)); }
  /// (1, 0, ..., 0)
  static BitVec unit(std::size_t length) { return BitVec(length, length ? 1u : 0u); }

  std::size_t size() const { return length_; }
  std::uint64_t value() const { return value_; }
  bool operator[](std::size_t i) const { return (value_ >> i) & 1u; }
  BitVec with(std::size_t i, bool bit) const;
  std::vector<std::uint8_t> bits() const;

  /// Flips a_0.
  BitVec conjugate() const { return BitVec(length_, value_ ^ (length_ ? 1u : 0u)); }
  /// Flips every bit.
  BitVec complement() const { return BitVec(length_, value_ ^ mask(length_)); }
  /// First k bits (a_0, ..., a_{k-1}).
  BitVec hbit(std::size_t k) const;
  /// Last k bits (a_{m-k}, ..., a_{m-1}).
  BitVec lbit(std::size_t k) const;
  /// this || tail
  BitVec concat(const BitVec& tail) const;

  std::size_t popcount() const { return static_cast<std::size_t>(std::popcount(value_)); }

  /// "(a_0,a_1,...)"
  std::string to_string() const;

  friend bool operator==(const BitVec&, const BitVec&) = default;
  friend std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) {
    if (auto c = a.value_ <=> b.value_; c != 0) return c;
    return a.length_ <=> b.length_;
  }

  static constexpr std::uint64_t mask(std::size_t length) {
    return length >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << length) - 1);
  }

 private:
  std::size_t length_ = 0;
  std::uint64_t value_ = 0;
};

}  // namespace fsrkit
