#include "fsrkit/bitvec.hpp"

#include <stdexcept>

namespace fsrkit {

BitVec::BitVec(std::size_t length, std::uint64_t value) : length_(length), value_(value) {
  if (length > kMaxBits) throw std::invalid_argument("BitVec: length exceeds 64 bits");
  if (value & ~mask(length)) throw std::invalid_argument("BitVec: value wider than length");
}

BitVec BitVec::from_bits(std::initializer_list<int> bits) {
  std::vector<std::uint8_t> v;
  v.reserve(bits.size());
  for (int b : bits) v.push_back(static_cast<std::uint8_t>(b != 0));
  return from_bits(v);
}

BitVec BitVec::from_bits(std::span<const std::uint8_t> bits) {
  if (bits.size() > kMaxBits) throw std::invalid_argument("BitVec: length exceeds 64 bits");
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j]) v |= std::uint64_t{1} << j;
  }
  return BitVec(bits.size(), v);
}

BitVec BitVec::with(std::size_t i, bool bit) const {
  if (i >= length_) throw std::out_of_range("BitVec::with");
  std::uint64_t v = bit ? (value_ | (std::uint64_t{1} << i)) : (value_ & ~(std::uint64_t{1} << i));
  return BitVec(length_, v);
}

std::vector<std::uint8_t> BitVec::bits() const {
  std::vector<std::uint8_t> out(length_);
  for (std::size_t j = 0; j < length_; ++j) out[j] = (*this)[j];
  return out;
}

BitVec BitVec::hbit(std::size_t k) const {
  if (k > length_) throw std::out_of_range("BitVec::hbit");
  return BitVec(k, value_ & mask(k));
}

BitVec BitVec::lbit(std::size_t k) const {
  if (k > length_) throw std::out_of_range("BitVec::lbit");
  if (k == 0) return BitVec();
  return BitVec(k, value_ >> (length_ - k));
}

BitVec BitVec::concat(const BitVec& tail) const {
  if (length_ + tail.length_ > kMaxBits) throw std::invalid_argument("BitVec::concat: too long");
  return BitVec(length_ + tail.length_, value_ | (tail.length_ ? tail.value_ << length_ : 0));
}

std::string BitVec::to_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < length_; ++j) {
    if (j) s += ',';
    s += (*this)[j] ? '1' : '0';
  }
  s += ')';
  return s;
}

}  // namespace fsrkit
