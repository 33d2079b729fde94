/**
 * @file bits.hpp
 * @brief Fixed-length bit strings used as secrets and queries.
 *
 * Position 1 is the lowest (rightmost) bit. Storage index 0 holds position 1,
 * and text is rendered most-significant first, so "0011" has positions 1 and
 * 2 set.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsb/errors.hpp"

namespace bsb {

template <class Tag>
class BitString {
 public:
  /// All-zero string of length n (n >= 1).
  explicit BitString(std::size_t n) : bits_(check_length(n), 0) {}

  /// Takes storage order: bits[0] is position 1.
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    check_length(bits_.size());
    for (auto b : bits_) {
      if (b > 1) throw DomainError("bit value must be 0 or 1");
    }
  }

  /// Parses text written most-significant first, e.g. "100000000000".
  static BitString parse(std::string_view text) {
    if (text.empty()) throw DomainError("empty bit string");
    std::vector<std::uint8_t> bits(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[text.size() - 1 - i];
      if (c != '0' && c != '1') {
        throw DomainError("bit string may only contain '0' and '1': " + std::string(text));
      }
      bits[i] = static_cast<std::uint8_t>(c - '0');
    }
    return BitString(std::move(bits));
  }

  /// Bit i of `mask` becomes position i+1.
  static BitString from_mask(std::uint64_t mask, std::size_t n) {
    if (n > 64) throw DomainError("mask conversion supports at most 64 bits");
    BitString out(n);
    for (std::size_t i = 0; i < n; ++i) out.bits_[i] = (mask >> i) & 1U;
    if (n < 64 && (mask >> n) != 0) throw DomainError("mask has bits beyond length");
    return out;
  }

  /// String of length n with the given 1-based positions set.
  static BitString from_positions(std::size_t n, std::span<const std::size_t> positions) {
    BitString out(n);
    for (auto p : positions) out.set(p, true);
    return out;
  }

  template <class OtherTag>
  static BitString from(const BitString<OtherTag>& other) {
    return BitString(std::vector<std::uint8_t>(other.bits().begin(), other.bits().end()));
  }

  std::size_t size() const noexcept { return bits_.size(); }

  /// 1-based position access.
  bool at(std::size_t position) const {
    return bits_[index_of(position)] != 0;
  }

  void set(std::size_t position, bool value) {
    bits_[index_of(position)] = value ? 1 : 0;
  }

  /// Storage order view; element 0 is position 1.
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  /// Number of 1 bits.
  std::size_t weight() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  /// Ascending 1-based positions of the 1 bits.
  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out.push_back(i + 1);
    }
    return out;
  }

  std::uint64_t to_mask() const {
    if (bits_.size() > 64) throw DomainError("mask conversion supports at most 64 bits");
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) mask |= std::uint64_t{bits_[i]} << i;
    return mask;
  }

  std::string str() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out[bits_.size() - 1 - i] = '1';
    }
    return out;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

  friend std::ostream& operator<<(std::ostream& os, const BitString& b) { return os << b.str(); }

 private:
  static std::size_t check_length(std::size_t n) {
    if (n == 0) throw DomainError("bit string length must be at least 1");
    return n;
  }

  std::size_t index_of(std::size_t position) const {
    if (position == 0 || position > bits_.size()) {
      throw DomainError("position " + std::to_string(position) + " outside 1.." +
                        std::to_string(bits_.size()));
    }
    return position - 1;
  }

  std::vector<std::uint8_t> bits_;
};

struct SecretTag {};
struct QueryTag {};

/// Hidden string; 1 marks a defective position.
using SecretString = BitString<SecretTag>;
/// Selects which positions a single test touches.
using QueryString = BitString<QueryTag>;

}  // namespace bsb
