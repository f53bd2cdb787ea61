#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace mmw {

/// 32-bit preamble P(1)..P(32); P(1) is the most significant bit and is
/// transmitted first.
struct Preamble {
  std::uint32_t word = 0x1ACFFC1Du;

  /// P(i), 1 <= i <= 32.
  int bit(int i) const { return static_cast<int>((word >> (32 - i)) & 1u); }

  std::array<std::uint8_t, 4> bytes() const {
    return {static_cast<std::uint8_t>(word >> 24), static_cast<std::uint8_t>(word >> 16),
            static_cast<std::uint8_t>(word >> 8), static_cast<std::uint8_t>(word)};
  }

  /// Exactly 8 hex digits, optional 0x prefix. Throws std::invalid_argument.
  static Preamble from_hex(std::string_view text);
  std::string to_hex() const;

  friend bool operator==(const Preamble&, const Preamble&) = default;
};

inline constexpr Preamble kDefaultPreamble{0x1ACFFC1Du};

}  // namespace mmw
