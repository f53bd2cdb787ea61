#pragma once

// Additive scrambler: the frame body is XORed with a fixed 8-byte mask made
// of one period of a degree-6 m-sequence plus one padding bit.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mmw::scrambler {

struct LfsrParams {
  /// Feedback taps as a bit mask of x^6 + x + 1 without the leading term:
  /// bit i set means the x^i coefficient is one.
  unsigned feedback = 0b000011;
  unsigned degree = 6;
  unsigned seed = 0b111111;
  /// Value of the 64th bit appended after the 63-bit period.
  std::uint8_t pad_bit = 0;
};

/// 64 bits, sequence bit 1 is the MSB of byte 0.
using Sequence = std::array<std::uint8_t, 8>;

/// Raw LFSR output, one bit per element, `count` bits long.
std::vector<std::uint8_t> lfsr_bits(const LfsrParams& params, std::size_t count);

Sequence generate_sequence(const LfsrParams& params = {});

/// Default-parameter sequence, generated once.
const Sequence& default_sequence();

/// XOR with the sequence repeated cyclically. Throws std::invalid_argument
/// if the length is not a multiple of 8.
std::vector<std::uint8_t> scramble(std::span<const std::uint8_t> payload,
                                   const Sequence& seq = default_sequence());

inline std::vector<std::uint8_t> descramble(std::span<const std::uint8_t> payload,
                                            const Sequence& seq = default_sequence()) {
  return scramble(payload, seq);
}

/// In-place variant of scramble with the same length rule.
void scramble_in_place(std::span<std::uint8_t> payload, const Sequence& seq = default_sequence());

}  // namespace mmw::scrambler
