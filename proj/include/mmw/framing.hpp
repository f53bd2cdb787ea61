#pragma once

// 260-byte frame: preamble(4) | data(239) | RS parity(16) | extra byte(1).
//
// Everything after the preamble is scrambled, except that the extra byte is
// pre-compensated so it goes on the air as its plain value d. With MSB-first
// serialization d(8) leaves first and d(1) last, right before P(1) of the
// following frame.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmw/preamble.hpp"
#include "mmw/rs_codec.hpp"
#include "mmw/scrambler.hpp"

namespace mmw::framing {

inline constexpr std::size_t kPreambleBytes = 4;
inline constexpr std::size_t kDataBytes = rs::kK;
inline constexpr std::size_t kParityBytes = rs::kParity;
inline constexpr std::size_t kExtraBytes = 1;
inline constexpr std::size_t kFrameBytes = kPreambleBytes + kDataBytes + kParityBytes + kExtraBytes;
inline constexpr std::size_t kBodyBytes = kFrameBytes - kPreambleBytes;
inline constexpr std::size_t kFrameBits = 8 * kFrameBytes;

static_assert(kFrameBytes == 260);
static_assert(kBodyBytes % 8 == 0);

using Frame = std::array<std::uint8_t, kFrameBytes>;

/// Extra byte d with k = d(8)*2^7 + ... + d(2)*2 + d(1).
struct ExtraByte {
  std::uint8_t k = 64;

  /// d(i), 1 <= i <= 8; d(1) is the LSB.
  int bit(int i) const { return (k >> (i - 1)) & 1; }

  /// d = [d(1) ... d(8)].
  static ExtraByte from_bits(const std::array<int, 8>& d);
  std::array<int, 8> bits() const;

  friend bool operator==(const ExtraByte&, const ExtraByte&) = default;
};

inline constexpr ExtraByte kDefaultExtraByte{64};

/// Throws std::invalid_argument unless data.size() == 239.
Frame build_frame(std::span<const std::uint8_t> data, const Preamble& preamble = kDefaultPreamble,
                  ExtraByte extra = kDefaultExtraByte,
                  const scrambler::Sequence& seq = scrambler::default_sequence());

struct ParsedFrame {
  rs::Data data{};
  rs::DecodeOutcome decode;
  /// Agreeing bits between the received preamble field and the expected one.
  int preamble_matches = 0;
};

/// raw must start on a frame boundary. With decode == false the RS decoder
/// is bypassed and the data field is returned as received after descrambling.
ParsedFrame parse_frame(std::span<const std::uint8_t> raw, const Preamble& preamble = kDefaultPreamble,
                        bool decode = true,
                        const scrambler::Sequence& seq = scrambler::default_sequence());

/// Hex dump: one frame per line, 520 uppercase hex digits.
std::string to_hex_line(std::span<const std::uint8_t> frame);
Frame from_hex_line(std::string_view line);
void write_hex_dump(std::ostream& os, std::span<const Frame> frames);
std::vector<Frame> read_hex_dump(std::istream& is);

}  // namespace mmw::framing
