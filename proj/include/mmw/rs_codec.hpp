#pragma once

// Systematic Reed-Solomon (255,239) over GF(256), t = 8 byte errors.
//
// Codeword byte 0 is the coefficient of x^254; the generator polynomial has
// roots alpha^1 .. alpha^16.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace mmw::rs {

inline constexpr std::size_t kN = 255;
inline constexpr std::size_t kK = 239;
inline constexpr std::size_t kParity = kN - kK;
inline constexpr int kT = static_cast<int>(kParity / 2);
/// First consecutive root exponent of the generator.
inline constexpr int kFirstRoot = 1;

using Data = std::array<std::uint8_t, kK>;
using Parity = std::array<std::uint8_t, kParity>;
using Block = std::array<std::uint8_t, kN>;
using Syndromes = std::array<std::uint8_t, kParity>;

struct Codeword {
  Data data{};
  Parity parity{};

  Block bytes() const;
};

struct DecodeOutcome {
  Data corrected_data{};
  int errors_corrected = 0;
  /// When set, corrected_data is the received data field, untouched.
  bool uncorrectable = false;
};

/// Generator coefficients, g[j] multiplies x^j; g[16] == 1.
const std::array<std::uint8_t, kParity + 1>& generator();

/// Throws std::invalid_argument unless data.size() == 239.
Codeword encode(std::span<const std::uint8_t> data);

/// S_j = r(alpha^j), j = 1..16. Throws unless received.size() == 255.
Syndromes syndromes(std::span<const std::uint8_t> received);

/// Berlekamp-Massey, Chien search, Forney. Throws unless received.size() == 255.
DecodeOutcome decode(std::span<const std::uint8_t> received);

}  // namespace mmw::rs
