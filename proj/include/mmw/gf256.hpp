#pragma once

// GF(2^8) arithmetic over the byte alphabet used by the RS(255,239) codec.

#include <array>
#include <cstdint>

namespace mmw::gf {

/// Field polynomial x^8 + x^4 + x^3 + x^2 + 1.
inline constexpr unsigned kFieldPolynomial = 0x11D;
/// Primitive element alpha.
inline constexpr std::uint8_t kPrimitive = 0x02;

struct Tables {
  // exp is doubled so exp[log a + log b] never needs a modulo.
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

const Tables& tables();

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const auto& t = tables();
  return t.exp[t.log[a] + t.log[b]];
}

/// b must be nonzero.
std::uint8_t div(std::uint8_t a, std::uint8_t b);

std::uint8_t inv(std::uint8_t a);

/// alpha^e for any integer exponent (reduced mod 255).
std::uint8_t pow_alpha(int e);

/// Discrete log base alpha; a must be nonzero.
int log(std::uint8_t a);

/// Shift-and-add reference multiply, independent of the tables.
constexpr std::uint8_t mul_slow(std::uint8_t a, std::uint8_t b) {
  unsigned acc = 0;
  unsigned x = a;
  for (unsigned y = b; y != 0; y >>= 1) {
    if (y & 1u) acc ^= x;
    x <<= 1;
    if (x & 0x100u) x ^= kFieldPolynomial;
  }
  return static_cast<std::uint8_t>(acc);
}

}  // namespace mmw::gf
