#pragma once

// Bit-level helpers. Streams are MSB-first within each byte throughout.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mmw {

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

inline Bits unpack_bits(std::span<const std::uint8_t> bytes) {
  Bits bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    for (int b = 0; b < 8; ++b) bits[8 * i + b] = (bytes[i] >> (7 - b)) & 1u;
  return bits;
}

/// Packs bits starting at `offset`; a trailing partial byte is dropped.
inline Bytes pack_bits(std::span<const std::uint8_t> bits, std::size_t offset = 0) {
  if (offset > bits.size()) return {};
  const std::size_t n = (bits.size() - offset) / 8;
  Bytes bytes(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t v = 0;
    for (int b = 0; b < 8; ++b) v = static_cast<std::uint8_t>((v << 1) | (bits[offset + 8 * i + b] & 1u));
    bytes[i] = v;
  }
  return bytes;
}

/// Packed copy of a bit stream with O(1) extraction of any 32-bit window.
class PackedBits {
 public:
  PackedBits() = default;
  explicit PackedBits(std::span<const std::uint8_t> bits) : size_(bits.size()) {
    words_.assign(bits.size() / 64 + 2, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i] & 1u) words_[i / 64] |= std::uint64_t{1} << (63 - i % 64);
  }

  std::size_t size() const { return size_; }

  /// Bits [pos, pos + 32) with bit `pos` in the MSB. Requires pos + 32 <= size().
  std::uint32_t window32(std::size_t pos) const {
    const std::size_t w = pos / 64;
    const unsigned s = static_cast<unsigned>(pos % 64);
    std::uint64_t hi = words_[w] << s;
    if (s != 0) hi |= words_[w + 1] >> (64 - s);
    return static_cast<std::uint32_t>(hi >> 32);
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace mmw
