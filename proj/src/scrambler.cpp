#include "mmw/scrambler.hpp"

#include <stdexcept>

namespace mmw::scrambler {

std::vector<std::uint8_t> lfsr_bits(const LfsrParams& params, std::size_t count) {
  if (params.degree == 0 || params.degree > 31)
    throw std::invalid_argument("lfsr_bits: degree must be in [1, 31]");
  const unsigned mask = (1u << params.degree) - 1u;
  if ((params.seed & mask) == 0) throw std::invalid_argument("lfsr_bits: all-zero seed");

  // Fibonacci form: state bit i holds a_{n+i}; a_{n+deg} = sum_i c_i a_{n+i}.
  unsigned state = params.seed & mask;
  std::vector<std::uint8_t> bits(count);
  for (auto& b : bits) {
    b = static_cast<std::uint8_t>(state & 1u);
    const unsigned next = static_cast<unsigned>(__builtin_parity(state & params.feedback));
    state = (state >> 1) | (next << (params.degree - 1));
  }
  return bits;
}

Sequence generate_sequence(const LfsrParams& params) {
  auto bits = lfsr_bits(params, 63);
  bits.push_back(params.pad_bit & 1u);
  Sequence seq{};
  for (std::size_t i = 0; i < 64; ++i)
    seq[i / 8] |= static_cast<std::uint8_t>(bits[i] << (7 - i % 8));
  return seq;
}

const Sequence& default_sequence() {
  static const Sequence seq = generate_sequence();
  return seq;
}

void scramble_in_place(std::span<std::uint8_t> payload, const Sequence& seq) {
  if (payload.size() % seq.size() != 0)
    throw std::invalid_argument("scramble: length must be a multiple of 8 bytes");
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= seq[i % seq.size()];
}

std::vector<std::uint8_t> scramble(std::span<const std::uint8_t> payload, const Sequence& seq) {
  std::vector<std::uint8_t> out(payload.begin(), payload.end());
  scramble_in_place(out, seq);
  return out;
}

}  // namespace mmw::scrambler
