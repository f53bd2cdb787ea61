#include "mmw/channel.hpp"

#include <string_view>

namespace mmw::channel {

void ChannelSpec::validate() const {
  switch (kind) {
    case Kind::none:
      return;
    case Kind::bsc:
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc: p must be in [0, 1]");
      return;
    case Kind::multipath:
      if (taps.empty() || taps[0] != std::complex<double>(1.0, 0.0))
        throw std::invalid_argument("multipath: taps[0] must be 1");
      [[fallthrough]];
    case Kind::awgn:
      if (std::isnan(ebno_db)) throw std::invalid_argument("ebno_db must be a number");
      return;
  }
}

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::awgn: return "awgn";
    case Kind::bsc: return "bsc";
    case Kind::multipath: return "multipath";
  }
  return "?";
}

Kind kind_from_string(std::string_view name) {
  if (name == "none") return Kind::none;
  if (name == "awgn") return Kind::awgn;
  if (name == "bsc") return Kind::bsc;
  if (name == "multipath") return Kind::multipath;
  throw std::invalid_argument("unknown channel kind: " + std::string(name));
}

void apply_bsc_in_place(std::span<std::uint8_t> bits, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("apply_bsc: p must be in [0, 1]");
  if (p == 0.0) return;
  if (p == 1.0) {
    for (auto& b : bits) b ^= 1u;
    return;
  }
  // Geometric gaps between flips: one draw per flipped bit.
  Rng rng(seed);
  std::geometric_distribution<std::uint64_t> gap(p);
  for (std::uint64_t i = gap(rng); i < bits.size(); i += 1 + gap(rng)) bits[i] ^= 1u;
}

Bits apply_bsc(std::span<const std::uint8_t> bits, double p, std::uint64_t seed) {
  Bits out(bits.begin(), bits.end());
  apply_bsc_in_place(out, p, seed);
  return out;
}

}  // namespace mmw::channel
