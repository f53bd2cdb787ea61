#include "mmw/framing.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mmw::framing {

ExtraByte ExtraByte::from_bits(const std::array<int, 8>& d) {
  unsigned k = 0;
  for (int i = 0; i < 8; ++i) {
    if (d[i] != 0 && d[i] != 1) throw std::invalid_argument("ExtraByte: bits must be 0 or 1");
    k |= static_cast<unsigned>(d[i]) << i;
  }
  return ExtraByte{static_cast<std::uint8_t>(k)};
}

std::array<int, 8> ExtraByte::bits() const {
  std::array<int, 8> d{};
  for (int i = 0; i < 8; ++i) d[i] = bit(i + 1);
  return d;
}

Frame build_frame(std::span<const std::uint8_t> data, const Preamble& preamble, ExtraByte extra,
                  const scrambler::Sequence& seq) {
  if (data.size() != kDataBytes) throw std::invalid_argument("build_frame: data must be 239 bytes");

  const rs::Codeword cw = rs::encode(data);
  Frame frame{};
  const auto p = preamble.bytes();
  std::copy(p.begin(), p.end(), frame.begin());
  auto body = std::span<std::uint8_t>(frame).subspan(kPreambleBytes);
  std::copy(cw.data.begin(), cw.data.end(), body.begin());
  std::copy(cw.parity.begin(), cw.parity.end(), body.begin() + kDataBytes);
  body[kBodyBytes - 1] = extra.k ^ seq[(kBodyBytes - 1) % seq.size()];
  scrambler::scramble_in_place(body, seq);
  return frame;
}

ParsedFrame parse_frame(std::span<const std::uint8_t> raw, const Preamble& preamble, bool decode,
                        const scrambler::Sequence& seq) {
  if (raw.size() != kFrameBytes) throw std::invalid_argument("parse_frame: frame must be 260 bytes");

  ParsedFrame out;
  const auto p = preamble.bytes();
  for (std::size_t i = 0; i < kPreambleBytes; ++i)
    out.preamble_matches += 8 - std::popcount(static_cast<unsigned>(raw[i] ^ p[i]));

  const auto body = scrambler::descramble(raw.subspan(kPreambleBytes), seq);
  const std::span<const std::uint8_t> block(body.data(), rs::kN);
  if (decode) {
    out.decode = rs::decode(block);
  } else {
    std::copy(block.begin(), block.begin() + rs::kK, out.decode.corrected_data.begin());
  }
  out.data = out.decode.corrected_data;
  return out;
}

std::string to_hex_line(std::span<const std::uint8_t> frame) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string s;
  s.reserve(frame.size() * 2);
  for (std::uint8_t b : frame) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

Frame from_hex_line(std::string_view line) {
  if (line.size() != 2 * kFrameBytes) throw std::invalid_argument("hex frame line must be 520 characters");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument("hex frame line: bad digit");
  };
  Frame f{};
  for (std::size_t i = 0; i < kFrameBytes; ++i)
    f[i] = static_cast<std::uint8_t>(nibble(line[2 * i]) << 4 | nibble(line[2 * i + 1]));
  return f;
}

void write_hex_dump(std::ostream& os, std::span<const Frame> frames) {
  for (const auto& f : frames) os << to_hex_line(f) << '\n';
}

std::vector<Frame> read_hex_dump(std::istream& is) {
  std::vector<Frame> frames;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    frames.push_back(from_hex_line(line));
  }
  return frames;
}

}  // namespace mmw::framing
