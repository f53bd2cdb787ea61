#include "mmw/gf256.hpp"

#include <stdexcept>

namespace mmw::gf {

namespace {

Tables build_tables() {
  Tables t;
  unsigned x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100u) x ^= kFieldPolynomial;
  }
  for (int i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

}  // namespace

const Tables& tables() {
  static const Tables t = build_tables();
  return t;
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw std::domain_error("gf::div: division by zero");
  if (a == 0) return 0;
  const auto& t = tables();
  return t.exp[t.log[a] + 255 - t.log[b]];
}

std::uint8_t inv(std::uint8_t a) { return div(1, a); }

std::uint8_t pow_alpha(int e) {
  e %= 255;
  if (e < 0) e += 255;
  return tables().exp[e];
}

int log(std::uint8_t a) {
  if (a == 0) throw std::domain_error("gf::log: log of zero");
  return tables().log[a];
}

}  // namespace mmw::gf
