#include "mmw/rs_codec.hpp"

#include <algorithm>
#include <stdexcept>

#include "mmw/gf256.hpp"

namespace mmw::rs {

namespace {

using Poly = std::array<std::uint8_t, kParity + 1>;

Poly build_generator() {
  Poly g{};
  g[0] = 1;
  int degree = 0;
  for (int i = 0; i < static_cast<int>(kParity); ++i) {
    const std::uint8_t root = gf::pow_alpha(kFirstRoot + i);
    // g <- g * (x + root)
    for (int j = degree + 1; j > 0; --j) g[j] = g[j - 1] ^ gf::mul(g[j], root);
    g[0] = gf::mul(g[0], root);
    ++degree;
  }
  return g;
}

// Low-order-first polynomial evaluation.
std::uint8_t eval(std::span<const std::uint8_t> poly, std::uint8_t x) {
  std::uint8_t acc = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = gf::mul(acc, x) ^ *it;
  return acc;
}

void require_size(std::span<const std::uint8_t> s, std::size_t n, const char* what) {
  if (s.size() != n) throw std::invalid_argument(what);
}

}  // namespace

Block Codeword::bytes() const {
  Block out{};
  std::copy(data.begin(), data.end(), out.begin());
  std::copy(parity.begin(), parity.end(), out.begin() + kK);
  return out;
}

const std::array<std::uint8_t, kParity + 1>& generator() {
  static const Poly g = build_generator();
  return g;
}

Codeword encode(std::span<const std::uint8_t> data) {
  require_size(data, kK, "rs::encode: data must be 239 bytes");
  const auto& g = generator();

  // remainder register, rem[j] multiplies x^j
  std::array<std::uint8_t, kParity> rem{};
  for (std::uint8_t byte : data) {
    const std::uint8_t feedback = byte ^ rem[kParity - 1];
    for (std::size_t j = kParity - 1; j > 0; --j) rem[j] = rem[j - 1] ^ gf::mul(feedback, g[j]);
    rem[0] = gf::mul(feedback, g[0]);
  }

  Codeword cw;
  std::copy(data.begin(), data.end(), cw.data.begin());
  for (std::size_t i = 0; i < kParity; ++i) cw.parity[i] = rem[kParity - 1 - i];
  return cw;
}

Syndromes syndromes(std::span<const std::uint8_t> received) {
  require_size(received, kN, "rs::syndromes: block must be 255 bytes");
  Syndromes s{};
  for (std::size_t j = 0; j < kParity; ++j) {
    const std::uint8_t x = gf::pow_alpha(kFirstRoot + static_cast<int>(j));
    std::uint8_t acc = 0;
    for (std::uint8_t c : received) acc = gf::mul(acc, x) ^ c;
    s[j] = acc;
  }
  return s;
}

DecodeOutcome decode(std::span<const std::uint8_t> received) {
  require_size(received, kN, "rs::decode: block must be 255 bytes");

  DecodeOutcome out;
  std::copy(received.begin(), received.begin() + kK, out.corrected_data.begin());

  const Syndromes s = syndromes(received);
  if (std::all_of(s.begin(), s.end(), [](std::uint8_t v) { return v == 0; })) return out;

  // Berlekamp-Massey: error locator lambda, lambda[0] == 1.
  Poly lambda{};
  Poly prev{};
  lambda[0] = prev[0] = 1;
  int L = 0;
  int shift = 1;
  std::uint8_t prev_disc = 1;
  for (int n = 0; n < static_cast<int>(kParity); ++n) {
    std::uint8_t d = s[n];
    for (int i = 1; i <= L; ++i) d ^= gf::mul(lambda[i], s[n - i]);
    if (d == 0) {
      ++shift;
      continue;
    }
    const std::uint8_t coef = gf::div(d, prev_disc);
    Poly next = lambda;
    for (int i = 0; i + shift <= static_cast<int>(kParity); ++i)
      next[i + shift] ^= gf::mul(coef, prev[i]);
    if (2 * L <= n) {
      prev = lambda;
      L = n + 1 - L;
      prev_disc = d;
      shift = 1;
    } else {
      ++shift;
    }
    lambda = next;
  }

  out.uncorrectable = true;
  if (L > kT) return out;

  // Omega = S(x) * lambda(x) mod x^16, S(x) = sum S_{j+1} x^j.
  std::array<std::uint8_t, kParity> omega{};
  for (std::size_t i = 0; i < kParity; ++i)
    for (std::size_t j = 0; j <= i && j <= static_cast<std::size_t>(L); ++j)
      omega[i] ^= gf::mul(lambda[j], s[i - j]);

  // Formal derivative keeps the odd-degree terms.
  Poly dlambda{};
  for (int i = 1; i <= L; i += 2) dlambda[i - 1] = lambda[i];

  Block fixed{};
  std::copy(received.begin(), received.end(), fixed.begin());
  const std::span<const std::uint8_t> lambda_view(lambda.data(), static_cast<std::size_t>(L) + 1);

  int found = 0;
  for (int p = 0; p < static_cast<int>(kN); ++p) {
    const int degree = static_cast<int>(kN) - 1 - p;
    const std::uint8_t x_inv = gf::pow_alpha(-degree);
    if (eval(lambda_view, x_inv) != 0) continue;
    ++found;
    const std::uint8_t denom = eval(dlambda, x_inv);
    if (denom == 0) return out;
    // X^(1 - first_root) * Omega(X^-1) / Lambda'(X^-1)
    std::uint8_t magnitude = gf::div(eval(omega, x_inv), denom);
    magnitude = gf::mul(magnitude, gf::pow_alpha(degree * (1 - kFirstRoot)));
    if (magnitude == 0) return out;
    fixed[p] ^= magnitude;
  }
  if (found != L) return out;

  const Syndromes check = syndromes(fixed);
  if (!std::all_of(check.begin(), check.end(), [](std::uint8_t v) { return v == 0; })) return out;

  std::copy(fixed.begin(), fixed.begin() + kK, out.corrected_data.begin());
  out.errors_corrected = L;
  out.uncorrectable = false;
  return out;
}

}  // namespace mmw::rs
