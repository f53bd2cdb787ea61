#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "doctest.h"
#include "mmw/channel.hpp"
#include "mmw/modem.hpp"

using namespace mmw;
using namespace mmw::channel;
using modem::SymbolStream;

namespace {

SymbolStream random_symbols(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SymbolStream s(n);
  for (Eigen::Index k = 0; k < n; ++k) s[k] = (rng() & 1u) ? -1.0 : 1.0;
  return s;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("awgn") {
  const auto s = random_symbols(1000, 1);
  SUBCASE("infinite Eb/N0 is a no-op") {
    CHECK(apply_awgn(s, std::numeric_limits<double>::infinity(), 3) == s);
  }
  SUBCASE("deterministic per seed") {
    CHECK(apply_awgn(s, 5.0, 42) == apply_awgn(s, 5.0, 42));
    CHECK_FALSE(apply_awgn(s, 5.0, 42) == apply_awgn(s, 5.0, 43));
  }
  SUBCASE("noise variance at 0 dB is N0 = 1") {
    const SymbolStream zero = SymbolStream::Zero(1'000'000);
    const auto n = apply_awgn(zero, 0.0, 9);
    const double n0 = n.squaredNorm() / static_cast<double>(n.size());
    CHECK(n0 == doctest::Approx(1.0).epsilon(0.01));
    // per-component split
    const double re = n.real().squaredNorm() / static_cast<double>(n.size());
    CHECK(re == doctest::Approx(0.5).epsilon(0.01));
  }
  SUBCASE("disjoint seeds are uncorrelated") {
    const SymbolStream zero = SymbolStream::Zero(200'000);
    const auto a = apply_awgn(zero, 0.0, 1);
    const auto b = apply_awgn(zero, 0.0, 2);
    const std::complex<double> xc = a.dot(b) / std::sqrt(a.squaredNorm() * b.squaredNorm());
    // normalized cross-correlation has std ~ 1/sqrt(n) per component
    CHECK(std::abs(xc) < 3.0 * std::sqrt(2.0 / 200'000.0));
  }
}

TEST_CASE("bsc") {
  Bits bits(1'000'000, 0);
  CHECK(apply_bsc(bits, 0.0, 1) == bits);
  const auto all = apply_bsc(bits, 1.0, 1);
  CHECK(std::all_of(all.begin(), all.end(), [](auto b) { return b == 1; }));
  const auto flipped = apply_bsc(bits, 0.01, 5);
  const auto count = std::count(flipped.begin(), flipped.end(), 1);
  const double sigma = std::sqrt(1e6 * 0.01 * 0.99);
  CHECK(std::abs(static_cast<double>(count) - 1e4) < 3 * sigma);
  CHECK(apply_bsc(bits, 0.01, 5) == flipped);
  CHECK_THROWS_AS(apply_bsc(bits, 1.5, 1), std::invalid_argument);
}

TEST_CASE("multipath") {
  SUBCASE("single unit tap is the identity") {
    const auto s = random_symbols(100, 2);
    const std::vector<std::complex<double>> taps{1.0};
    CHECK(apply_multipath(s, taps) == s);
  }
  SUBCASE("two-tap convolution") {
    SymbolStream s(3);
    s << 1.0, 1.0, -1.0;
    const std::vector<std::complex<double>> taps{1.0, 0.5};
    const auto y = apply_multipath(s, taps);
    REQUIRE(y.size() == 4);
    CHECK(y[0].real() == doctest::Approx(1.0));
    CHECK(y[1].real() == doctest::Approx(1.5));
    CHECK(y[2].real() == doctest::Approx(-0.5));
    CHECK(y[3].real() == doctest::Approx(-0.5));
  }
  SUBCASE("energy scales by the tap energy") {
    const auto s = random_symbols(200'000, 3);
    const std::vector<std::complex<double>> taps{1.0, {0.3, 0.4}, -0.2};
    const auto y = apply_multipath(s, taps);
    double tap_energy = 0.0;
    for (auto t : taps) tap_energy += std::norm(t);
    CHECK(y.squaredNorm() / s.squaredNorm() == doctest::Approx(tap_energy).epsilon(0.01));
  }
  SUBCASE("first tap must be one") {
    const std::vector<std::complex<double>> bad{0.5, 1.0};
    CHECK_THROWS_AS(apply_multipath(random_symbols(4, 1), bad), std::invalid_argument);
  }
}

TEST_CASE("quarter-turn echo: delay-and-multiply squares the echo") {
  for (double rho : {0.1, 0.2, 0.3}) {
    Bits b(20000);
    std::mt19937_64 rng(static_cast<std::uint64_t>(rho * 100));
    for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1u);
    const auto s = modem::map_bpsk(modem::diff_encode(b));
    const std::vector<std::complex<double>> taps{1.0, {0.0, rho}};
    const SymbolStream r = apply_multipath(s, taps).head(s.size());
    CHECK(modem::diff_demod(r) == b);

    // brute-force expansion of Re(r_k conj r_{k-1}) with r_k = s_k + j rho s_{k-1}
    const auto y = modem::decision_metric(r);
    double interference_power = 0.0;
    for (Eigen::Index k = 1; k < s.size(); ++k) {
      const std::complex<double> a = s[k], b1 = s[k - 1];
      const std::complex<double> b2 = k >= 2 ? s[k - 2] : 0.0;
      const std::complex<double> j(0, 1);
      const std::complex<double> expanded =
          a * std::conj(b1) + a * std::conj(j * rho * b2) + j * rho * b1 * std::conj(b1) + j * rho * b1 * std::conj(j * rho * b2);
      CHECK(y[k - 1] == doctest::Approx(expanded.real()).epsilon(1e-12));
      const double desired = (a * std::conj(b1)).real();
      interference_power += (y[k - 1] - desired) * (y[k - 1] - desired);
    }
    interference_power /= static_cast<double>(s.size() - 1);
    // the only surviving cross term is rho^2 s_{k-1} s_{k-2}
    CHECK(interference_power == doctest::Approx(rho * rho * rho * rho).epsilon(1e-3));
  }
}

TEST_CASE("ChannelSpec validation") {
  ChannelSpec spec;
  spec.kind = Kind::bsc;
  spec.p = -0.1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.kind = Kind::multipath;
  spec.taps = {0.9};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CHECK(kind_from_string("awgn") == Kind::awgn);
  CHECK_THROWS_AS(kind_from_string("rayleigh"), std::invalid_argument);
}

}  // TEST_SUITE
