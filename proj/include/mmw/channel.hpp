#pragma once

// Channel impairments: AWGN and symbol-spaced multipath on symbol streams,
// binary symmetric flips on bit streams.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mmw/bits.hpp"
#include "mmw/modem.hpp"
#include "mmw/random.hpp"

namespace mmw::channel {

enum class Kind { none, awgn, bsc, multipath };

struct ChannelSpec {
  Kind kind = Kind::none;
  /// awgn / multipath; +infinity means no noise.
  double ebno_db = std::numeric_limits<double>::infinity();
  /// bsc flip probability.
  double p = 0.0;
  /// multipath taps, taps[0] == 1.
  std::vector<std::complex<double>> taps{{1.0, 0.0}};
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

const char* to_string(Kind kind);
/// Throws std::invalid_argument on an unknown name.
Kind kind_from_string(std::string_view name);

/// N0 for unit-energy symbols carrying one bit each.
inline double noise_density(double ebno_db) { return std::pow(10.0, -ebno_db / 10.0); }

/// Adds circular complex Gaussian noise with per-component variance N0/2.
template <typename Derived>
modem::SymbolVector<typename Derived::RealScalar> apply_awgn(const Eigen::MatrixBase<Derived>& stream,
                                                             double ebno_db, std::uint64_t seed) {
  using Real = typename Derived::RealScalar;
  modem::SymbolVector<Real> out = stream;
  if (!std::isfinite(ebno_db) && ebno_db > 0) return out;
  Rng rng(seed);
  std::normal_distribution<Real> gauss(Real(0), static_cast<Real>(std::sqrt(noise_density(ebno_db) / 2.0)));
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const Real re = gauss(rng);
    const Real im = gauss(rng);
    out[k] += std::complex<Real>(re, im);
  }
  return out;
}

/// Full linear convolution with the tap vector (length n + taps - 1).
template <typename Derived>
modem::SymbolVector<typename Derived::RealScalar> apply_multipath(
    const Eigen::MatrixBase<Derived>& stream, std::span<const std::complex<double>> taps) {
  using Real = typename Derived::RealScalar;
  if (taps.empty() || taps[0] != std::complex<double>(1.0, 0.0))
    throw std::invalid_argument("apply_multipath: taps[0] must be 1");
  const Eigen::Index n = stream.size();
  const auto m = static_cast<Eigen::Index>(taps.size());
  modem::SymbolVector<Real> out = modem::SymbolVector<Real>::Zero(n + m - 1);
  for (Eigen::Index j = 0; j < m; ++j)
    out.segment(j, n) += std::complex<Real>(taps[static_cast<std::size_t>(j)]) * stream;
  return out;
}

/// Flips each bit independently with probability p, 0 <= p <= 1.
Bits apply_bsc(std::span<const std::uint8_t> bits, double p, std::uint64_t seed);

/// In-place variant of apply_bsc.
void apply_bsc_in_place(std::span<std::uint8_t> bits, double p, std::uint64_t seed);

}  // namespace mmw::channel
