#pragma once

// Differential BPSK: transition encoding, +-1 mapping, and delay-and-multiply
// demodulation y_k = Re(r_k conj(r_{k-1})). Symbol streams are Eigen column
// vectors of std::complex<Scalar>.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mmw/bits.hpp"
#include "mmw/random.hpp"

namespace mmw::modem {

template <typename Scalar>
using SymbolVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using SymbolStream = SymbolVector<double>;

/// Nominal symbol rate in Gsym/s; informational.
inline constexpr double kSymbolRateGsps = 0.875;

/// c_0 = reference, c_k = c_{k-1} xor b_k. Output is one bit longer.
inline Bits diff_encode(std::span<const std::uint8_t> bits, std::uint8_t reference = 0) {
  Bits out(bits.size() + 1);
  out[0] = reference & 1u;
  for (std::size_t k = 0; k < bits.size(); ++k) out[k + 1] = out[k] ^ (bits[k] & 1u);
  return out;
}

/// Inverse of diff_encode: b_k = c_k xor c_{k-1}.
inline Bits diff_decode(std::span<const std::uint8_t> coded) {
  if (coded.size() < 2) return {};
  Bits out(coded.size() - 1);
  for (std::size_t k = 1; k < coded.size(); ++k) out[k - 1] = (coded[k] ^ coded[k - 1]) & 1u;
  return out;
}

/// s_k = 1 - 2 c_k.
template <typename Scalar = double>
SymbolVector<Scalar> map_bpsk(std::span<const std::uint8_t> coded) {
  SymbolVector<Scalar> s(static_cast<Eigen::Index>(coded.size()));
  for (std::size_t k = 0; k < coded.size(); ++k)
    s[static_cast<Eigen::Index>(k)] = std::complex<Scalar>(coded[k] & 1u ? Scalar(-1) : Scalar(1), Scalar(0));
  return s;
}

/// y_k = Re(r_k conj(r_{k-1})), k = 1..n-1.
template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1> decision_metric(
    const Eigen::MatrixBase<Derived>& r) {
  using Real = typename Derived::RealScalar;
  const Eigen::Index n = r.size();
  if (n < 2) return {};
  return (r.tail(n - 1).array() * r.head(n - 1).conjugate().array()).real().matrix().template cast<Real>();
}

/// Hard decisions on the delay-and-multiply product; y_k == 0 maps to 0.
/// Fewer than two symbols yields no bits.
template <typename Derived>
Bits diff_demod(const Eigen::MatrixBase<Derived>& r) {
  const auto y = decision_metric(r);
  Bits bits(static_cast<std::size_t>(y.size()));
  for (Eigen::Index k = 0; k < y.size(); ++k) bits[static_cast<std::size_t>(k)] = y[k] < 0 ? 1 : 0;
  return bits;
}

/// Chunked demodulation; concatenated outputs equal diff_demod on the whole stream.
template <typename Scalar = double>
class DiffDemodulator {
 public:
  template <typename Derived>
  Bits push(const Eigen::MatrixBase<Derived>& chunk) {
    Bits bits;
    bits.reserve(static_cast<std::size_t>(chunk.size()));
    for (Eigen::Index k = 0; k < chunk.size(); ++k) {
      const std::complex<Scalar> r = chunk[k];
      if (have_prev_) bits.push_back((r * std::conj(prev_)).real() < 0 ? 1 : 0);
      prev_ = r;
      have_prev_ = true;
    }
    return bits;
  }

  void reset() { have_prev_ = false; }

 private:
  std::complex<Scalar> prev_{};
  bool have_prev_ = false;
};

// ---------------------------------------------------------------------------
// Oversampled waveform and eye diagram

struct WaveformConfig {
  /// Samples per symbol; 1 is symbol-spaced.
  int oversampling = 1;
  double cutoff_ghz = 1.0;
  double symbol_rate_gsps = kSymbolRateGsps;
  /// FIR length is taps_per_symbol * oversampling + 1.
  int taps_per_symbol = 8;
  /// Noise added per sample before filtering; infinity disables it.
  double ebno_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

/// Hamming-windowed sinc lowpass, odd length, unit DC gain. A cutoff at or
/// above half the sample rate returns a single unit tap.
inline Eigen::VectorXd design_lowpass(double cutoff_cycles_per_sample, int length) {
  if (cutoff_cycles_per_sample >= 0.5 || length <= 1) return Eigen::VectorXd::Ones(1);
  if (length % 2 == 0) ++length;
  const int mid = length / 2;
  Eigen::VectorXd h(length);
  for (int n = 0; n < length; ++n) {
    const double m = n - mid;
    const double sinc = m == 0 ? 2.0 * cutoff_cycles_per_sample
                               : std::sin(2.0 * std::numbers::pi * cutoff_cycles_per_sample * m) /
                                     (std::numbers::pi * m);
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (length - 1));
    h[n] = sinc * window;
  }
  return h / h.sum();
}

struct Waveform {
  Eigen::VectorXd samples;
  int oversampling = 1;
  /// Group delay of the lowpass, samples.
  int delay = 0;

  /// Sample index at the centre of symbol k.
  Eigen::Index center(Eigen::Index k) const { return k * oversampling + oversampling / 2 + delay; }
};

/// Rectangular pulses at L samples/symbol, optional AWGN, then the linear-
/// phase lowpass. Returns the in-phase component, full convolution length.
template <typename Derived>
Waveform render_waveform(const Eigen::MatrixBase<Derived>& symbols, const WaveformConfig& cfg) {
  if (cfg.oversampling < 1) throw std::invalid_argument("render_waveform: oversampling must be >= 1");
  const int L = cfg.oversampling;
  const Eigen::Index n = symbols.size();

  Eigen::VectorXcd x(n * L);
  for (Eigen::Index k = 0; k < n; ++k) x.segment(k * L, L).setConstant(std::complex<double>(symbols[k]));

  if (std::isfinite(cfg.ebno_db)) {
    // Per-sample variance N0/2 * L so an L-sample average sees N0/2.
    const double n0 = std::pow(10.0, -cfg.ebno_db / 10.0);
    Rng rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * n0 * L));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      x[i] += std::complex<double>(re, im);
    }
  }

  const double fc = cfg.cutoff_ghz / (cfg.symbol_rate_gsps * L);
  const Eigen::VectorXd h = design_lowpass(fc, cfg.taps_per_symbol * L + 1);

  Waveform w;
  w.oversampling = L;
  w.delay = static_cast<int>(h.size() / 2);
  const Eigen::VectorXd xr = x.real();
  w.samples = Eigen::VectorXd::Zero(xr.size() + h.size() - 1);
  for (Eigen::Index j = 0; j < h.size(); ++j) w.samples.segment(j, xr.size()) += h[j] * xr;
  return w;
}

/// Overlaid traces of two symbol periods, one per symbol whose window fits
/// inside the settled waveform; column L of each row is the symbol centre.
struct EyeDiagram {
  Eigen::MatrixXd traces;
  /// Symbol index behind each trace.
  std::vector<Eigen::Index> symbol_index;
};

inline EyeDiagram eye_traces(const Waveform& w, Eigen::Index n_symbols) {
  const int L = w.oversampling;
  std::vector<Eigen::Index> ks;
  for (Eigen::Index k = 0; k < n_symbols; ++k) {
    const Eigen::Index first = w.center(k) - L;
    // skip the filter's start-up and tail transients
    if (first < 2 * w.delay || w.center(k) + L > n_symbols * L) continue;
    ks.push_back(k);
  }
  EyeDiagram eye;
  eye.traces.resize(static_cast<Eigen::Index>(ks.size()), 2 * L);
  for (std::size_t i = 0; i < ks.size(); ++i)
    eye.traces.row(static_cast<Eigen::Index>(i)) = w.samples.segment(w.center(ks[i]) - L, 2 * L).transpose();
  eye.symbol_index = std::move(ks);
  return eye;
}

/// Vertical opening at the centre sample: min over +1 symbols minus max over
/// -1 symbols. Negative means the eye is closed.
template <typename Derived>
double eye_opening(const EyeDiagram& eye, const Eigen::MatrixBase<Derived>& symbols) {
  const Eigen::Index L = eye.traces.cols() / 2;
  double lo_pos = std::numeric_limits<double>::infinity();
  double hi_neg = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eye.traces.rows(); ++i) {
    const double v = eye.traces(i, L);
    if (std::real(symbols[eye.symbol_index[static_cast<std::size_t>(i)]]) > 0)
      lo_pos = std::min(lo_pos, v);
    else
      hi_neg = std::max(hi_neg, v);
  }
  if (!std::isfinite(lo_pos)) return -hi_neg;
  if (!std::isfinite(hi_neg)) return lo_pos;
  return lo_pos - hi_neg;
}

}  // namespace mmw::modem
