#pragma once

// Dual-clock FIFO between the byte source (write clock f1) and the coding
// controller (read clock f2). Reads start once the FIFO is half full; per
// 260-tick frame the controller spends 4 ticks on the preamble, reads 239
// bytes, then pauses 17 ticks for parity and the extra byte.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mmw::fifo {

/// Exact positive rational, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend constexpr Rational operator*(Rational a, Rational b) {
    const std::int64_t g1 = std::gcd(a.num, b.den);
    const std::int64_t g2 = std::gcd(b.num, a.den);
    return {(a.num / g1) * (b.num / g2), (a.den / g2) * (b.den / g1)};
  }
  friend constexpr Rational operator/(Rational a, Rational b) { return a * Rational(b.den, b.num); }
  friend constexpr bool operator==(const Rational&, const Rational&) = default;
};

inline constexpr std::size_t kCycleTicks = 260;
inline constexpr std::size_t kPreambleTicks = 4;
inline constexpr std::size_t kReadTicks = 239;
inline constexpr std::size_t kPauseTicks = kCycleTicks - kPreambleTicks - kReadTicks;

/// Intermediate frequency, MHz.
inline constexpr Rational kIfMhz{3500};
/// Serial line rate F2 = IF / 4.
inline constexpr Rational kLineRateMhz = kIfMhz / Rational{4};
/// Byte read clock f2 = F2 / 8.
inline constexpr Rational kReadClockMhz = kLineRateMhz / Rational{8};
/// Byte write clock f1 = f2 * 239 / 260.
inline constexpr Rational kWriteClockMhz = kReadClockMhz * Rational{239, 260};

struct FifoConfig {
  std::size_t depth = 512;
  std::size_t n_frames = 10000;
  Rational write_mhz = kWriteClockMhz;
  Rational read_mhz = kReadClockMhz;
  /// false: read on every f2 tick (no preamble or parity slots).
  bool framing_pauses = true;
};

enum class EventKind { overflow, underflow };

struct FifoEvent {
  EventKind kind;
  /// Read-clock tick since reading started (negative: before start).
  std::int64_t tick;
  std::int64_t frame;
  double time_ns;
};

struct FrameOccupancy {
  std::size_t min;
  std::size_t max;
};

struct FifoReport {
  bool read_started = false;
  double start_time_ns = 0.0;
  std::size_t min_occupancy = 0;
  std::size_t max_occupancy = 0;
  std::size_t overflow_count = 0;
  std::size_t underflow_count = 0;
  /// First kMaxStoredEvents events in time order.
  std::vector<FifoEvent> events;
  /// Occupancy range per frame cycle after reading started.
  std::vector<FrameOccupancy> trace;

  static constexpr std::size_t kMaxStoredEvents = 1024;
};

/// Throws std::invalid_argument if depth < 2 or a rate is not positive.
FifoReport simulate_fifo(const FifoConfig& cfg);

}  // namespace mmw::fifo
