#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mmw/fifo.hpp"

using namespace mmw::fifo;

namespace {

// Linear-drift prediction of the first overflowing frame cycle: occupancy
// peaks just before the first read of each cycle, at W(t) - 239 j.
long predicted_overflow_frame(double write_mhz, double read_mhz, std::size_t depth) {
  const double pw = 1.0 / write_mhz;
  const double pr = 1.0 / read_mhz;
  const double trigger_time = static_cast<double>(depth / 2 - 1) * pw;
  const double t0 = std::ceil(trigger_time / pr - 1e-12) * pr;
  for (long j = 0; j < 1000000; ++j) {
    const double t = t0 + static_cast<double>(260 * j + 4) * pr;
    const double writes = std::floor(t / pw + 1e-9) + 1.0;
    if (writes - 239.0 * static_cast<double>(j) > static_cast<double>(depth)) return j;
  }
  return -1;
}

}  // namespace

TEST_SUITE("fifo") {

TEST_CASE("clock constants are exact rationals") {
  CHECK(kLineRateMhz == Rational(875));
  CHECK(kReadClockMhz == Rational(875, 8));
  CHECK(kWriteClockMhz == kReadClockMhz * Rational(239, 260));
  CHECK(kWriteClockMhz == Rational(875 * 239, 8 * 260));
  CHECK(kWriteClockMhz / kReadClockMhz == Rational(239, 260));
  CHECK(kReadClockMhz.value() == doctest::Approx(109.375));
  CHECK(kWriteClockMhz.value() == doctest::Approx(100.54).epsilon(1e-4));
  CHECK(kPreambleTicks + kReadTicks + kPauseTicks == 260);
  CHECK(kPauseTicks == 17);
}

TEST_CASE("nominal rates never under- or overflow") {
  FifoConfig cfg;
  cfg.n_frames = 10000;
  const auto r = simulate_fifo(cfg);
  CHECK(r.read_started);
  CHECK(r.overflow_count == 0);
  CHECK(r.underflow_count == 0);
  CHECK(r.events.empty());
  CHECK(r.trace.size() == 10000);
  CHECK(r.max_occupancy <= cfg.depth);
  // bounded: the last frame looks like the first
  CHECK(r.trace.back().min == doctest::Approx(static_cast<double>(r.trace.front().min)).epsilon(0.02));
  CHECK(r.trace.back().max == doctest::Approx(static_cast<double>(r.trace.front().max)).epsilon(0.02));
}

TEST_CASE("balanced clocks without pauses hold the half-full point") {
  FifoConfig cfg;
  cfg.write_mhz = kReadClockMhz;
  cfg.framing_pauses = false;
  cfg.n_frames = 1000;
  const auto r = simulate_fifo(cfg);
  CHECK(r.overflow_count + r.underflow_count == 0);
  CHECK(r.min_occupancy >= cfg.depth / 2 - 1);
  CHECK(r.max_occupancy <= cfg.depth / 2 + 1);
}

TEST_CASE("one percent write skew overflows when linear drift predicts") {
  FifoConfig cfg;
  cfg.write_mhz = kWriteClockMhz * Rational(101, 100);
  cfg.n_frames = 1000;
  const auto r = simulate_fifo(cfg);
  REQUIRE(r.overflow_count > 0);
  CHECK(r.underflow_count == 0);
  const long predicted = predicted_overflow_frame(cfg.write_mhz.value(), cfg.read_mhz.value(), cfg.depth);
  REQUIRE(predicted >= 0);
  CHECK(std::labs(r.events.front().frame - predicted) <= 1);
  CHECK(r.events.front().kind == EventKind::overflow);
}

TEST_CASE("slow writer underflows") {
  FifoConfig cfg;
  cfg.write_mhz = kWriteClockMhz * Rational(99, 100);
  cfg.n_frames = 1000;
  const auto r = simulate_fifo(cfg);
  CHECK(r.underflow_count > 0);
  CHECK(r.overflow_count == 0);
}

TEST_CASE("invalid depth") {
  FifoConfig cfg;
  cfg.depth = 1;
  CHECK_THROWS_AS(simulate_fifo(cfg), std::invalid_argument);
}

}  // TEST_SUITE
