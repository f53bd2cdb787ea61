#include "mmw/fifo.hpp"

#include <algorithm>
#include <limits>

namespace mmw::fifo {

namespace {

struct Ticks {
  std::int64_t write;
  std::int64_t read;
  // time unit in microseconds is 1 / unit_den
  std::int64_t unit_den;
};

// Integer tick lengths on a common time grid: period = den / num microseconds.
Ticks common_grid(Rational write, Rational read) {
  const std::int64_t d = std::lcm(write.num, read.num);
  return {write.den * (d / write.num), read.den * (d / read.num), d};
}

}  // namespace

FifoReport simulate_fifo(const FifoConfig& cfg) {
  if (cfg.depth < 2) throw std::invalid_argument("simulate_fifo: depth must be >= 2");
  if (cfg.write_mhz.num <= 0 || cfg.read_mhz.num <= 0)
    throw std::invalid_argument("simulate_fifo: rates must be positive");

  const Ticks grid = common_grid(cfg.write_mhz, cfg.read_mhz);
  const double ns_per_unit = 1000.0 / static_cast<double>(grid.unit_den);
  const std::size_t trigger = cfg.depth / 2;
  const std::int64_t total_ticks = static_cast<std::int64_t>(cfg.n_frames * kCycleTicks);

  FifoReport report;
  report.min_occupancy = std::numeric_limits<std::size_t>::max();
  report.trace.reserve(cfg.n_frames);

  std::size_t occupancy = 0;
  std::int64_t next_write = 0;
  std::int64_t next_read = 0;
  std::int64_t tick = -1;  // read-clock ticks since start
  bool started = false;

  auto record = [&](EventKind kind, std::int64_t t) {
    (kind == EventKind::overflow ? report.overflow_count : report.underflow_count) += 1;
    if (report.events.size() < FifoReport::kMaxStoredEvents) {
      const std::int64_t frame = tick < 0 ? -1 : tick / static_cast<std::int64_t>(kCycleTicks);
      report.events.push_back({kind, tick, frame, static_cast<double>(t) * ns_per_unit});
    }
  };
  auto observe = [&] {
    if (!started) return;
    report.min_occupancy = std::min(report.min_occupancy, occupancy);
    report.max_occupancy = std::max(report.max_occupancy, occupancy);
    const auto frame = static_cast<std::size_t>(tick / static_cast<std::int64_t>(kCycleTicks));
    if (frame >= report.trace.size()) report.trace.push_back({occupancy, occupancy});
    auto& f = report.trace[frame];
    f.min = std::min(f.min, occupancy);
    f.max = std::max(f.max, occupancy);
  };

  while (true) {
    // Writes win ties with reads at the same instant.
    if (next_write <= next_read) {
      const std::int64_t t = next_write;
      next_write += grid.write;
      if (occupancy == cfg.depth) {
        record(EventKind::overflow, t);
      } else {
        ++occupancy;
      }
      if (!started && occupancy >= trigger) {
        started = true;
        report.read_started = true;
        // first read tick at or after the triggering write
        next_read = ((t + grid.read - 1) / grid.read) * grid.read;
        report.start_time_ns = static_cast<double>(next_read) * ns_per_unit;
        tick = 0;
        observe();
        continue;
      }
      if (started && tick < total_ticks) observe();
      continue;
    }

    if (!started) {
      next_read += grid.read;
      continue;
    }
    if (tick >= total_ticks) break;

    const auto phase = static_cast<std::size_t>(tick % static_cast<std::int64_t>(kCycleTicks));
    const bool reads = !cfg.framing_pauses ||
                       (phase >= kPreambleTicks && phase < kPreambleTicks + kReadTicks);
    if (reads) {
      if (occupancy == 0) {
        record(EventKind::underflow, next_read);
      } else {
        --occupancy;
      }
    }
    observe();
    next_read += grid.read;
    ++tick;
  }

  if (!started) report.min_occupancy = 0;
  return report;
}

}  // namespace mmw::fifo
