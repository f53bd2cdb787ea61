#pragma once

// End-to-end link: random payload -> framing/RS/scrambling -> DBPSK ->
// channel -> differential demodulation -> sync -> descrambling -> RS decode.
//
// The receiver acquires once and then steps one frame (2080 bits) at a time,
// unless redetect_each_frame asks for a fresh correlator search per frame.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmw/bits.hpp"
#include "mmw/channel.hpp"
#include "mmw/framing.hpp"
#include "mmw/preamble.hpp"
#include "mmw/stats.hpp"
#include "mmw/sync.hpp"

namespace mmw::link {

struct LinkConfig {
  std::uint64_t n_frames = 1000;
  channel::ChannelSpec channel;
  int threshold = sync::kDefaultThreshold;
  Preamble preamble = kDefaultPreamble;
  framing::ExtraByte extra = framing::kDefaultExtraByte;
  bool coding = true;
  std::uint64_t seed = 0;
  /// Random bits inserted ahead of the first frame, 0..7.
  int bit_offset = 0;
  bool redetect_each_frame = false;
  /// Keep transmitted and recovered payload bytes in the report.
  bool capture_payload = false;
  /// Frames generated per processing block.
  std::uint64_t block_frames = 256;

  /// Throws std::invalid_argument on the first invalid field.
  void validate() const;
};

struct LinkReport {
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_detected = 0;
  std::uint64_t frames_missed = 0;
  bool sync_acquired = false;
  /// Bit position where acquisition fired, when it did.
  std::uint64_t acquisition_bit = 0;

  /// Channel bits before any decoding, whole stream.
  std::uint64_t raw_bits = 0;
  std::uint64_t raw_bit_errors = 0;
  double ber_raw = 0.0;

  /// Payload bits of detected frames after the (optional) RS decoder.
  std::uint64_t payload_bits = 0;
  std::uint64_t payload_bit_errors = 0;
  std::optional<double> ber_coded;

  /// Frames whose payload was not recovered exactly, missed frames included.
  std::uint64_t frame_errors = 0;
  std::optional<double> fer;

  std::array<std::uint64_t, rs::kT + 1> errors_corrected_hist{};
  std::uint64_t uncorrectable_frames = 0;
  std::uint64_t rs_corrections = 0;

  Bytes tx_payload;
  Bytes rx_payload;

  /// Recomputes the rate fields from the counters.
  void finalize();
  /// Counter-wise sum; rates are recomputed.
  void merge(const LinkReport& other);
};

/// Deterministic for a given config. Throws std::invalid_argument on an
/// invalid config.
LinkReport run_link(const LinkConfig& cfg);

struct SweepPoint {
  double ebno_db = 0.0;
  LinkReport report;
  /// Payload BER with coding, channel BER without.
  double ber = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  stats::Interval ci;
  /// Fewer than 100 error events behind the estimate.
  bool low_confidence = false;
};

/// One run_link per Eb/N0 value with seeds derived from the template's seed.
/// The template's channel kind must be awgn or multipath.
std::vector<SweepPoint> ber_sweep(const LinkConfig& tmpl, std::span<const double> ebno_list);

/// Payload of frame i as generated by run_link with the given seed.
rs::Data frame_payload(std::uint64_t seed, std::uint64_t frame_index);

}  // namespace mmw::link
