#pragma once

// Joint frame and byte synchronization.
//
// A bank of 8 correlators looks at 32-bit windows starting at bit offsets
// 0..7 of the current byte position (39 bits in total). Two banks sit one
// frame (2080 bits) apart; a preamble is accepted when correlators of the
// same rank in both banks reach the threshold S. The rank gives the bit
// alignment inside the byte.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mmw/bits.hpp"
#include "mmw/framing.hpp"
#include "mmw/preamble.hpp"

namespace mmw::sync {

inline constexpr int kCorrelators = 8;
inline constexpr int kPreambleBits = 32;
inline constexpr int kBankSpanBits = kPreambleBits + kCorrelators - 1;
inline constexpr std::size_t kStrideBits = framing::kFrameBits;
/// Preamble + body + next preamble, in bits.
inline constexpr std::size_t kDecisionWindowBits = kStrideBits + kPreambleBits;
inline constexpr int kDefaultThreshold = 28;

static_assert(kBankSpanBits == 39);

using BankScores = std::array<int, kCorrelators>;

/// Matching bit count, 32 - Hamming distance.
inline int correlate(std::uint32_t window, const Preamble& p) {
  return 32 - std::popcount(window ^ p.word);
}

/// 32 bits, one per element. Throws std::invalid_argument on a size mismatch.
int correlate(std::span<const std::uint8_t> window_bits, const Preamble& p);

/// Scores of the 8 correlators whose windows start at pos .. pos+7.
/// Ranks whose window runs past the end of the stream score -1.
BankScores bank_scores(const PackedBits& stream, std::size_t pos, const Preamble& p);

struct SyncDecision {
  bool detected = false;
  /// Bit position of P(1) in the first bank.
  std::size_t frame_start_bit = 0;
  /// Rank of the firing correlator.
  int byte_offset = 0;
  /// Scores of bank 1 (at frame_start_bit - byte_offset) and bank 2 (one frame later).
  std::array<BankScores, 2> scores{};
};

/// Scans byte positions from start_bit. Detection at the first position where
/// some rank scores >= S in both banks; several ranks at one position resolve
/// to the highest summed score, then the lowest rank. Without a detection
/// the scores of the best candidate are reported. Throws unless 1 <= S <= 32.
SyncDecision detect(const PackedBits& stream, const Preamble& p, int threshold,
                    std::size_t start_bit = 0);
SyncDecision detect(std::span<const std::uint8_t> bits, const Preamble& p, int threshold,
                    std::size_t start_bit = 0);

/// Drops the bits ahead of the detected frame start and repacks MSB-first.
/// Throws std::invalid_argument if nothing was detected.
Bytes align(const SyncDecision& decision, std::span<const std::uint8_t> bits);

// ---------------------------------------------------------------------------
// Extra-byte optimisation

struct McorResult {
  int k = 0;
  int mcor = 0;
  /// s_1 .. s_8: score of the window holding the last i bits of d then P(1..32-i).
  std::array<int, 8> per_offset{};
};

/// Throws std::invalid_argument unless 0 <= k <= 255.
McorResult mcor(const Preamble& p, int k);

struct ExtraByteOptimum {
  int k = 0;
  int mcor = 0;
  std::array<int, 256> curve{};
};

/// Exhaustive argmin of Mcor over k; ties go to the smallest k.
ExtraByteOptimum optimize_extra_byte(const Preamble& p);

// ---------------------------------------------------------------------------
// Monte Carlo curves

struct CurvePoint {
  /// Threshold S or channel error probability p.
  double x = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

struct FalseAlarmCurve {
  /// Probability that at least one non-boundary position of a frame span
  /// fires, S = 1..32.
  std::vector<CurvePoint> per_span;
  /// Per-position dual-bank exceedance on disjoint windows of random data,
  /// S = 1..32.
  std::vector<CurvePoint> per_position;
};

/// Streams [P D2 d P D1 d P] built from random data; scans every bank-1
/// position from one bit after the first preamble to one bit before the second.
FalseAlarmCurve false_alarm_curve(const Preamble& p, std::uint64_t n_trials, std::uint64_t seed,
                                  framing::ExtraByte extra = framing::kDefaultExtraByte);

/// Probability that detect() fires at the true boundary with the true rank on
/// a BSC-corrupted two-preamble stream, per p in p_list (each in [0, 0.5]).
std::vector<CurvePoint> detection_curve(const Preamble& p, int threshold, std::span<const double> p_list,
                                        std::uint64_t n_trials, std::uint64_t seed,
                                        framing::ExtraByte extra = framing::kDefaultExtraByte);

}  // namespace mmw::sync
