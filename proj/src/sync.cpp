#include "mmw/sync.hpp"

#include <algorithm>
#include <stdexcept>

#include "mmw/channel.hpp"
#include "mmw/parallel.hpp"
#include "mmw/random.hpp"
#include "mmw/stats.hpp"

namespace mmw::sync {

int correlate(std::span<const std::uint8_t> window_bits, const Preamble& p) {
  if (window_bits.size() != kPreambleBits) throw std::invalid_argument("correlate: window must be 32 bits");
  int score = 0;
  for (int i = 0; i < kPreambleBits; ++i) score += (window_bits[i] & 1) == p.bit(i + 1) ? 1 : 0;
  return score;
}

BankScores bank_scores(const PackedBits& stream, std::size_t pos, const Preamble& p) {
  BankScores s;
  for (int r = 0; r < kCorrelators; ++r) {
    const std::size_t start = pos + static_cast<std::size_t>(r);
    s[r] = start + kPreambleBits <= stream.size() ? correlate(stream.window32(start), p) : -1;
  }
  return s;
}

SyncDecision detect(const PackedBits& stream, const Preamble& p, int threshold, std::size_t start_bit) {
  if (threshold < 1 || threshold > kPreambleBits) throw std::invalid_argument("detect: threshold must be in [1, 32]");

  SyncDecision best;
  int best_min = -1;
  int best_sum = -1;
  for (std::size_t pos = start_bit; pos + kDecisionWindowBits <= stream.size(); pos += 8) {
    const BankScores first = bank_scores(stream, pos, p);
    const BankScores second = bank_scores(stream, pos + kStrideBits, p);

    int fired = -1;
    int fired_sum = -1;
    for (int r = 0; r < kCorrelators; ++r) {
      if (first[r] < threshold || second[r] < threshold) continue;
      const int sum = first[r] + second[r];
      if (sum > fired_sum) {
        fired = r;
        fired_sum = sum;
      }
    }
    if (fired >= 0) return {true, pos + static_cast<std::size_t>(fired), fired, {first, second}};

    for (int r = 0; r < kCorrelators; ++r) {
      const int lo = std::min(first[r], second[r]);
      const int sum = first[r] + second[r];
      if (lo > best_min || (lo == best_min && sum > best_sum)) {
        best_min = lo;
        best_sum = sum;
        best.frame_start_bit = pos + static_cast<std::size_t>(r);
        best.byte_offset = r;
        best.scores = {first, second};
      }
    }
  }
  return best;
}

SyncDecision detect(std::span<const std::uint8_t> bits, const Preamble& p, int threshold, std::size_t start_bit) {
  return detect(PackedBits(bits), p, threshold, start_bit);
}

Bytes align(const SyncDecision& decision, std::span<const std::uint8_t> bits) {
  if (!decision.detected) throw std::invalid_argument("align: no detection");
  return pack_bits(bits, decision.frame_start_bit);
}

McorResult mcor(const Preamble& p, int k) {
  if (k < 0 || k > 255) throw std::invalid_argument("mcor: k must be in [0, 255]");
  McorResult res;
  res.k = k;
  const auto d = static_cast<std::uint32_t>(k);
  for (int i = 1; i <= 8; ++i) {
    // d(i) .. d(1) followed by P(1) .. P(32 - i)
    const std::uint32_t tail = d & ((1u << i) - 1u);
    const std::uint32_t window = (tail << (32 - i)) | (p.word >> i);
    res.per_offset[i - 1] = correlate(window, p);
  }
  res.mcor = *std::max_element(res.per_offset.begin(), res.per_offset.end());
  return res;
}

ExtraByteOptimum optimize_extra_byte(const Preamble& p) {
  ExtraByteOptimum opt;
  opt.mcor = kPreambleBits + 1;
  for (int k = 0; k < 256; ++k) {
    opt.curve[k] = mcor(p, k).mcor;
    if (opt.curve[k] < opt.mcor) {
      opt.mcor = opt.curve[k];
      opt.k = k;
    }
  }
  return opt;
}

namespace {

CurvePoint make_point(double x, std::uint64_t successes, std::uint64_t trials) {
  CurvePoint pt;
  pt.x = x;
  pt.successes = successes;
  pt.trials = trials;
  pt.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  const auto ci = stats::wilson(successes, trials);
  pt.ci_low = ci.low;
  pt.ci_high = ci.high;
  return pt;
}

void fill_random(Rng& rng, std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < out.size(); i += 8) {
    std::uint64_t v = rng();
    for (std::size_t j = i; j < std::min(out.size(), i + 8); ++j, v >>= 8) out[j] = static_cast<std::uint8_t>(v);
  }
}

struct FalseAlarmTally {
  // histogram of the per-span maximum of min(bank1, bank2)
  std::array<std::uint64_t, kPreambleBits + 1> span_max{};
  // histogram of min(bank1, bank2) at disjoint data-only positions
  std::array<std::uint64_t, kPreambleBits + 1> position{};
};

}  // namespace

FalseAlarmCurve false_alarm_curve(const Preamble& p, std::uint64_t n_trials, std::uint64_t seed,
                                  framing::ExtraByte extra) {
  constexpr std::size_t kDataStart = 8 * framing::kPreambleBytes;
  constexpr std::size_t kDataEnd = kDataStart + 8 * framing::kDataBytes;

  const auto tally = parallel_reduce(
      n_trials, FalseAlarmTally{},
      [&](std::uint64_t trial, FalseAlarmTally& acc) {
        Rng rng(derive_seed(seed, trial));
        rs::Data d1{}, d2{};
        fill_random(rng, d2);
        fill_random(rng, d1);
        // [P3 D2 d2][P2 D1 d1][P1]
        Bytes bytes;
        bytes.reserve(2 * framing::kFrameBytes + framing::kPreambleBytes);
        for (const auto& data : {d2, d1}) {
          const auto f = framing::build_frame(data, p, extra);
          bytes.insert(bytes.end(), f.begin(), f.end());
        }
        const auto pb = p.bytes();
        bytes.insert(bytes.end(), pb.begin(), pb.end());
        const PackedBits stream(unpack_bits(bytes));

        int span_max = 0;
        for (std::size_t q = 1; q < kStrideBits; ++q) {
          const int lo = std::min(correlate(stream.window32(q), p), correlate(stream.window32(q + kStrideBits), p));
          span_max = std::max(span_max, lo);
        }
        acc.span_max[span_max] += 1;
        for (std::size_t q = kDataStart; q + kPreambleBits <= kDataEnd; q += kPreambleBits) {
          const int lo = std::min(correlate(stream.window32(q), p), correlate(stream.window32(q + kStrideBits), p));
          acc.position[lo] += 1;
        }
      },
      [](FalseAlarmTally& into, const FalseAlarmTally& from) {
        for (int s = 0; s <= kPreambleBits; ++s) {
          into.span_max[s] += from.span_max[s];
          into.position[s] += from.position[s];
        }
      });

  std::uint64_t positions = 0;
  for (auto c : tally.position) positions += c;

  FalseAlarmCurve curve;
  for (int s = 1; s <= kPreambleBits; ++s) {
    std::uint64_t span_hits = 0, pos_hits = 0;
    for (int m = s; m <= kPreambleBits; ++m) {
      span_hits += tally.span_max[m];
      pos_hits += tally.position[m];
    }
    curve.per_span.push_back(make_point(s, span_hits, n_trials));
    curve.per_position.push_back(make_point(s, pos_hits, positions));
  }
  return curve;
}

std::vector<CurvePoint> detection_curve(const Preamble& p, int threshold, std::span<const double> p_list,
                                        std::uint64_t n_trials, std::uint64_t seed, framing::ExtraByte extra) {
  if (threshold < 1 || threshold > kPreambleBits) throw std::invalid_argument("detection_curve: threshold must be in [1, 32]");
  for (double pe : p_list)
    if (!(pe >= 0.0 && pe <= 0.5)) throw std::invalid_argument("detection_curve: p must be in [0, 0.5]");

  const auto pb = p.bytes();
  std::vector<CurvePoint> out;
  for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
    const double pe = p_list[pi];
    const std::uint64_t point_seed = derive_seed(seed, pi);
    const auto hits = parallel_reduce(
        n_trials, std::uint64_t{0},
        [&](std::uint64_t trial, std::uint64_t& acc) {
          Rng rng(derive_seed(point_seed, trial));
          const auto shift = static_cast<std::size_t>(rng() % 8);
          // lead-in | P | random body ending in d | P | tail
          Bytes bytes(2 * framing::kPreambleBytes + framing::kBodyBytes + 4);
          fill_random(rng, bytes);
          std::copy(pb.begin(), pb.end(), bytes.begin());
          bytes[framing::kFrameBytes - 1] = extra.k;
          std::copy(pb.begin(), pb.end(), bytes.begin() + framing::kFrameBytes);

          const Bits body = unpack_bits(bytes);
          Bits bits;
          bits.reserve(shift + body.size());
          for (std::size_t i = 0; i < shift; ++i) bits.push_back(static_cast<std::uint8_t>(rng() & 1u));
          bits.insert(bits.end(), body.begin(), body.end());
          channel::apply_bsc_in_place(bits, pe, rng());

          const auto dec = detect(PackedBits(bits), p, threshold);
          if (dec.detected && dec.frame_start_bit == shift && dec.byte_offset == static_cast<int>(shift)) acc += 1;
        },
        [](std::uint64_t& into, std::uint64_t from) { into += from; });
    out.push_back(make_point(pe, hits, n_trials));
  }
  return out;
}

}  // namespace mmw::sync
