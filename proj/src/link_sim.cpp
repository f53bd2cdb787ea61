#include "mmw/link_sim.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "mmw/modem.hpp"
#include "mmw/parallel.hpp"
#include "mmw/random.hpp"

namespace mmw::link {

namespace {

constexpr std::uint64_t kPayloadStream = 0x5041594C4F4144ull;
constexpr std::uint64_t kChannelStream = 0x4348414E4E454Cull;
constexpr std::uint64_t kLeadStream = 0x4C454144ull;

// Stateful channel so that block-wise processing behaves like one stream.
class ChannelPipe {
 public:
  ChannelPipe(const channel::ChannelSpec& spec, std::uint64_t seed) : spec_(spec), seed_(seed) {}

  Bits process(std::span<const std::uint8_t> tx) {
    const std::uint64_t chunk_seed = derive_seed(seed_, chunk_++);
    switch (spec_.kind) {
      case channel::Kind::none:
        return Bits(tx.begin(), tx.end());
      case channel::Kind::bsc:
        return channel::apply_bsc(tx, spec_.p, chunk_seed);
      case channel::Kind::awgn:
      case channel::Kind::multipath:
        break;
    }

    Bits coded;
    if (first_) {
      coded = modem::diff_encode(tx, 0);
      first_ = false;
    } else {
      coded.resize(tx.size());
      std::uint8_t c = last_coded_;
      for (std::size_t k = 0; k < tx.size(); ++k) coded[k] = c = c ^ (tx[k] & 1u);
    }
    if (!coded.empty()) last_coded_ = coded.back();

    modem::SymbolStream s = modem::map_bpsk(coded);
    if (spec_.kind == channel::Kind::multipath && spec_.taps.size() > 1) {
      modem::SymbolStream ext(history_.size() + s.size());
      ext << history_, s;
      const modem::SymbolStream conv = channel::apply_multipath(ext, spec_.taps);
      const auto keep = std::min<Eigen::Index>(static_cast<Eigen::Index>(spec_.taps.size()) - 1, ext.size());
      history_ = ext.tail(keep);
      s = conv.segment(ext.size() - s.size(), s.size());
    }
    const modem::SymbolStream r = channel::apply_awgn(s, spec_.ebno_db, chunk_seed);
    return demod_.push(r);
  }

 private:
  channel::ChannelSpec spec_;
  std::uint64_t seed_;
  std::uint64_t chunk_ = 0;
  bool first_ = true;
  std::uint8_t last_coded_ = 0;
  modem::SymbolStream history_;
  modem::DiffDemodulator<double> demod_;
};

std::uint64_t bit_errors(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] ^ b[i]) & 1u;
  return n;
}

std::uint64_t byte_bit_errors(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
  return n;
}

class Receiver {
 public:
  Receiver(const LinkConfig& cfg, LinkReport& report) : cfg_(cfg), report_(report) {}

  void push(std::span<const std::uint8_t> bits) {
    buf_.insert(buf_.end(), bits.begin(), bits.end());
    run();
    trim();
  }

 private:
  std::uint64_t end() const { return base_ + buf_.size(); }

  void run() {
    while (true) {
      if (!locked_) {
        if (!search()) return;
        continue;
      }
      if (next_frame_ + framing::kFrameBits > end()) return;
      parse(next_frame_);
      if (cfg_.redetect_each_frame) {
        locked_ = false;
        search_from_ = next_frame_ + framing::kFrameBits - 4;
      } else {
        next_frame_ += framing::kFrameBits;
      }
    }
  }

  // Scans in bounded slices; true once a preamble pair has been found,
  // false when more bits are needed.
  bool search() {
    constexpr std::size_t kSliceBits = sync::kDecisionWindowBits + 8 * 256;
    if (search_from_ < base_) search_from_ = base_;
    while (true) {
      const auto rel = static_cast<std::size_t>(search_from_ - base_);
      if (rel + sync::kDecisionWindowBits > buf_.size()) return false;
      const std::size_t len = std::min(kSliceBits, buf_.size() - rel);
      const PackedBits slice(std::span<const std::uint8_t>(buf_).subspan(rel, len));
      const auto dec = sync::detect(slice, cfg_.preamble, cfg_.threshold);
      if (dec.detected) {
        locked_ = true;
        next_frame_ = search_from_ + dec.frame_start_bit;
        if (!report_.sync_acquired) {
          report_.sync_acquired = true;
          report_.acquisition_bit = next_frame_;
        }
        return true;
      }
      search_from_ += 8 * ((len - sync::kDecisionWindowBits) / 8 + 1);
    }
  }

  void parse(std::uint64_t pos) {
    const auto start = static_cast<std::size_t>(pos - base_);
    const Bytes raw = pack_bits(std::span<const std::uint8_t>(buf_).subspan(start, framing::kFrameBits));
    const auto parsed = framing::parse_frame(raw, cfg_.preamble, cfg_.coding);

    const auto lead = static_cast<std::uint64_t>(cfg_.bit_offset);
    if (pos < lead || (pos - lead) % framing::kFrameBits != 0) return;
    const std::uint64_t index = (pos - lead) / framing::kFrameBits;
    if (index >= cfg_.n_frames || (seen_any_ && index <= last_index_)) return;
    seen_any_ = true;
    last_index_ = index;

    const rs::Data expected = frame_payload(cfg_.seed, index);
    report_.frames_detected += 1;
    report_.payload_bits += 8 * rs::kK;
    const std::uint64_t errs = byte_bit_errors(parsed.data, expected);
    report_.payload_bit_errors += errs;
    if (errs != 0) report_.frame_errors += 1;
    if (cfg_.coding) {
      if (parsed.decode.uncorrectable) {
        report_.uncorrectable_frames += 1;
      } else {
        report_.errors_corrected_hist[static_cast<std::size_t>(parsed.decode.errors_corrected)] += 1;
        report_.rs_corrections += static_cast<std::uint64_t>(parsed.decode.errors_corrected);
      }
    }
    if (cfg_.capture_payload) report_.rx_payload.insert(report_.rx_payload.end(), parsed.data.begin(), parsed.data.end());
  }

  void trim() {
    const std::uint64_t keep_from = locked_ ? next_frame_ : search_from_;
    if (keep_from <= base_) return;
    const auto drop = static_cast<std::size_t>(std::min<std::uint64_t>(keep_from - base_, buf_.size()));
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(drop));
    base_ += drop;
  }

  const LinkConfig& cfg_;
  LinkReport& report_;
  Bits buf_;
  std::uint64_t base_ = 0;
  bool locked_ = false;
  std::uint64_t search_from_ = 0;
  std::uint64_t next_frame_ = 0;
  bool seen_any_ = false;
  std::uint64_t last_index_ = 0;
};

std::optional<double> ratio_if(bool available, std::uint64_t num, std::uint64_t den) {
  if (!available || den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void LinkConfig::validate() const {
  if (n_frames == 0) throw std::invalid_argument("n_frames must be positive");
  if (threshold < 1 || threshold > 32) throw std::invalid_argument("threshold must be in [1, 32]");
  if (bit_offset < 0 || bit_offset > 7) throw std::invalid_argument("bit_offset must be in [0, 7]");
  if (block_frames == 0) throw std::invalid_argument("block_frames must be positive");
  channel.validate();
}

void LinkReport::finalize() {
  frames_missed = frames_sent - frames_detected;
  ber_raw = raw_bits ? static_cast<double>(raw_bit_errors) / static_cast<double>(raw_bits) : 0.0;
  const bool available = frames_detected > 0;
  ber_coded = ratio_if(available, payload_bit_errors, payload_bits);
  fer = ratio_if(available, frame_errors, frames_sent);
}

void LinkReport::merge(const LinkReport& o) {
  frames_sent += o.frames_sent;
  frames_detected += o.frames_detected;
  sync_acquired = sync_acquired || o.sync_acquired;
  raw_bits += o.raw_bits;
  raw_bit_errors += o.raw_bit_errors;
  payload_bits += o.payload_bits;
  payload_bit_errors += o.payload_bit_errors;
  frame_errors += o.frame_errors;
  for (std::size_t i = 0; i < errors_corrected_hist.size(); ++i) errors_corrected_hist[i] += o.errors_corrected_hist[i];
  uncorrectable_frames += o.uncorrectable_frames;
  rs_corrections += o.rs_corrections;
  tx_payload.insert(tx_payload.end(), o.tx_payload.begin(), o.tx_payload.end());
  rx_payload.insert(rx_payload.end(), o.rx_payload.begin(), o.rx_payload.end());
  finalize();
}

rs::Data frame_payload(std::uint64_t seed, std::uint64_t frame_index) {
  Rng rng(derive_seed(derive_seed(seed, kPayloadStream), frame_index));
  rs::Data data{};
  for (std::size_t i = 0; i < data.size(); i += 8) {
    std::uint64_t v = rng();
    for (std::size_t j = i; j < std::min(data.size(), i + 8); ++j, v >>= 8) data[j] = static_cast<std::uint8_t>(v);
  }
  return data;
}

LinkReport run_link(const LinkConfig& cfg) {
  cfg.validate();

  LinkReport report;
  report.frames_sent = cfg.n_frames;
  ChannelPipe pipe(cfg.channel, derive_seed(derive_seed(cfg.seed, kChannelStream), cfg.channel.seed));
  Receiver rx(cfg, report);

  for (std::uint64_t first = 0; first < cfg.n_frames; first += cfg.block_frames) {
    const std::uint64_t last = std::min(cfg.n_frames, first + cfg.block_frames);
    Bytes bytes;
    bytes.reserve((last - first) * framing::kFrameBytes + framing::kPreambleBytes);
    for (std::uint64_t i = first; i < last; ++i) {
      const rs::Data data = frame_payload(cfg.seed, i);
      const auto frame = framing::build_frame(data, cfg.preamble, cfg.extra);
      bytes.insert(bytes.end(), frame.begin(), frame.end());
      if (cfg.capture_payload) report.tx_payload.insert(report.tx_payload.end(), data.begin(), data.end());
    }
    // the stream ends on the preamble the last frame's extra byte precedes
    if (last == cfg.n_frames) {
      const auto p = cfg.preamble.bytes();
      bytes.insert(bytes.end(), p.begin(), p.end());
    }

    Bits tx;
    if (first == 0) {
      Rng lead(derive_seed(cfg.seed, kLeadStream));
      for (int i = 0; i < cfg.bit_offset; ++i) tx.push_back(static_cast<std::uint8_t>(lead() & 1u));
    }
    const Bits body = unpack_bits(bytes);
    tx.insert(tx.end(), body.begin(), body.end());

    const Bits received = pipe.process(tx);
    report.raw_bits += tx.size();
    report.raw_bit_errors += bit_errors(tx, received);
    rx.push(received);
  }

  report.frame_errors += report.frames_sent - report.frames_detected;
  report.finalize();
  return report;
}

std::vector<SweepPoint> ber_sweep(const LinkConfig& tmpl, std::span<const double> ebno_list) {
  if (tmpl.channel.kind != channel::Kind::awgn && tmpl.channel.kind != channel::Kind::multipath)
    throw std::invalid_argument("ber_sweep: channel must be awgn or multipath");
  tmpl.validate();

  std::vector<SweepPoint> points(ebno_list.size());
  parallel_reduce(
      ebno_list.size(), 0,
      [&](std::uint64_t i, int&) {
        LinkConfig cfg = tmpl;
        cfg.channel.ebno_db = ebno_list[i];
        cfg.seed = derive_seed(tmpl.seed, i);
        SweepPoint& pt = points[i];
        pt.ebno_db = ebno_list[i];
        pt.report = run_link(cfg);
        if (cfg.coding) {
          pt.bits = pt.report.payload_bits;
          pt.errors = pt.report.payload_bit_errors;
        } else {
          pt.bits = pt.report.raw_bits;
          pt.errors = pt.report.raw_bit_errors;
        }
        pt.ber = pt.bits ? static_cast<double>(pt.errors) / static_cast<double>(pt.bits) : 0.0;
        pt.ci = stats::wilson(pt.errors, pt.bits);
        pt.low_confidence = pt.errors < 100;
      },
      [](int&, int) {});
  return points;
}

}  // namespace mmw::link
