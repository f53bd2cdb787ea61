#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mmw/channel.hpp"
#include "mmw/fifo.hpp"
#include "mmw/framing.hpp"
#include "mmw/io.hpp"
#include "mmw/link_sim.hpp"
#include "mmw/modem.hpp"
#include "mmw/random.hpp"
#include "mmw/stats.hpp"
#include "mmw/sync.hpp"

namespace mmwsim {

using mmw::io::format_double;

namespace {

constexpr const char* kTool = "mmwsim";

fs::path resolve_out(const std::string& out, const char* default_name) {
  return out.empty() ? default_out_dir() / default_name : fs::path(out);
}

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

void write_manifest(const std::string& command, const Json& config, std::uint64_t seed,
                    const std::vector<fs::path>& outputs) {
  Json m;
  m["tool"] = kTool;
  m["version"] = MMW_VERSION;
  m["subcommand"] = command;
  m["seed"] = seed;
  m["config"] = config;
  Json outs = Json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  m["outputs"] = outs;
  mmw::io::atomic_write(manifest_path(outputs.front()), m.dump(2) + "\n");
}

mmw::Preamble parse_preamble(const std::string& hex) {
  try {
    return mmw::Preamble::from_hex(hex);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

mmw::framing::ExtraByte parse_extra(int k) {
  if (k < 0 || k > 255) throw UsageError("extra byte k must be in 0..255");
  return mmw::framing::ExtraByte{static_cast<std::uint8_t>(k)};
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

}  // namespace

fs::path default_out_dir() {
  if (const char* dir = std::getenv("MMWSIM_OUT_DIR"); dir && *dir) return fs::path(dir);
  return fs::path(".");
}

// ---------------------------------------------------------------------------
// JSON round trips

Json to_json(const BerArgs& a) {
  return Json{{"ebno_list", a.ebno_list},   {"frames", a.frames},
              {"coding", a.coding},         {"channel", a.channel},
              {"echo_gain", a.echo_gain},   {"echo_phase_deg", a.echo_phase_deg},
              {"threshold", a.threshold},   {"preamble", a.preamble},
              {"extra_k", a.extra_k},       {"seed", a.seed},
              {"out", a.out}};
}

void from_json(const Json& j, BerArgs& a) {
  j.at("ebno_list").get_to(a.ebno_list);
  j.at("frames").get_to(a.frames);
  j.at("coding").get_to(a.coding);
  j.at("channel").get_to(a.channel);
  j.at("echo_gain").get_to(a.echo_gain);
  j.at("echo_phase_deg").get_to(a.echo_phase_deg);
  j.at("threshold").get_to(a.threshold);
  j.at("preamble").get_to(a.preamble);
  j.at("extra_k").get_to(a.extra_k);
  j.at("seed").get_to(a.seed);
  j.at("out").get_to(a.out);
}

Json to_json(const SyncArgs& a) {
  return Json{{"mode", a.mode},         {"threshold", a.threshold}, {"p_list", a.p_list},
              {"trials", a.trials},     {"preamble", a.preamble},   {"extra_k", a.extra_k},
              {"seed", a.seed},         {"out", a.out}};
}

void from_json(const Json& j, SyncArgs& a) {
  j.at("mode").get_to(a.mode);
  j.at("threshold").get_to(a.threshold);
  j.at("p_list").get_to(a.p_list);
  j.at("trials").get_to(a.trials);
  j.at("preamble").get_to(a.preamble);
  j.at("extra_k").get_to(a.extra_k);
  j.at("seed").get_to(a.seed);
  j.at("out").get_to(a.out);
}

Json to_json(const PreambleArgs& a) {
  return Json{{"preamble", a.preamble}, {"out", a.out}, {"out_offsets", a.out_offsets}};
}

void from_json(const Json& j, PreambleArgs& a) {
  j.at("preamble").get_to(a.preamble);
  j.at("out").get_to(a.out);
  j.at("out_offsets").get_to(a.out_offsets);
}

Json to_json(const EyeArgs& a) {
  return Json{{"oversampling", a.oversampling}, {"ebno_db", a.ebno_db}, {"symbols", a.symbols},
              {"cutoff_ghz", a.cutoff_ghz},     {"seed", a.seed},       {"out", a.out}};
}

void from_json(const Json& j, EyeArgs& a) {
  j.at("oversampling").get_to(a.oversampling);
  j.at("ebno_db").get_to(a.ebno_db);
  j.at("symbols").get_to(a.symbols);
  j.at("cutoff_ghz").get_to(a.cutoff_ghz);
  j.at("seed").get_to(a.seed);
  j.at("out").get_to(a.out);
}

Json to_json(const FifoArgs& a) {
  return Json{{"depth", a.depth},
              {"frames", a.frames},
              {"write_skew_ppm", a.write_skew_ppm},
              {"balanced", a.balanced},
              {"out", a.out}};
}

void from_json(const Json& j, FifoArgs& a) {
  j.at("depth").get_to(a.depth);
  j.at("frames").get_to(a.frames);
  j.at("write_skew_ppm").get_to(a.write_skew_ppm);
  j.at("balanced").get_to(a.balanced);
  j.at("out").get_to(a.out);
}

Json to_json(const FramesArgs& a) {
  return Json{{"count", a.count},     {"preamble", a.preamble}, {"extra_k", a.extra_k},
              {"seed", a.seed},       {"out", a.out}};
}

void from_json(const Json& j, FramesArgs& a) {
  j.at("count").get_to(a.count);
  j.at("preamble").get_to(a.preamble);
  j.at("extra_k").get_to(a.extra_k);
  j.at("seed").get_to(a.seed);
  j.at("out").get_to(a.out);
}

// ---------------------------------------------------------------------------
// ber

void run_ber(BerArgs a) {
  if (a.frames == 0) throw UsageError("--frames must be positive");
  if (a.ebno_list.empty()) throw UsageError("--ebno-list is empty");
  if (a.coding != "on" && a.coding != "off" && a.coding != "both")
    throw UsageError("--coding must be on, off or both");
  if (a.channel != "awgn" && a.channel != "multipath") throw UsageError("--channel must be awgn or multipath");
  for (double e : a.ebno_list)
    if (!std::isfinite(e)) throw UsageError("--ebno-list values must be finite");
  if (a.threshold < 1 || a.threshold > 32) throw UsageError("--threshold must be in 1..32");

  mmw::link::LinkConfig tmpl;
  tmpl.n_frames = a.frames;
  tmpl.threshold = a.threshold;
  tmpl.preamble = parse_preamble(a.preamble);
  tmpl.extra = parse_extra(a.extra_k);
  tmpl.seed = a.seed;
  tmpl.channel.kind = mmw::channel::kind_from_string(a.channel);
  if (tmpl.channel.kind == mmw::channel::Kind::multipath) {
    const double phi = a.echo_phase_deg * std::numbers::pi / 180.0;
    tmpl.channel.taps = {{1.0, 0.0}, std::polar(a.echo_gain, phi)};
  }
  try {
    tmpl.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const fs::path out = resolve_out(a.out, "ber.csv");
  a.out = out.string();

  std::vector<bool> modes;
  if (a.coding != "off") modes.push_back(true);
  if (a.coding != "on") modes.push_back(false);

  std::ostringstream csv;
  csv << "ebno_db,coding,ber,ci_low,ci_high,n_bits,bit_errors,fer,frames_detected,frames_sent,low_confidence\n";
  for (bool coding : modes) {
    tmpl.coding = coding;
    for (const auto& pt : mmw::link::ber_sweep(tmpl, a.ebno_list)) {
      csv << format_double(pt.ebno_db) << ',' << (coding ? "on" : "off") << ',' << format_double(pt.ber) << ','
          << format_double(pt.ci.low) << ',' << format_double(pt.ci.high) << ',' << pt.bits << ','
          << pt.errors << ',' << (pt.report.fer ? format_double(*pt.report.fer) : std::string()) << ','
          << pt.report.frames_detected << ',' << pt.report.frames_sent << ',' << csv_bool(pt.low_confidence)
          << '\n';
    }
  }
  mmw::io::atomic_write(out, csv.str());
  write_manifest("ber", to_json(a), a.seed, {out});
}

// ---------------------------------------------------------------------------
// sync

void run_sync(SyncArgs a) {
  if (a.mode != "detection" && a.mode != "false-alarm") throw UsageError("--mode must be detection or false-alarm");
  if (a.trials == 0) throw UsageError("--trials must be positive");
  if (a.threshold < 1 || a.threshold > 32) throw UsageError("--threshold must be in 1..32");
  for (double p : a.p_list)
    if (!(p >= 0.0 && p <= 0.5)) throw UsageError("--p-list values must be in [0, 0.5]");
  if (a.mode == "detection" && a.p_list.empty()) throw UsageError("--p-list is empty");
  const mmw::Preamble pre = parse_preamble(a.preamble);
  const auto extra = parse_extra(a.extra_k);

  const fs::path out = resolve_out(a.out, a.mode == "detection" ? "detection.csv" : "false_alarm.csv");
  a.out = out.string();

  std::ostringstream csv;
  if (a.mode == "detection") {
    csv << "p,estimate,ci_low,ci_high,n_trials\n";
    for (const auto& c : mmw::sync::detection_curve(pre, a.threshold, a.p_list, a.trials, a.seed, extra))
      csv << format_double(c.x) << ',' << format_double(c.estimate) << ',' << format_double(c.ci_low) << ','
          << format_double(c.ci_high) << ',' << c.trials << '\n';
  } else {
    const auto curve = mmw::sync::false_alarm_curve(pre, a.trials, a.seed, extra);
    csv << "S,estimate,ci_low,ci_high,n_trials,per_position_estimate,per_position_ci_low,per_position_ci_high,"
           "per_position_trials\n";
    for (std::size_t i = 0; i < curve.per_span.size(); ++i) {
      const auto& s = curve.per_span[i];
      const auto& q = curve.per_position[i];
      csv << static_cast<int>(s.x) << ',' << format_double(s.estimate) << ',' << format_double(s.ci_low) << ','
          << format_double(s.ci_high) << ',' << s.trials << ',' << format_double(q.estimate) << ','
          << format_double(q.ci_low) << ',' << format_double(q.ci_high) << ',' << q.trials << '\n';
    }
  }
  mmw::io::atomic_write(out, csv.str());
  write_manifest("sync", to_json(a), a.seed, {out});
}

// ---------------------------------------------------------------------------
// preamble

void run_preamble(PreambleArgs a) {
  const mmw::Preamble pre = parse_preamble(a.preamble);
  a.preamble = pre.to_hex();
  const fs::path out = resolve_out(a.out, "mcor.csv");
  const fs::path offsets = a.out_offsets.empty() ? fs::path(out.string() + ".offsets.csv") : fs::path(a.out_offsets);
  a.out = out.string();
  a.out_offsets = offsets.string();

  const auto opt = mmw::sync::optimize_extra_byte(pre);
  std::ostringstream curve;
  curve << "k,mcor\n";
  for (int k = 0; k < 256; ++k) curve << k << ',' << opt.curve[static_cast<std::size_t>(k)] << '\n';

  const auto best = mmw::sync::mcor(pre, opt.k);
  std::ostringstream per;
  per << "k,i,score\n";
  for (int i = 0; i < 8; ++i) per << opt.k << ',' << i + 1 << ',' << best.per_offset[static_cast<std::size_t>(i)] << '\n';

  mmw::io::atomic_write(out, curve.str());
  mmw::io::atomic_write(offsets, per.str());
  write_manifest("preamble", to_json(a), 0, {out, offsets});
  std::cout << "k* = " << opt.k << ", mcor* = " << opt.mcor << '\n';
}

// ---------------------------------------------------------------------------
// eye

void run_eye(EyeArgs a) {
  if (a.oversampling < 2) throw UsageError("--oversampling must be >= 2");
  if (a.symbols < 16) throw UsageError("--symbols must be >= 16");
  if (!(a.cutoff_ghz > 0.0)) throw UsageError("--cutoff-ghz must be positive");
  const fs::path out = resolve_out(a.out, "eye.csv");
  a.out = out.string();

  mmw::Rng rng(mmw::derive_seed(a.seed, 0));
  mmw::Bits bits(a.symbols - 1);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  const auto symbols = mmw::modem::map_bpsk<double>(mmw::modem::diff_encode(bits));

  mmw::modem::WaveformConfig wc;
  wc.oversampling = a.oversampling;
  wc.cutoff_ghz = a.cutoff_ghz;
  wc.ebno_db = a.ebno_db;
  wc.seed = mmw::derive_seed(a.seed, 1);
  const auto w = mmw::modem::render_waveform(symbols, wc);
  const auto eye = mmw::modem::eye_traces(w, symbols.size());

  std::ostringstream csv;
  csv << "trace_id,sample_index,amplitude\n";
  for (Eigen::Index r = 0; r < eye.traces.rows(); ++r)
    for (Eigen::Index c = 0; c < eye.traces.cols(); ++c)
      csv << r << ',' << c << ',' << format_double(eye.traces(r, c)) << '\n';
  mmw::io::atomic_write(out, csv.str());
  write_manifest("eye", to_json(a), a.seed, {out});
}

// ---------------------------------------------------------------------------
// fifo

void run_fifo(FifoArgs a) {
  if (a.depth < 2) throw UsageError("--depth must be >= 2");
  if (a.frames == 0) throw UsageError("--frames must be positive");
  if (a.write_skew_ppm <= -1'000'000) throw UsageError("--write-skew-ppm must be > -1000000");
  const fs::path out = resolve_out(a.out, "fifo.json");
  a.out = out.string();

  namespace ff = mmw::fifo;
  ff::FifoConfig cfg;
  cfg.depth = a.depth;
  cfg.n_frames = a.frames;
  if (a.balanced) {
    cfg.write_mhz = cfg.read_mhz;
    cfg.framing_pauses = false;
  }
  cfg.write_mhz = cfg.write_mhz * ff::Rational(1'000'000 + a.write_skew_ppm, 1'000'000);
  const auto rep = ff::simulate_fifo(cfg);

  Json j;
  j["write_mhz"] = Json{{"num", cfg.write_mhz.num}, {"den", cfg.write_mhz.den}};
  j["read_mhz"] = Json{{"num", cfg.read_mhz.num}, {"den", cfg.read_mhz.den}};
  j["framing_pauses"] = cfg.framing_pauses;
  j["read_started"] = rep.read_started;
  j["start_time_ns"] = rep.start_time_ns;
  j["min_occupancy"] = rep.min_occupancy;
  j["max_occupancy"] = rep.max_occupancy;
  j["overflow_count"] = rep.overflow_count;
  j["underflow_count"] = rep.underflow_count;
  Json events = Json::array();
  for (const auto& e : rep.events)
    events.push_back(Json{{"kind", e.kind == ff::EventKind::overflow ? "overflow" : "underflow"},
                          {"tick", e.tick},
                          {"frame", e.frame},
                          {"time_ns", e.time_ns}});
  j["events"] = events;
  mmw::io::atomic_write(out, j.dump(2) + "\n");
  write_manifest("fifo", to_json(a), 0, {out});
}

// ---------------------------------------------------------------------------
// frames

void run_frames(FramesArgs a) {
  if (a.count == 0) throw UsageError("--count must be positive");
  const mmw::Preamble pre = parse_preamble(a.preamble);
  const auto extra = parse_extra(a.extra_k);
  const fs::path out = resolve_out(a.out, "frames.hex");
  a.out = out.string();

  std::vector<mmw::framing::Frame> frames;
  frames.reserve(a.count);
  for (std::uint64_t i = 0; i < a.count; ++i)
    frames.push_back(mmw::framing::build_frame(mmw::link::frame_payload(a.seed, i), pre, extra));
  std::ostringstream os;
  mmw::framing::write_hex_dump(os, frames);
  mmw::io::atomic_write(out, os.str());
  write_manifest("frames", to_json(a), a.seed, {out});
}

// ---------------------------------------------------------------------------
// replay

namespace {

std::string relocate(const std::string& path, const fs::path& out_dir) {
  if (out_dir.empty() || path.empty()) return path;
  return (out_dir / fs::path(path).filename()).string();
}

}  // namespace

void replay(const fs::path& manifest, const fs::path& out_dir) {
  Json m;
  try {
    m = Json::parse(mmw::io::read_file(manifest));
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  if (m.value("tool", "") != kTool) throw UsageError("not an mmwsim manifest");
  const std::string cmd = m.at("subcommand").get<std::string>();
  const Json& c = m.at("config");
  try {
    if (cmd == "ber") {
      BerArgs a;
      from_json(c, a);
      a.out = relocate(a.out, out_dir);
      run_ber(a);
    } else if (cmd == "sync") {
      SyncArgs a;
      from_json(c, a);
      a.out = relocate(a.out, out_dir);
      run_sync(a);
    } else if (cmd == "preamble") {
      PreambleArgs a;
      from_json(c, a);
      a.out = relocate(a.out, out_dir);
      a.out_offsets = relocate(a.out_offsets, out_dir);
      run_preamble(a);
    } else if (cmd == "eye") {
      EyeArgs a;
      from_json(c, a);
      a.out = relocate(a.out, out_dir);
      run_eye(a);
    } else if (cmd == "fifo") {
      FifoArgs a;
      from_json(c, a);
      a.out = relocate(a.out, out_dir);
      run_fifo(a);
    } else if (cmd == "frames") {
      FramesArgs a;
      from_json(c, a);
      a.out = relocate(a.out, out_dir);
      run_frames(a);
    } else {
      throw UsageError("unknown subcommand in manifest: " + cmd);
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed manifest config: ") + e.what());
  }
}

}  // namespace mmwsim
