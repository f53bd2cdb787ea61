#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

constexpr const char* kFooter = R"(Exit status: 0 success, 1 runtime failure, 2 usage or validation error.
Outputs go to --out, or to $MMWSIM_OUT_DIR (default: current directory) under
a per-command file name. Every run also writes <out>.manifest.json, which
`mmwsim replay` re-executes to reproduce the outputs byte for byte.

CSV schemas (one header line):
  ber       ebno_db,coding,ber,ci_low,ci_high,n_bits,bit_errors,fer,
            frames_detected,frames_sent,low_confidence
  sync      detection:   p,estimate,ci_low,ci_high,n_trials
            false-alarm: S,estimate,ci_low,ci_high,n_trials,
                         per_position_estimate,per_position_ci_low,
                         per_position_ci_high,per_position_trials
  preamble  k,mcor              (256 rows)
            k,i,score           (offsets file, 8 rows at the optimum k)
  eye       trace_id,sample_index,amplitude
  fifo      JSON report: rates, start time, min/max occupancy, event counts
            and the first 1024 events
  frames    one frame per line, 520 uppercase hex digits)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmwsim: 60 GHz DBPSK link simulator"};
  app.footer(kFooter);
  app.set_version_flag("--version", MMW_VERSION);
  app.require_subcommand(1);

  mmwsim::BerArgs ber;
  auto* c_ber = app.add_subcommand("ber", "BER versus Eb/N0 sweep through the full link");
  c_ber->add_option("--ebno-list", ber.ebno_list, "Eb/N0 points in dB")->delimiter(',')->capture_default_str();
  c_ber->add_option("--frames", ber.frames, "Frames per point")->capture_default_str();
  c_ber->add_option("--coding", ber.coding, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}))
      ->capture_default_str();
  c_ber->add_option("--channel", ber.channel, "awgn or multipath")->check(CLI::IsMember({"awgn", "multipath"}))
      ->capture_default_str();
  c_ber->add_option("--echo-gain", ber.echo_gain, "Second multipath tap magnitude")->capture_default_str();
  c_ber->add_option("--echo-phase-deg", ber.echo_phase_deg, "Second multipath tap phase")->capture_default_str();
  c_ber->add_option("--threshold", ber.threshold, "Sync threshold S")->capture_default_str();
  c_ber->add_option("--preamble", ber.preamble, "Preamble, 8 hex digits")->capture_default_str();
  c_ber->add_option("--extra", ber.extra_k, "Extra byte k")->capture_default_str();
  c_ber->add_option("--seed", ber.seed, "Master seed")->capture_default_str();
  c_ber->add_option("--out", ber.out, "Output CSV path");

  mmwsim::SyncArgs sync;
  auto* c_sync = app.add_subcommand("sync", "Preamble detection or false-alarm curve");
  c_sync->add_option("--mode", sync.mode, "detection or false-alarm")
      ->check(CLI::IsMember({"detection", "false-alarm"}))
      ->capture_default_str();
  c_sync->add_option("--threshold", sync.threshold, "Threshold S (detection mode)")->capture_default_str();
  c_sync->add_option("--p-list", sync.p_list, "Channel error probabilities (detection mode)")
      ->delimiter(',')
      ->capture_default_str();
  c_sync->add_option("--trials", sync.trials, "Trials per point")->capture_default_str();
  c_sync->add_option("--preamble", sync.preamble, "Preamble, 8 hex digits")->capture_default_str();
  c_sync->add_option("--extra", sync.extra_k, "Extra byte k")->capture_default_str();
  c_sync->add_option("--seed", sync.seed, "Master seed")->capture_default_str();
  c_sync->add_option("--out", sync.out, "Output CSV path");

  mmwsim::PreambleArgs pre;
  auto* c_pre = app.add_subcommand("preamble", "Mcor(k) over all extra bytes and the optimum k");
  c_pre->add_option("--preamble", pre.preamble, "Preamble, 8 hex digits")->capture_default_str();
  c_pre->add_option("--out", pre.out, "Curve CSV path");
  c_pre->add_option("--out-offsets", pre.out_offsets, "Per-offset scores CSV (default <out>.offsets.csv)");

  mmwsim::EyeArgs eye;
  auto* c_eye = app.add_subcommand("eye", "Eye-diagram traces of the filtered waveform");
  c_eye->add_option("--oversampling,-L", eye.oversampling, "Samples per symbol (>= 2)")->capture_default_str();
  c_eye->add_option("--ebno", eye.ebno_db, "Eb/N0 in dB")->capture_default_str();
  c_eye->add_option("--symbols", eye.symbols, "Symbols to render")->capture_default_str();
  c_eye->add_option("--cutoff-ghz", eye.cutoff_ghz, "Lowpass cutoff")->capture_default_str();
  c_eye->add_option("--seed", eye.seed, "Master seed")->capture_default_str();
  c_eye->add_option("--out", eye.out, "Output CSV path");

  mmwsim::FifoArgs fifo;
  auto* c_fifo = app.add_subcommand("fifo", "Dual-clock FIFO occupancy simulation");
  c_fifo->add_option("--depth", fifo.depth, "FIFO depth in bytes (>= 2)")->capture_default_str();
  c_fifo->add_option("--frames", fifo.frames, "Frame cycles to simulate")->capture_default_str();
  c_fifo->add_option("--write-skew-ppm", fifo.write_skew_ppm, "Write clock offset in ppm")->capture_default_str();
  c_fifo->add_flag("--balanced", fifo.balanced, "Equal clocks, reads on every tick");
  c_fifo->add_option("--out", fifo.out, "Output JSON path");

  mmwsim::FramesArgs frames;
  auto* c_frames = app.add_subcommand("frames", "Hex dump of transmitted frames");
  c_frames->add_option("--count", frames.count, "Number of frames")->capture_default_str();
  c_frames->add_option("--preamble", frames.preamble, "Preamble, 8 hex digits")->capture_default_str();
  c_frames->add_option("--extra", frames.extra_k, "Extra byte k")->capture_default_str();
  c_frames->add_option("--seed", frames.seed, "Payload seed")->capture_default_str();
  c_frames->add_option("--out", frames.out, "Output path");

  std::string manifest;
  std::string replay_dir;
  auto* c_replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  c_replay->add_option("manifest", manifest, "Manifest JSON")->required();
  c_replay->add_option("--out-dir", replay_dir, "Write outputs here instead of the recorded paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_ber) mmwsim::run_ber(ber);
    else if (*c_sync) mmwsim::run_sync(sync);
    else if (*c_pre) mmwsim::run_preamble(pre);
    else if (*c_eye) mmwsim::run_eye(eye);
    else if (*c_fifo) mmwsim::run_fifo(fifo);
    else if (*c_frames) mmwsim::run_frames(frames);
    else if (*c_replay) mmwsim::replay(manifest, replay_dir);
  } catch (const mmwsim::UsageError& e) {
    std::cerr << "mmwsim: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mmwsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
