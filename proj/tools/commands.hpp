#pragma once

// Subcommand configurations and runners for mmwsim. Each runner writes its
// outputs plus a JSON manifest from which the run can be replayed.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace mmwsim {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct BerArgs {
  std::vector<double> ebno_list{4, 6, 8, 10};
  std::uint64_t frames = 1000;
  /// "on", "off" or "both"
  std::string coding = "on";
  std::string channel = "awgn";
  /// Second multipath tap as magnitude and phase in degrees.
  double echo_gain = 0.0;
  double echo_phase_deg = 90.0;
  int threshold = 28;
  std::string preamble = "1ACFFC1D";
  int extra_k = 64;
  std::uint64_t seed = 0;
  std::string out;
};

struct SyncArgs {
  /// "detection" or "false-alarm"
  std::string mode = "false-alarm";
  int threshold = 28;
  std::vector<double> p_list{0.0, 0.01, 0.02, 0.05, 0.1};
  std::uint64_t trials = 10000;
  std::string preamble = "1ACFFC1D";
  int extra_k = 64;
  std::uint64_t seed = 0;
  std::string out;
};

struct PreambleArgs {
  std::string preamble = "1ACFFC1D";
  std::string out;
  std::string out_offsets;
};

struct EyeArgs {
  int oversampling = 8;
  double ebno_db = 20.0;
  std::uint64_t symbols = 400;
  double cutoff_ghz = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct FifoArgs {
  std::size_t depth = 512;
  std::uint64_t frames = 10000;
  /// Write-clock offset in parts per million of the nominal f1.
  std::int64_t write_skew_ppm = 0;
  bool balanced = false;
  std::string out;
};

struct FramesArgs {
  std::uint64_t count = 4;
  std::string preamble = "1ACFFC1D";
  int extra_k = 64;
  std::uint64_t seed = 0;
  std::string out;
};

/// $MMWSIM_OUT_DIR or the working directory.
fs::path default_out_dir();

Json to_json(const BerArgs& a);
Json to_json(const SyncArgs& a);
Json to_json(const PreambleArgs& a);
Json to_json(const EyeArgs& a);
Json to_json(const FifoArgs& a);
Json to_json(const FramesArgs& a);

void from_json(const Json& j, BerArgs& a);
void from_json(const Json& j, SyncArgs& a);
void from_json(const Json& j, PreambleArgs& a);
void from_json(const Json& j, EyeArgs& a);
void from_json(const Json& j, FifoArgs& a);
void from_json(const Json& j, FramesArgs& a);

/// Runners fill in default output paths, write outputs and the manifest.
/// Bad argument values throw UsageError; anything else is a runtime failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void run_ber(BerArgs a);
void run_sync(SyncArgs a);
void run_preamble(PreambleArgs a);
void run_eye(EyeArgs a);
void run_fifo(FifoArgs a);
void run_frames(FramesArgs a);

/// Re-runs the command recorded in a manifest. With a non-empty out_dir the
/// outputs keep their file names but land in out_dir.
void replay(const fs::path& manifest, const fs::path& out_dir);

}  // namespace mmwsim
