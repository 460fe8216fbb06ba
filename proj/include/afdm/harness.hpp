#pragma once

// Monte-Carlo BER engine and parameter sweeps.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/detect.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

// How the (c1, c2) pair of a run is chosen.
struct WaveformSource {
  enum class Kind { Explicit, Slope, Rule };

  Kind kind = Kind::Rule;
  double c1 = 0.0;               // Explicit
  double c2 = 0.0;               // Explicit
  double k = 0.0;                // Slope
  std::optional<double> c2_override;  // Slope / Rule

  static WaveformSource explicit_params(double c1, double c2) {
    return {Kind::Explicit, c1, c2, 0.0, std::nullopt};
  }
  static WaveformSource slope(double k, std::optional<double> c2 = std::nullopt) {
    return {Kind::Slope, 0.0, 0.0, k, c2};
  }
  // c1 from the alpha_max rule, using ceil(alpha_max) of the channel.
  static WaveformSource rule(std::optional<double> c2 = std::nullopt) {
    return {Kind::Rule, 0.0, 0.0, 0.0, c2};
  }
};

struct SimConfig {
  WaveformSource waveform = WaveformSource::rule();
  std::size_t n = 256;
  Modulation modulation = Modulation::Qam4;
  DetectorConfig detector;  // n0 is overwritten per SNR point
  ChannelSpec channel{{0, 1, 2}, 2.0, GainModel::Rayleigh, DopplerModel::Jakes, {}};
  std::vector<double> snr_db_list{20.0};
  std::uint64_t min_bits = 1'000'000;
  std::uint64_t max_frames = 100'000;
  std::uint64_t master_seed = 1;
  std::optional<std::size_t> cpp_length;  // defaults to l_max
  unsigned threads = 1;

  // Throws InvalidArgument / PreconditionError on an inconsistent config.
  void validate() const;
  WaveformParams resolve_waveform() const;
  std::size_t resolved_cpp_length() const;
};

// Channel/noise parameters for the reference setup: 3 paths at
// delays {0, 1, 2}, alpha_max = 2, Jakes Doppler, Rayleigh gains.
ChannelSpec reference_channel();

struct BerRecord {
  std::string waveform;
  std::size_t n = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double k = 0.0;
  std::string modulation;
  std::string detector;
  std::size_t paths = 0;
  unsigned l_max = 0;
  double alpha_max = 0.0;
  double snr_db = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;
  std::uint64_t seed = 0;

  // not part of the CSV row
  std::uint64_t frames = 0;
  std::uint64_t failed_frames = 0;
  std::uint64_t mp_unconverged = 0;

  // Binomial standard error sqrt(ber (1 - ber) / bits).
  double standard_error() const;
};

// N0 = 10^(-snr_db / 10) for unit symbol energy; +inf dB gives 0.
double snr_to_noise(double snr_db);

// Per-frame seed: mix64(master_seed, snr_index, frame_index).
std::uint64_t frame_seed(std::uint64_t master_seed, std::size_t snr_index, std::uint64_t frame_index);

std::vector<BerRecord> run_ber(const SimConfig& cfg);

enum class SweepTarget { C1, C2 };

// One record per grid value at a fixed SNR. Every grid point reuses the same
// frame seeds, so all points see identical bits, channels and noise.
std::vector<BerRecord> sweep_parameter(const SimConfig& cfg, SweepTarget target,
                                       const std::vector<double>& grid, double snr_db);

void emit_csv(const std::vector<BerRecord>& records, std::ostream& out);
void emit_csv(const std::vector<BerRecord>& records, const std::string& path);
std::vector<BerRecord> read_csv(std::istream& in);

inline constexpr const char* kCsvHeader =
    "waveform,N,c1,c2,k,mod,detector,paths,l_max,alpha_max,snr_db,bits,errors,ber,seed";

}  // namespace afdm
