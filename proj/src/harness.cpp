#include "afdm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "afdm/seeding.hpp"

namespace afdm {

namespace {

struct FrameOutcome {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  bool failed = false;
  bool mp_unconverged = false;
};

Bits random_bits(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bits bits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

FrameOutcome simulate_frame(const SimConfig& cfg, const WaveformParams& params,
                            const Constellation& constellation, std::size_t cpp, double n0,
                            std::uint64_t seed) {
  const std::size_t bit_count = params.n() * constellation.bits_per_symbol();
  const Bits bits = random_bits(bit_count, stream_seed(seed, Stream::Bits));
  const ComplexVector x = qam_map(bits, constellation);

  const Frame frame = add_cpp(modulate(x, params), cpp, params.c1());
  const ChannelRealization real = sample_realization(cfg.channel, stream_seed(seed, Stream::Channel));
  const ComplexVector rx = apply_channel(frame, real, n0, stream_seed(seed, Stream::Noise));
  const ComplexVector y = demodulate(remove_cpp(rx, cpp, params.n()), params);
  const EffectiveChannel eff = effective_matrix(real, params);

  FrameOutcome out;
  ComplexVector x_hat;
  try {
    if (cfg.detector.kind == DetectorKind::Lmmse) {
      x_hat = lmmse(y, eff.h_eff, n0);
    } else {
      DetectorConfig det = cfg.detector;
      det.n0 = n0;
      MpResult mp = mp_detect(y, eff.h_eff, det, constellation);
      out.mp_unconverged = !mp.converged;
      x_hat = std::move(mp.symbols);
    }
  } catch (const SolverFailure&) {
    out.failed = true;
    return out;
  }

  const Bits decided = qam_demap(x_hat, constellation);
  out.bits = bit_count;
  for (std::size_t i = 0; i < bit_count; ++i) out.errors += decided[i] != bits[i];
  return out;
}

BerRecord measure_point(const SimConfig& cfg, const WaveformParams& params, double snr_db,
                        std::size_t snr_index) {
  const Constellation constellation(cfg.modulation);
  const std::size_t cpp = cfg.resolved_cpp_length();
  const double n0 = snr_to_noise(snr_db);

  BerRecord rec;
  rec.waveform = to_string(params.label());
  rec.n = params.n();
  rec.c1 = params.c1();
  rec.c2 = params.c2();
  rec.k = params.k();
  rec.modulation = to_string(cfg.modulation);
  rec.detector = to_string(cfg.detector.kind);
  rec.paths = cfg.channel.paths();
  rec.l_max = cfg.channel.l_max();
  rec.alpha_max = cfg.channel.alpha_max;
  rec.snr_db = snr_db;
  rec.seed = cfg.master_seed;

  const unsigned workers = std::max(1u, cfg.threads);
  const std::uint64_t batch = workers == 1 ? 1 : 4ull * workers;
  std::vector<FrameOutcome> outcomes;

  std::uint64_t next = 0;
  bool done = false;
  while (!done) {
    const std::uint64_t count = std::min<std::uint64_t>(batch, cfg.max_frames - next);
    outcomes.assign(count, {});
    auto work = [&](unsigned w) {
      for (std::uint64_t i = w; i < count; i += workers)
        outcomes[i] = simulate_frame(cfg, params, constellation, cpp, n0,
                                     frame_seed(cfg.master_seed, snr_index, next + i));
    };
    if (workers == 1 || count == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    // Reduce in frame order; frames past the stopping point are discarded.
    for (std::uint64_t i = 0; i < count; ++i) {
      const FrameOutcome& o = outcomes[i];
      ++rec.frames;
      if (o.failed) {
        ++rec.failed_frames;
      } else {
        rec.bits += o.bits;
        rec.errors += o.errors;
        rec.mp_unconverged += o.mp_unconverged;
      }
      if (rec.bits >= cfg.min_bits || rec.frames >= cfg.max_frames) {
        done = true;
        break;
      }
    }
    next += count;
  }
  rec.ber = rec.bits == 0 ? 0.0 : static_cast<double>(rec.errors) / static_cast<double>(rec.bits);
  return rec;
}

}  // namespace

void SimConfig::validate() const {
  if (n < 2) throw InvalidArgument("N must be at least 2");
  if (min_bits < 1) throw InvalidArgument("min_bits must be >= 1");
  if (max_frames < 1) throw InvalidArgument("max_frames must be >= 1");
  for (double s : snr_db_list)
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
      throw InvalidArgument("SNR values must be finite (or +inf for a noise-free run)");
  channel.validate();
  detector.validate();
  if (channel.l_max() >= n) throw PreconditionError("l_max must be below N");
  const std::size_t cpp = resolved_cpp_length();
  if (cpp < channel.l_max()) throw PreconditionError("prefix length must be >= l_max");
  if (cpp > n) throw PreconditionError("prefix length must not exceed N");
  resolve_waveform();
}

WaveformParams SimConfig::resolve_waveform() const {
  switch (waveform.kind) {
    case WaveformSource::Kind::Explicit: return {n, waveform.c1, waveform.c2};
    case WaveformSource::Kind::Slope: return params_from_slope(waveform.k, n, waveform.c2_override);
    case WaveformSource::Kind::Rule: {
      const auto alpha = static_cast<unsigned>(std::ceil(channel.alpha_max));
      return {n, afdm_c1_rule(alpha, n), waveform.c2_override.value_or(default_afdm_c2(n))};
    }
  }
  return {n, 0.0, 0.0};
}

std::size_t SimConfig::resolved_cpp_length() const {
  return cpp_length.value_or(channel.l_max());
}

ChannelSpec reference_channel() {
  return {{0, 1, 2}, 2.0, GainModel::Rayleigh, DopplerModel::Jakes, {}};
}

double BerRecord::standard_error() const {
  if (bits == 0) return 0.0;
  return std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits));
}

double snr_to_noise(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

std::uint64_t frame_seed(std::uint64_t master_seed, std::size_t snr_index, std::uint64_t frame_index) {
  return mix64(master_seed, snr_index, frame_index);
}

std::vector<BerRecord> run_ber(const SimConfig& cfg) {
  cfg.validate();
  const WaveformParams params = cfg.resolve_waveform();
  std::vector<BerRecord> out;
  out.reserve(cfg.snr_db_list.size());
  for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i)
    out.push_back(measure_point(cfg, params, cfg.snr_db_list[i], i));
  return out;
}

std::vector<BerRecord> sweep_parameter(const SimConfig& cfg, SweepTarget target,
                                       const std::vector<double>& grid, double snr_db) {
  if (grid.empty()) throw InvalidArgument("sweep grid is empty");
  cfg.validate();
  const WaveformParams base = cfg.resolve_waveform();
  std::vector<BerRecord> out;
  out.reserve(grid.size());
  for (double g : grid) {
    const WaveformParams p = target == SweepTarget::C1 ? WaveformParams(base.n(), g, base.c2())
                                                       : WaveformParams(base.n(), base.c1(), g);
    out.push_back(measure_point(cfg, p, snr_db, 0));
  }
  return out;
}

}  // namespace afdm
