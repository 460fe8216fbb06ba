#pragma once

// Doubly-dispersive (delay-Doppler) channel with P discrete paths:
// g_n(l) = sum_i h_i exp(-i 2 pi alpha_i n / N) delta(l - l_i).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "afdm/types.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

enum class GainModel {
  Rayleigh,  // h_i ~ CN(0, 1/P), i.i.d.
  Unit,      // h_i = 1 / sqrt(P); P = 1 gives a static AWGN channel
};

enum class DopplerModel {
  Jakes,           // alpha_i = alpha_max cos(theta_i), theta_i ~ U[-pi, pi]
  IntegerUniform,  // alpha_i uniform over the integers in [-alpha_max, alpha_max]
  Fixed,           // alpha_i taken from ChannelSpec::fixed_dopplers
};

struct ChannelSpec {
  std::vector<unsigned> delays;  // normalized delays l_i in samples, nondecreasing
  double alpha_max = 0.0;        // normalized to subcarrier spacing
  GainModel gain_model = GainModel::Rayleigh;
  DopplerModel doppler_model = DopplerModel::Jakes;
  std::vector<double> fixed_dopplers;

  std::size_t paths() const { return delays.size(); }
  unsigned l_max() const;

  // Throws InvalidArgument on an empty/unsorted delay list, negative or
  // non-finite alpha_max, or a fixed Doppler list that does not match.
  void validate() const;
};

// alpha_max = (v / c) f0 / delta_f. 540 km/h at 4 GHz with 1 kHz spacing -> 2.
double alpha_max_from_speed(double speed_kmh, double carrier_hz, double subcarrier_spacing_hz);

struct ChannelRealization {
  ComplexVector gains;
  std::vector<unsigned> delays;
  std::vector<double> dopplers;

  std::size_t paths() const { return delays.size(); }
  // f_i = alpha_i / N
  double digital_frequency(std::size_t path, std::size_t n) const {
    return dopplers[path] / static_cast<double>(n);
  }
};

ChannelRealization sample_realization(const ChannelSpec& spec, std::uint64_t seed);

// Passes the prefixed frame through the channel (zero history before the
// first prefix sample) and adds CN(0, n0) noise. The Doppler phase uses the
// receive index n counted from the payload start, so prefix samples sit at
// n = -L..-1. Output has the frame's full length.
ComplexVector apply_channel(const Frame& frame, const ChannelRealization& real, double n0,
                            std::uint64_t seed);

// H = sum_i h_i Gamma_i Delta_i Pi^{l_i}, the payload-to-payload map seen
// after prefix removal.
ComplexMatrix time_domain_matrix(const ChannelRealization& real, const WaveformParams& p);

// H s in O(N P) without forming H.
ComplexVector apply_time_domain(const ChannelRealization& real, const WaveformParams& p,
                                const ComplexVector& s);

struct EffectiveChannel {
  ComplexMatrix h_eff;
  std::vector<ComplexMatrix> per_path;  // H_i without the gain h_i; empty unless requested
};

// H_eff = A H A^H with A = L(c2) F L(c1), built column by column with the
// fast transforms.
EffectiveChannel effective_matrix(const ChannelRealization& real, const WaveformParams& p,
                                  bool keep_per_path = false);

}  // namespace afdm
