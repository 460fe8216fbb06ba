#pragma once

// Unified OFDM / OCDM / AFDM modulator keyed by the chirp slope k = 2 N c1.

#include <cstddef>
#include <optional>
#include <string>

#include "afdm/types.hpp"

namespace afdm {

enum class WaveformLabel { Ofdm, Ocdm, Afdm };

std::string to_string(WaveformLabel label);

class WaveformParams {
 public:
  WaveformParams(std::size_t n, double c1, double c2);

  std::size_t n() const { return n_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double k() const { return 2.0 * static_cast<double>(n_) * c1_; }

  // OFDM at c1 = c2 = 0, OCDM at c1 = c2 = 1/(2N), AFDM otherwise.
  WaveformLabel label() const;

 private:
  std::size_t n_;
  double c1_;
  double c2_;
};

// Default AFDM c2: rational and well below 1/(2N).
inline double default_afdm_c2(std::size_t n) {
  const double nd = static_cast<double>(n);
  return 1.0 / (4.0 * nd * nd);
}

// c1 = k / (2N). k = 0 pins c2 = 0, k = 1 pins c2 = 1/(2N); any other slope
// takes `c2` when given, else default_afdm_c2(N).
WaveformParams params_from_slope(double k, std::size_t n,
                                 std::optional<double> c2 = std::nullopt);

// c1 = (2 alpha_max + 1) / (2N).
double afdm_c1_rule(unsigned alpha_max, std::size_t n);

// 2 alpha_max l_max + 2 alpha_max + l_max < N: the DAFT-domain response keeps
// every delay-Doppler path apart.
bool representation_condition(unsigned alpha_max, unsigned l_max, std::size_t n);

ComplexVector modulate(const ComplexVector& x, const WaveformParams& p);
ComplexVector demodulate(const ComplexVector& r, const WaveformParams& p);

struct Frame {
  ComplexVector payload;  // s[0..N-1]
  ComplexVector prefix;   // s[-L..-1]
  std::size_t cpp_length() const { return static_cast<std::size_t>(prefix.size()); }

  // prefix followed by payload, as transmitted
  ComplexVector samples() const;
};

// Chirp-periodic prefix: s[n] = s[N+n] exp(-i 2 pi c1 (N^2 + 2 N n)) for
// n = -L..-1. Reduces to a cyclic prefix when 2 N c1 is an integer and N is
// even, and in particular when c1 = 0.
Frame add_cpp(const ComplexVector& s, std::size_t cpp_length, double c1);

// Drops the first `cpp_length` samples of a received stream and returns the
// next N.
ComplexVector remove_cpp(const ComplexVector& received, std::size_t cpp_length, std::size_t n);

}  // namespace afdm
