#include "afdm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "afdm/xform.hpp"

namespace afdm {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

Complex doppler_phase(double alpha, double n_index, std::size_t n) {
  const double t = alpha * n_index / static_cast<double>(n);
  return std::polar(1.0, -2.0 * kPi * (t - std::floor(t)));
}

// Gamma_CPP entry for row n of a path with delay l: rows n < l read samples
// from the chirp-periodic prefix and pick up its phase.
Complex cpp_phase(double c1, unsigned delay, std::size_t row, std::size_t n) {
  if (row >= delay || c1 == 0.0) return {1.0, 0.0};
  const double nd = static_cast<double>(n);
  const double back = static_cast<double>(delay) - static_cast<double>(row);
  const double t = c1 * (nd * nd - 2.0 * nd * back);
  return std::polar(1.0, -2.0 * kPi * (t - std::floor(t)));
}

void require_delays_fit(const ChannelRealization& real, std::size_t n) {
  for (unsigned l : real.delays)
    if (l >= n)
      throw PreconditionError("path delay " + std::to_string(l) + " must be below N = " +
                              std::to_string(n));
}

// Row factors Gamma_i[row] Delta_i[row] of one path.
ComplexVector path_row_factors(const ChannelRealization& real, std::size_t path,
                               const WaveformParams& p) {
  const std::size_t n = p.n();
  ComplexVector f(n);
  for (std::size_t row = 0; row < n; ++row)
    f[row] = cpp_phase(p.c1(), real.delays[path], row, n) *
             doppler_phase(real.dopplers[path], static_cast<double>(row), n);
  return f;
}

// out += weight * Gamma Delta Pi^l s
void accumulate_path(const ComplexVector& row_factors, unsigned delay, const ComplexVector& s,
                     Complex weight, ComplexVector& out) {
  const auto n = static_cast<std::size_t>(s.size());
  for (std::size_t row = 0; row < n; ++row)
    out[row] += weight * row_factors[row] * s[(row + n - delay) % n];
}

ComplexMatrix conjugate_by_daft(const ComplexMatrix& h_of_basis_cols, const WaveformParams& p) {
  ComplexMatrix out(h_of_basis_cols.rows(), h_of_basis_cols.cols());
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    out.col(j) = daft(h_of_basis_cols.col(j), p.c1(), p.c2());
  return out;
}

}  // namespace

unsigned ChannelSpec::l_max() const {
  return delays.empty() ? 0u : *std::max_element(delays.begin(), delays.end());
}

void ChannelSpec::validate() const {
  if (delays.empty()) throw InvalidArgument("channel needs at least one path");
  if (!std::is_sorted(delays.begin(), delays.end()))
    throw InvalidArgument("path delays must be nondecreasing");
  if (!std::isfinite(alpha_max) || alpha_max < 0.0)
    throw InvalidArgument("alpha_max must be finite and nonnegative");
  if (doppler_model == DopplerModel::Fixed) {
    if (fixed_dopplers.size() != delays.size())
      throw InvalidArgument("fixed Doppler list must have one entry per path");
    for (double a : fixed_dopplers)
      if (!std::isfinite(a) || std::abs(a) > alpha_max)
        throw InvalidArgument("fixed Doppler exceeds alpha_max");
  }
}

double alpha_max_from_speed(double speed_kmh, double carrier_hz, double subcarrier_spacing_hz) {
  if (subcarrier_spacing_hz <= 0.0) throw InvalidArgument("subcarrier spacing must be positive");
  const double f_max = speed_kmh / 3.6 / kSpeedOfLight * carrier_hz;
  return f_max / subcarrier_spacing_hz;
}

ChannelRealization sample_realization(const ChannelSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t paths = spec.paths();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / static_cast<double>(paths)));
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const auto amax = static_cast<long>(std::floor(spec.alpha_max));
  std::uniform_int_distribution<long> integer_doppler(-amax, amax);

  ChannelRealization real{ComplexVector(paths), spec.delays, std::vector<double>(paths)};
  for (std::size_t i = 0; i < paths; ++i) {
    if (spec.gain_model == GainModel::Rayleigh) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      real.gains[i] = {re, im};
    } else {
      real.gains[i] = {1.0 / std::sqrt(static_cast<double>(paths)), 0.0};
    }
    switch (spec.doppler_model) {
      case DopplerModel::Jakes: real.dopplers[i] = spec.alpha_max * std::cos(angle(rng)); break;
      case DopplerModel::IntegerUniform:
        real.dopplers[i] = static_cast<double>(integer_doppler(rng));
        break;
      case DopplerModel::Fixed: real.dopplers[i] = spec.fixed_dopplers[i]; break;
    }
  }
  return real;
}

ComplexVector apply_channel(const Frame& frame, const ChannelRealization& real, double n0,
                            std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(frame.payload.size());
  const std::size_t cpp = frame.cpp_length();
  for (unsigned l : real.delays)
    if (l > cpp)
      throw PreconditionError("path delay " + std::to_string(l) + " exceeds prefix length " +
                              std::to_string(cpp));

  const ComplexVector tx = frame.samples();
  const auto total = static_cast<std::size_t>(tx.size());
  ComplexVector rx = ComplexVector::Zero(static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < real.paths(); ++i) {
    const unsigned l = real.delays[i];
    for (std::size_t pos = l; pos < total; ++pos) {
      const double n_index = static_cast<double>(pos) - static_cast<double>(cpp);
      rx[pos] += real.gains[i] * doppler_phase(real.dopplers[i], n_index, n) * tx[pos - l];
    }
  }
  if (n0 > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(n0 / 2.0));
    for (std::size_t pos = 0; pos < total; ++pos) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      rx[pos] += Complex{re, im};
    }
  }
  return rx;
}

ComplexMatrix time_domain_matrix(const ChannelRealization& real, const WaveformParams& p) {
  const std::size_t n = p.n();
  require_delays_fit(real, n);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < real.paths(); ++i) {
    const unsigned l = real.delays[i];
    for (std::size_t row = 0; row < n; ++row)
      h(row, (row + n - l) % n) += real.gains[i] * cpp_phase(p.c1(), l, row, n) *
                                   doppler_phase(real.dopplers[i], static_cast<double>(row), n);
  }
  return h;
}

ComplexVector apply_time_domain(const ChannelRealization& real, const WaveformParams& p,
                                const ComplexVector& s) {
  if (static_cast<std::size_t>(s.size()) != p.n()) throw InvalidSize("signal length != N");
  require_delays_fit(real, p.n());
  ComplexVector out = ComplexVector::Zero(s.size());
  for (std::size_t i = 0; i < real.paths(); ++i)
    accumulate_path(path_row_factors(real, i, p), real.delays[i], s, real.gains[i], out);
  return out;
}

EffectiveChannel effective_matrix(const ChannelRealization& real, const WaveformParams& p,
                                  bool keep_per_path) {
  const std::size_t n = p.n();
  require_delays_fit(real, n);

  // Columns of A^H, i.e. idaft of each standard basis vector.
  ComplexMatrix basis(n, n);
  ComplexVector e = ComplexVector::Zero(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    basis.col(j) = idaft(e, p.c1(), p.c2());
    e[j] = 0.0;
  }

  std::vector<ComplexVector> factors;
  for (std::size_t i = 0; i < real.paths(); ++i) factors.push_back(path_row_factors(real, i, p));

  EffectiveChannel out;
  if (!keep_per_path) {
    ComplexMatrix hb(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      ComplexVector col = ComplexVector::Zero(n);
      for (std::size_t i = 0; i < real.paths(); ++i)
        accumulate_path(factors[i], real.delays[i], basis.col(j), real.gains[i], col);
      hb.col(j) = col;
    }
    out.h_eff = conjugate_by_daft(hb, p);
    return out;
  }

  out.h_eff = ComplexMatrix::Zero(n, n);
  out.per_path.reserve(real.paths());
  for (std::size_t i = 0; i < real.paths(); ++i) {
    ComplexMatrix hb(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      ComplexVector col = ComplexVector::Zero(n);
      accumulate_path(factors[i], real.delays[i], basis.col(j), {1.0, 0.0}, col);
      hb.col(j) = col;
    }
    out.per_path.push_back(conjugate_by_daft(hb, p));
    out.h_eff += real.gains[i] * out.per_path.back();
  }
  return out;
}

}  // namespace afdm
