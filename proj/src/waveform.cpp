#include "afdm/waveform.hpp"

#include <cmath>

#include "afdm/xform.hpp"

namespace afdm {

namespace {

bool same_value(double a, double b) {
  return std::abs(a - b) <= 1e-15 * std::max({1.0, std::abs(a), std::abs(b)});
}

void require_length(const ComplexVector& v, std::size_t n) {
  if (static_cast<std::size_t>(v.size()) != n)
    throw InvalidSize("vector length " + std::to_string(v.size()) +
                      " does not match waveform size " + std::to_string(n));
}

}  // namespace

std::string to_string(WaveformLabel label) {
  switch (label) {
    case WaveformLabel::Ofdm: return "OFDM";
    case WaveformLabel::Ocdm: return "OCDM";
    case WaveformLabel::Afdm: return "AFDM";
  }
  return "AFDM";
}

WaveformParams::WaveformParams(std::size_t n, double c1, double c2) : n_(n), c1_(c1), c2_(c2) {
  if (n == 0) throw InvalidSize("waveform size must be positive");
  if (!std::isfinite(c1) || !std::isfinite(c2))
    throw InvalidArgument("chirp parameters must be finite");
}

WaveformLabel WaveformParams::label() const {
  if (c1_ == 0.0 && c2_ == 0.0) return WaveformLabel::Ofdm;
  const double ocdm = 1.0 / (2.0 * static_cast<double>(n_));
  if (same_value(c1_, ocdm) && same_value(c2_, ocdm)) return WaveformLabel::Ocdm;
  return WaveformLabel::Afdm;
}

WaveformParams params_from_slope(double k, std::size_t n, std::optional<double> c2) {
  if (n < 2) throw InvalidSize("waveform size must be at least 2");
  const double nd = static_cast<double>(n);
  const double c1 = k / (2.0 * nd);
  if (k == 0.0) return {n, 0.0, 0.0};
  if (k == 1.0) return {n, c1, 1.0 / (2.0 * nd)};
  return {n, c1, c2.value_or(default_afdm_c2(n))};
}

double afdm_c1_rule(unsigned alpha_max, std::size_t n) {
  if (n == 0) throw InvalidSize("waveform size must be positive");
  return (2.0 * alpha_max + 1.0) / (2.0 * static_cast<double>(n));
}

bool representation_condition(unsigned alpha_max, unsigned l_max, std::size_t n) {
  const unsigned long long a = alpha_max;
  const unsigned long long l = l_max;
  return 2 * a * l + 2 * a + l < n;
}

ComplexVector modulate(const ComplexVector& x, const WaveformParams& p) {
  require_length(x, p.n());
  return idaft(x, p.c1(), p.c2());
}

ComplexVector demodulate(const ComplexVector& r, const WaveformParams& p) {
  require_length(r, p.n());
  return daft(r, p.c1(), p.c2());
}

ComplexVector Frame::samples() const {
  ComplexVector out(prefix.size() + payload.size());
  out << prefix, payload;
  return out;
}

Frame add_cpp(const ComplexVector& s, std::size_t cpp_length, double c1) {
  const auto n = static_cast<std::size_t>(s.size());
  if (cpp_length > n)
    throw InvalidSize("prefix length " + std::to_string(cpp_length) + " exceeds N = " +
                      std::to_string(n));
  Frame frame{s, ComplexVector(cpp_length)};
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < cpp_length; ++j) {
    const double t = static_cast<double>(j) - static_cast<double>(cpp_length);  // n in -L..-1
    const double phase = c1 * (nd * nd + 2.0 * nd * t);
    const double frac = phase - std::floor(phase);
    const Complex& src = s[n - cpp_length + j];
    frame.prefix[j] = frac == 0.0 ? src : src * std::polar(1.0, -2.0 * kPi * frac);
  }
  return frame;
}

ComplexVector remove_cpp(const ComplexVector& received, std::size_t cpp_length, std::size_t n) {
  if (static_cast<std::size_t>(received.size()) < cpp_length + n)
    throw InvalidSize("received stream shorter than prefix + payload");
  return received.segment(static_cast<Eigen::Index>(cpp_length), static_cast<Eigen::Index>(n));
}

}  // namespace afdm
