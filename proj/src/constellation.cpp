#include "afdm/detect.hpp"

#include <cmath>
#include <limits>

namespace afdm {

namespace {

// Gray label of one 16QAM axis to its amplitude level.
double qam16_level(unsigned two_bits) {
  switch (two_bits) {
    case 0b00: return 3.0;
    case 0b01: return 1.0;
    case 0b11: return -1.0;
    default: return -3.0;
  }
}

}  // namespace

std::string to_string(Modulation m) {
  switch (m) {
    case Modulation::Bpsk: return "bpsk";
    case Modulation::Qpsk: return "qpsk";
    case Modulation::Qam4: return "4qam";
    case Modulation::Qam16: return "16qam";
  }
  return "4qam";
}

Modulation parse_modulation(const std::string& name) {
  if (name == "bpsk") return Modulation::Bpsk;
  if (name == "qpsk") return Modulation::Qpsk;
  if (name == "4qam") return Modulation::Qam4;
  if (name == "16qam") return Modulation::Qam16;
  throw InvalidArgument("unknown modulation '" + name + "'");
}

Constellation::Constellation(Modulation m) : modulation_(m) {
  switch (m) {
    case Modulation::Bpsk:
      bits_per_symbol_ = 1;
      points_ = {{1.0, 0.0}, {-1.0, 0.0}};
      break;
    case Modulation::Qpsk:
    case Modulation::Qam4: {
      bits_per_symbol_ = 2;
      const double a = 1.0 / std::sqrt(2.0);
      for (unsigned label = 0; label < 4; ++label)
        points_.emplace_back(a * (1.0 - 2.0 * ((label >> 1) & 1)), a * (1.0 - 2.0 * (label & 1)));
      break;
    }
    case Modulation::Qam16: {
      bits_per_symbol_ = 4;
      const double a = 1.0 / std::sqrt(10.0);
      for (unsigned label = 0; label < 16; ++label)
        points_.emplace_back(a * qam16_level(label >> 2), a * qam16_level(label & 0b11));
      break;
    }
  }
}

std::size_t Constellation::nearest(const Complex& z) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = std::norm(z - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

ComplexVector qam_map(const Bits& bits, const Constellation& c) {
  const unsigned bps = c.bits_per_symbol();
  if (bits.size() % bps != 0)
    throw InvalidSize("bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                      std::to_string(bps));
  ComplexVector out(static_cast<Eigen::Index>(bits.size() / bps));
  for (Eigen::Index s = 0; s < out.size(); ++s) {
    std::size_t label = 0;
    for (unsigned b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1u);
    out[s] = c.point(label);
  }
  return out;
}

Bits qam_demap(const ComplexVector& symbols, const Constellation& c) {
  const unsigned bps = c.bits_per_symbol();
  Bits out;
  out.reserve(static_cast<std::size_t>(symbols.size()) * bps);
  for (Eigen::Index s = 0; s < symbols.size(); ++s) {
    const std::size_t label = c.nearest(symbols[s]);
    for (unsigned b = bps; b-- > 0;) out.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
  }
  return out;
}

}  // namespace afdm
