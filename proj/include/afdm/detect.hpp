#pragma once

// Constellations, LMMSE equalization and Gaussian message-passing detection.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "afdm/types.hpp"

namespace afdm {

using Bits = std::vector<std::uint8_t>;

enum class Modulation { Bpsk, Qpsk, Qam4, Qam16 };

std::string to_string(Modulation m);
Modulation parse_modulation(const std::string& name);

// Unit average energy points indexed by their Gray label read MSB first.
//
//   BPSK   0 -> +1, 1 -> -1
//   QPSK / 4QAM   b0 b1 -> ((1 - 2 b0) + i (1 - 2 b1)) / sqrt(2)
//   16QAM  b0 b1 -> in-phase, b2 b3 -> quadrature, each axis
//          00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3, scaled by 1/sqrt(10)
//
// QPSK is an alias of 4QAM with its own name in reports.
class Constellation {
 public:
  explicit Constellation(Modulation m);

  Modulation modulation() const { return modulation_; }
  std::size_t order() const { return points_.size(); }
  unsigned bits_per_symbol() const { return bits_per_symbol_; }
  const std::vector<Complex>& points() const { return points_; }
  const Complex& point(std::size_t index) const { return points_[index]; }

  // Nearest point by Euclidean distance; ties go to the lower index.
  std::size_t nearest(const Complex& z) const;

 private:
  Modulation modulation_;
  unsigned bits_per_symbol_;
  std::vector<Complex> points_;
};

// Bits are 0/1 bytes. Throws InvalidSize if bits.size() is not a multiple of
// bits_per_symbol().
ComplexVector qam_map(const Bits& bits, const Constellation& c);
Bits qam_demap(const ComplexVector& symbols, const Constellation& c);

// x = H^H (H H^H + n0 I)^{-1} y via an LDL^H factorization. Throws
// SolverFailure when a pivot falls below 1e-12 of the largest one.
ComplexVector lmmse(const ComplexVector& y, const ComplexMatrix& h, double n0);

enum class DetectorKind { Lmmse, Mp };

std::string to_string(DetectorKind k);
DetectorKind parse_detector(const std::string& name);

struct DetectorConfig {
  DetectorKind kind = DetectorKind::Lmmse;
  double n0 = 0.0;
  int mp_iters = 30;
  double mp_damping = 0.6;
  double mp_prune = 1e-3;  // edges with |H| below mp_prune * max|H| are dropped

  void validate() const;
};

struct MpResult {
  ComplexVector symbols;  // hard decisions
  bool converged = false;
  int iterations = 0;
};

// Symbol-domain message passing with Gaussian-approximated interference on
// the factor graph of H (rows = observations, columns = symbols). Stops when
// hard decisions are stable and messages have settled, or at mp_iters. The
// decisions returned are those of the iteration with the largest fraction of
// symbols whose posterior peak is at least 0.99 (earliest on ties).
MpResult mp_detect(const ComplexVector& y, const ComplexMatrix& h, const DetectorConfig& cfg,
                   const Constellation& c);

}  // namespace afdm
