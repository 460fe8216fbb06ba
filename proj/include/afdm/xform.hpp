#pragma once

// Discrete chirp transforms: DFT, DAFT and DFnT.
//
// Every transform here is unitary (1/sqrt(N) in both directions). The DAFT is
// y = L(c2) F L(c1) x with L(c) = diag(exp(-i 2 pi c n^2)) and F the unitary
// DFT. Fast paths (chirp multiply, radix-2 FFT, chirp multiply) are used when
// N is a power of two; other sizes fall back to the explicit matrices below.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "afdm/types.hpp"

namespace afdm {

// Chirp parameter at which DAFT(c, c) equals the DFnT up to exp(i pi/4).
// The sign follows from L(c) carrying exp(-i 2 pi c n^2); under the conjugate
// convention the same point is quoted as +1/(2N).
inline double ocdm_chirp(std::size_t n) { return -1.0 / (2.0 * static_cast<double>(n)); }

struct ChirpPhase {
  double c = 0.0;
  std::size_t n = 0;
  ComplexVector entries;  // entries[k] = exp(-i 2 pi c k^2)
};

ChirpPhase chirp_phase(double c, std::size_t n);

bool is_power_of_two(std::size_t n);

// Unitary DFT / inverse DFT.
ComplexVector dft(const ComplexVector& x);
ComplexVector idft(const ComplexVector& x);

ComplexVector daft(const ComplexVector& x, double c1, double c2);
ComplexVector idaft(const ComplexVector& x, double c1, double c2);

// Even N only; odd N throws UnsupportedSize.
ComplexVector dfnt(const ComplexVector& x);
ComplexVector idfnt(const ComplexVector& x);

enum class TransformKind { Dft, Daft, Dfnt };

struct TransformMatrix {
  std::size_t n = 0;
  TransformKind kind = TransformKind::Dft;
  double c1 = 0.0;
  double c2 = 0.0;
  ComplexMatrix data;
};

// Explicit O(N^2) matrices assembled from their diagonal/DFT factors.
TransformMatrix dft_matrix(std::size_t n);
TransformMatrix daft_matrix(std::size_t n, double c1, double c2);
TransformMatrix dfnt_matrix(std::size_t n);

// ||M M^H - I||_F
double unitarity_error(const ComplexMatrix& m);

struct OracleCheck {
  std::string name;
  std::size_t n = 0;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return error <= tolerance; }
};

// Fast path vs. explicit matrix, unitarity and DFT/DFnT degeneracies of the
// DAFT on random inputs. Drives the `xform-check` subcommand.
std::vector<OracleCheck> run_oracle_checks(const std::vector<std::size_t>& sizes,
                                           std::uint64_t seed);

}  // namespace afdm
