#include <cmath>

#include <Eigen/Cholesky>

#include "afdm/detect.hpp"

namespace afdm {

namespace {
constexpr double kPivotTolerance = 1e-12;
// Off-diagonal magnitude (relative to the largest entry) below which H is
// treated as diagonal; FFT round-off on a diagonal channel sits near 1e-16.
constexpr double kDiagonalTolerance = 1e-13;

bool effectively_diagonal(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return false;
  const double scale = h.cwiseAbs().maxCoeff();
  for (Eigen::Index c = 0; c < h.cols(); ++c)
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      if (r != c && std::abs(h(r, c)) > kDiagonalTolerance * scale) return false;
  return true;
}

void check_pivots(const Eigen::VectorXd& d) {
  const double largest = d.cwiseAbs().maxCoeff();
  if (!(largest > 0.0) || d.minCoeff() <= kPivotTolerance * largest)
    throw SolverFailure("LMMSE system is singular to working precision");
}
}

ComplexVector lmmse(const ComplexVector& y, const ComplexMatrix& h, double n0) {
  if (h.rows() != y.size()) throw InvalidSize("observation length does not match H");
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw InvalidArgument("N0 must be finite and >= 0");

  if (effectively_diagonal(h)) {
    const Eigen::VectorXd d = h.diagonal().cwiseAbs2().array() + n0;
    check_pivots(d);
    return (h.diagonal().conjugate().array() * y.array() / d.array()).matrix();
  }

  ComplexMatrix gram(h.rows(), h.rows());
  gram.noalias() = h * h.adjoint();
  gram.diagonal().array() += n0;

  Eigen::LDLT<ComplexMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw SolverFailure("LDL^H factorization failed");
  check_pivots(ldlt.vectorD().real());

  return h.adjoint() * ldlt.solve(y);
}

}  // namespace afdm
