#include "afdm/xform.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

namespace afdm {

namespace {

// exp(-i 2 pi t), with t reduced mod 1 first so large c n^2 keeps precision.
Complex unit_phase(double t) {
  const double frac = t - std::floor(t);
  const double a = -2.0 * kPi * frac;
  return {std::cos(a), std::sin(a)};
}

void require_nonempty(std::size_t n) {
  if (n == 0)
    throw InvalidSize("transform size must be positive");
}

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n), bitrev_(n), twiddles_(n / 2) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bitrev_[i] = r;
    }
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
      twiddles_[k] = {std::cos(a), std::sin(a)};
    }
  }

  // Unnormalized forward (sign -1) or backward (sign +1) transform in place.
  void execute(ComplexVector& x, bool inverse) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (i < bitrev_[i]) std::swap(x[i], x[bitrev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          Complex w = twiddles_[k * stride];
          if (inverse) w = std::conj(w);
          const Complex u = x[start + k];
          const Complex v = x[start + k + half] * w;
          x[start + k] = u + v;
          x[start + k + half] = u - v;
        }
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddles_;
};

const FftPlan& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, FftPlan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, FftPlan(n)).first;
  return it->second;
}

// Dense unitary DFT matrix, F[m, k] = exp(-i 2 pi m k / N) / sqrt(N).
ComplexMatrix dense_dft(std::size_t n) {
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      f(m, k) = scale * unit_phase(static_cast<double>((m * k) % n) / static_cast<double>(n));
  return f;
}

ComplexVector unitary_dft(const ComplexVector& x, bool inverse) {
  const auto n = static_cast<std::size_t>(x.size());
  require_nonempty(n);
  if (!is_power_of_two(n)) {
    ComplexMatrix f = dense_dft(n);
    return inverse ? ComplexVector(f.adjoint() * x) : ComplexVector(f * x);
  }
  ComplexVector y = x;
  plan_for(n).execute(y, inverse);
  y /= std::sqrt(static_cast<double>(n));
  return y;
}

// Fresnel chirps for even N, with integer exponents reduced mod 2N:
// theta1[m] = exp(-i pi/4) exp(i pi m^2 / N), theta2[n] = exp(i pi n^2 / N).
ComplexVector fresnel_chirp(std::size_t n, bool with_quarter_phase) {
  ComplexVector out(n);
  const std::size_t period = 2 * n;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>((k * k) % period) / static_cast<double>(period);
    out[k] = std::conj(unit_phase(t));
  }
  if (with_quarter_phase) out *= std::polar(1.0, -kPi / 4.0);
  return out;
}

void require_even(std::size_t n) {
  require_nonempty(n);
  if (n % 2 != 0)
    throw UnsupportedSize("DFnT is only implemented for even N");
}

ComplexVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {g(rng), g(rng)};
  return v;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

ChirpPhase chirp_phase(double c, std::size_t n) {
  require_nonempty(n);
  ChirpPhase out{c, n, ComplexVector(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double k2 = static_cast<double>(k) * static_cast<double>(k);
    out.entries[k] = unit_phase(c * k2);
  }
  return out;
}

ComplexVector dft(const ComplexVector& x) { return unitary_dft(x, false); }
ComplexVector idft(const ComplexVector& x) { return unitary_dft(x, true); }

ComplexVector daft(const ComplexVector& x, double c1, double c2) {
  const auto n = static_cast<std::size_t>(x.size());
  require_nonempty(n);
  const auto l1 = chirp_phase(c1, n);
  const auto l2 = chirp_phase(c2, n);
  ComplexVector y = dft(x.cwiseProduct(l1.entries));
  return y.cwiseProduct(l2.entries);
}

ComplexVector idaft(const ComplexVector& x, double c1, double c2) {
  const auto n = static_cast<std::size_t>(x.size());
  require_nonempty(n);
  const auto l1 = chirp_phase(c1, n);
  const auto l2 = chirp_phase(c2, n);
  ComplexVector s = idft(x.cwiseProduct(l2.entries.conjugate()));
  return s.cwiseProduct(l1.entries.conjugate());
}

ComplexVector dfnt(const ComplexVector& x) {
  const auto n = static_cast<std::size_t>(x.size());
  require_even(n);
  ComplexVector y = dft(x.cwiseProduct(fresnel_chirp(n, true)));
  return y.cwiseProduct(fresnel_chirp(n, false));
}

ComplexVector idfnt(const ComplexVector& x) {
  const auto n = static_cast<std::size_t>(x.size());
  require_even(n);
  ComplexVector s = idft(x.cwiseProduct(fresnel_chirp(n, false).conjugate()));
  return s.cwiseProduct(fresnel_chirp(n, true).conjugate());
}

TransformMatrix dft_matrix(std::size_t n) {
  require_nonempty(n);
  return {n, TransformKind::Dft, 0.0, 0.0, dense_dft(n)};
}

TransformMatrix daft_matrix(std::size_t n, double c1, double c2) {
  require_nonempty(n);
  const auto l1 = chirp_phase(c1, n);
  const auto l2 = chirp_phase(c2, n);
  ComplexMatrix a = l2.entries.asDiagonal() * dense_dft(n) * l1.entries.asDiagonal();
  return {n, TransformKind::Daft, c1, c2, std::move(a)};
}

TransformMatrix dfnt_matrix(std::size_t n) {
  require_even(n);
  ComplexMatrix phi = fresnel_chirp(n, false).asDiagonal() * dense_dft(n) *
                      fresnel_chirp(n, true).asDiagonal();
  return {n, TransformKind::Dfnt, 0.0, 0.0, std::move(phi)};
}

double unitarity_error(const ComplexMatrix& m) {
  const auto n = m.rows();
  return (m * m.adjoint() - ComplexMatrix::Identity(n, n)).norm();
}

std::vector<OracleCheck> run_oracle_checks(const std::vector<std::size_t>& sizes,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> chirp_dist(-0.5, 0.5);
  std::vector<OracleCheck> out;

  for (std::size_t n : sizes) {
    const ComplexVector x = random_vector(n, rng);
    const double c1 = chirp_dist(rng);
    const double c2 = chirp_dist(rng);

    const auto a = daft_matrix(n, c1, c2);
    const auto f = dft_matrix(n);
    out.push_back({"daft fast == matrix", n, (daft(x, c1, c2) - a.data * x).norm(), 1e-9});
    out.push_back({"idaft fast == matrix", n,
                   (idaft(x, c1, c2) - a.data.adjoint() * x).norm(), 1e-9});
    out.push_back({"dft fast == matrix", n, (dft(x) - f.data * x).norm(), 1e-9});
    out.push_back({"daft unitary", n, unitarity_error(a.data), 1e-10});
    out.push_back({"dft unitary", n, unitarity_error(f.data), 1e-10});
    out.push_back({"daft(0,0) == dft", n, (daft(x, 0.0, 0.0) - dft(x)).norm(), 1e-12});
    out.push_back({"daft round trip", n, (daft(idaft(x, c1, c2), c1, c2) - x).norm(), 1e-10});

    if (n % 2 == 0) {
      const auto phi = dfnt_matrix(n);
      out.push_back({"dfnt fast == matrix", n, (dfnt(x) - phi.data * x).norm(), 1e-9});
      out.push_back({"idfnt fast == matrix", n, (idfnt(x) - phi.data.adjoint() * x).norm(), 1e-9});
      out.push_back({"dfnt unitary", n, unitarity_error(phi.data), 1e-10});
      const double c = ocdm_chirp(n);
      const ComplexMatrix scaled = std::polar(1.0, -kPi / 4.0) * daft_matrix(n, c, c).data;
      out.push_back({"dfnt == exp(-i pi/4) daft(-1/2N)", n,
                     (phi.data - scaled).cwiseAbs().maxCoeff(), 1e-10});
    }
  }
  return out;
}

}  // namespace afdm
