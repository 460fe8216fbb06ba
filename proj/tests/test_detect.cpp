#include <bitset>
#include <cmath>
#include <limits>
#include <random>

#include "afdm/detect.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace afdm;

namespace {

double min_distance(const Constellation& c) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.order(); ++i)
    for (std::size_t j = i + 1; j < c.order(); ++j) best = std::min(best, std::abs(c.point(i) - c.point(j)));
  return best;
}

// Exhaustive maximum-likelihood search over all constellation vectors.
ComplexVector ml_detect(const ComplexVector& y, const ComplexMatrix& h, const Constellation& c) {
  const auto n = static_cast<std::size_t>(h.cols());
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= c.order();
  ComplexVector best(n), cand(n);
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      cand[Eigen::Index(i)] = c.point(rest % c.order());
      rest /= c.order();
    }
    const double d = (y - h * cand).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = cand;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("constellations are unit energy and Gray labeled") {
  for (auto m : {Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam4, Modulation::Qam16}) {
    const Constellation c(m);
    CAPTURE(to_string(m));
    double energy = 0.0;
    for (const auto& p : c.points()) energy += std::norm(p);
    CHECK(std::abs(energy / double(c.order()) - 1.0) <= 1e-12);
    CHECK(c.order() == (std::size_t{1} << c.bits_per_symbol()));

    const double dmin = min_distance(c);
    for (std::size_t i = 0; i < c.order(); ++i)
      for (std::size_t j = i + 1; j < c.order(); ++j)
        if (std::abs(std::abs(c.point(i) - c.point(j)) - dmin) < 1e-12)
          CHECK(std::bitset<8>(i ^ j).count() == 1);
  }
  CHECK(Constellation(Modulation::Bpsk).point(0) == Complex(1.0, 0.0));
  CHECK(Constellation(Modulation::Bpsk).point(1) == Complex(-1.0, 0.0));
  CHECK(std::abs(Constellation(Modulation::Qam4).point(0) - Complex(1.0, 1.0) / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(parse_modulation("8psk"), InvalidArgument);
}

TEST_CASE("qam_map / qam_demap") {
  const Constellation bpsk(Modulation::Bpsk);
  CHECK(qam_map({0, 1}, bpsk) == (ComplexVector(2) << 1.0, -1.0).finished());

  for (auto m : {Modulation::Bpsk, Modulation::Qam4, Modulation::Qam16}) {
    const Constellation c(m);
    const unsigned bps = c.bits_per_symbol();
    // every label, in order
    Bits all;
    for (std::size_t label = 0; label < c.order(); ++label)
      for (unsigned b = bps; b-- > 0;) all.push_back((label >> b) & 1u);
    const ComplexVector syms = qam_map(all, c);
    CHECK(qam_demap(syms, c) == all);
    for (std::size_t label = 0; label < c.order(); ++label) CHECK(syms[Eigen::Index(label)] == c.point(label));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const double r = 0.499 * min_distance(c);
    for (std::size_t label = 0; label < c.order(); ++label)
      for (int t = 0; t < 20; ++t)
        CHECK(c.nearest(c.point(label) + std::polar(r, u(rng))) == label);
  }
  CHECK_THROWS_AS(qam_map({0, 1, 1}, Constellation(Modulation::Qam4)), InvalidSize);
}

TEST_CASE("demap ties go to the lower index") {
  const Constellation q16(Modulation::Qam16);
  // (3a, a) is label 0001 and (3a, -a) is label 0011; (3a, 0) is equidistant.
  const double a = 1.0 / std::sqrt(10.0);
  REQUIRE(q16.point(1) == Complex(3.0 * a, 1.0 * a));
  REQUIRE(q16.point(3) == Complex(3.0 * a, -1.0 * a));
  const Complex mid{3.0 * a, 0.0};
  REQUIRE(std::norm(mid - q16.point(1)) == std::norm(mid - q16.point(3)));
  CHECK(q16.nearest(mid) == 1);

  const Constellation q4(Modulation::Qam4);
  CHECK(q4.nearest({q4.point(0).real(), 0.0}) == 0);
  CHECK(q4.nearest({0.0, 0.0}) == 0);
}

TEST_CASE("lmmse") {
  std::mt19937_64 rng(10);
  const ComplexVector y = test::random_vector(8, rng);
  const ComplexMatrix eye = ComplexMatrix::Identity(8, 8);
  CHECK((lmmse(y, eye, 0.25) - y / 1.25).norm() <= 1e-12);
  CHECK((lmmse(y, eye, 0.0) - y).norm() <= 1e-12);

  // unitary H, zero forcing limit
  Eigen::HouseholderQR<ComplexMatrix> qr(test::random_matrix(8, 8, rng));
  const ComplexMatrix u = qr.householderQ();
  CHECK((lmmse(y, u, 0.0) - u.adjoint() * y).norm() <= 1e-10);

  const ComplexMatrix h4 = test::random_matrix(4, 4, rng);
  const ComplexVector x4 = test::random_vector(4, rng);
  CHECK((lmmse(h4 * x4, h4, 0.0) - x4).norm() <= 1e-8);

  SUBCASE("approaches zero forcing monotonically") {
    const ComplexVector yy = test::random_vector(4, rng);
    const ComplexVector zf = lmmse(yy, h4, 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double n0 : {1e-2, 1e-4, 1e-6}) {
      const double d = (lmmse(yy, h4, n0) - zf).norm();
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 1e-4);
  }
  SUBCASE("scale consistency") {
    const ComplexVector yy = test::random_vector(4, rng);
    const Complex s{0.7, -2.1};
    CHECK((lmmse(s * yy, s * h4, 0.3 * std::norm(s)) - lmmse(yy, h4, 0.3)).norm() <= 1e-10);
  }
  SUBCASE("rank deficient at N0 = 0 fails loudly") {
    ComplexMatrix rd = h4;
    rd.row(3) = rd.row(0);
    CHECK_THROWS_AS(lmmse(test::random_vector(4, rng), rd, 0.0), SolverFailure);
    CHECK_NOTHROW(lmmse(test::random_vector(4, rng), rd, 0.1));
  }
  SUBCASE("diagonal channel agrees with the dense formula") {
    const ComplexVector g = test::random_vector(8, rng);
    ComplexMatrix hd = g.asDiagonal();
    hd(3, 5) = 1e-18;  // round-off level leakage
    const double n0 = 0.2;
    const ComplexMatrix dense = hd.adjoint() * (hd * hd.adjoint() + n0 * eye).inverse();
    CHECK((lmmse(y, hd, n0) - dense * y).norm() <= 1e-12);
    ComplexMatrix faded = g.asDiagonal();
    faded(2, 2) = 0.0;
    CHECK_THROWS_AS(lmmse(y, faded, 0.0), SolverFailure);
  }
  CHECK_THROWS_AS(lmmse(y, h4, 0.1), InvalidSize);
}

TEST_CASE("mp_detect") {
  std::mt19937_64 rng(12);
  const Constellation c(Modulation::Qam16);
  DetectorConfig cfg;
  cfg.kind = DetectorKind::Mp;

  SUBCASE("identity channel equals minimum distance demapping") {
    cfg.n0 = 0.2;
    for (int t = 0; t < 20; ++t) {
      const ComplexVector y = 0.8 * test::random_vector(32, rng);
      const MpResult r = mp_detect(y, ComplexMatrix::Identity(32, 32), cfg, c);
      CHECK(qam_demap(r.symbols, c) == qam_demap(y, c));
      CHECK(r.converged);
    }
  }
  SUBCASE("noiseless diagonal channel") {
    cfg.n0 = 0.0;
    std::uniform_int_distribution<std::size_t> pick(0, c.order() - 1);
    ComplexVector x(16), d(16);
    for (int i = 0; i < 16; ++i) {
      x[i] = c.point(pick(rng));
      d[i] = std::polar(0.5 + 0.1 * i, 0.3 * i);
    }
    const MpResult r = mp_detect(d.asDiagonal() * x, ComplexMatrix(d.asDiagonal()), cfg, c);
    CHECK(r.symbols == x);
  }
  SUBCASE("close to exhaustive ML on a small sparse channel") {
    // Rayleigh diagonal plus one half-strength neighbour per row, 17 dB.
    const Constellation q4(Modulation::Qam4);
    cfg.n0 = 0.02;
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::uniform_int_distribution<std::size_t> pick(0, 3);
    const int trials = 10000;
    int mp_errors = 0, ml_errors = 0;
    for (int t = 0; t < trials; ++t) {
      ComplexMatrix h = ComplexMatrix::Zero(4, 4);
      for (int r = 0; r < 4; ++r) {
        h(r, r) = {g(rng), g(rng)};
        h(r, (r + 1) % 4) = Complex(g(rng), g(rng)) * 0.5;
      }
      ComplexVector x(4), w(4);
      for (int i = 0; i < 4; ++i) {
        x[i] = q4.point(pick(rng));
        w[i] = Complex(g(rng), g(rng)) * std::sqrt(cfg.n0);
      }
      const ComplexVector y = h * x + w;
      const ComplexVector mp = mp_detect(y, h, cfg, q4).symbols;
      const ComplexVector ml = ml_detect(y, h, q4);
      for (int i = 0; i < 4; ++i) {
        mp_errors += mp[i] != x[i];
        ml_errors += ml[i] != x[i];
      }
    }
    const double mp_ser = mp_errors / (4.0 * trials);
    const double ml_ser = ml_errors / (4.0 * trials);
    MESSAGE("MP SER " << mp_ser << ", ML SER " << ml_ser);
    CHECK(mp_ser <= ml_ser + 0.02);
  }
  SUBCASE("config validation") {
    DetectorConfig bad = cfg;
    bad.mp_damping = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.mp_iters = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.mp_prune = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  }
}
