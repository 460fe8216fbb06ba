#include <cmath>
#include <sstream>

#include "afdm/grid.hpp"
#include "afdm/harness.hpp"
#include "afdm/seeding.hpp"
#include "doctest.h"

using namespace afdm;

namespace {

SimConfig awgn_config(std::size_t n, WaveformSource source) {
  SimConfig cfg;
  cfg.n = n;
  cfg.waveform = source;
  cfg.channel = {{0}, 0.0, GainModel::Unit, DopplerModel::Fixed, {0.0}};
  return cfg;
}

std::string csv_of(const std::vector<BerRecord>& records) {
  std::ostringstream os;
  emit_csv(records, os);
  return os.str();
}

// Gray QPSK over AWGN with Es/N0 = snr: Q(sqrt(Es/N0)).
double qpsk_awgn_ber(double snr_db) {
  const double snr = std::pow(10.0, snr_db / 10.0);
  return 0.5 * std::erfc(std::sqrt(snr / 2.0));
}

}  // namespace

TEST_CASE("snr_to_noise") {
  CHECK(snr_to_noise(0.0) == 1.0);
  CHECK(snr_to_noise(20.0) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(snr_to_noise(3.0) == doctest::Approx(0.501187).epsilon(1e-6));
  CHECK(snr_to_noise(INFINITY) == 0.0);
}

TEST_CASE("mix64 seeding") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(1, 2, 3) == mix64(1, 2, 3));
  CHECK(mix64(1, 2, 3) != mix64(1, 3, 2));
  CHECK(frame_seed(7, 0, 5) == mix64(7, 0, 5));
  CHECK(stream_seed(9, Stream::Bits) != stream_seed(9, Stream::Noise));
}

TEST_CASE("grid parsing") {
  CHECK(evaluate_expression("1/(4N)", 64) == 1.0 / 256.0);
  CHECK(evaluate_expression("(2*2+1)/(2N)", 256) == 5.0 / 512.0);
  CHECK(evaluate_expression(" -0.5 + 2 ", 1) == 1.5);
  CHECK(std::isinf(evaluate_expression("inf", 1)));
  CHECK_THROWS_AS(evaluate_expression("1/(4N", 64), InvalidArgument);
  CHECK_THROWS_AS(evaluate_expression("abc", 64), InvalidArgument);

  const auto c1_grid = parse_grid("0:1/(4N):1", 256);
  CHECK(c1_grid.size() == 4 * 256 + 1);
  CHECK(c1_grid.back() == doctest::Approx(1.0));
  CHECK(c1_grid[20] == 20.0 / 1024.0);
  CHECK(parse_grid("0:0.2:1", 256).size() == 6);
  CHECK(parse_grid("0:2:30", 256).size() == 16);
  CHECK(parse_grid("5,10,20", 1) == std::vector<double>{5, 10, 20});
  CHECK(parse_grid("20", 1) == std::vector<double>{20});
  CHECK_THROWS_AS(parse_grid("1:0.1:0", 1), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("0:0:1", 1), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("0:1", 1), InvalidArgument);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.n = 64;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.resolve_waveform().c1() == 5.0 / 128.0);
  CHECK(cfg.resolved_cpp_length() == 2);

  SimConfig bad = cfg;
  bad.cpp_length = 1;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = cfg;
  bad.min_bits = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.snr_db_list = {NAN};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK_THROWS_AS(sweep_parameter(cfg, SweepTarget::C1, {}, 20.0), InvalidArgument);
}

TEST_CASE("noise-free identity channel is error free for every waveform") {
  for (double k : {0.0, 1.0, 5.0}) {
    SimConfig cfg = awgn_config(64, WaveformSource::slope(k));
    cfg.snr_db_list = {INFINITY};
    cfg.min_bits = 5000;
    for (auto m : {Modulation::Bpsk, Modulation::Qam16}) {
      cfg.modulation = m;
      for (auto d : {DetectorKind::Lmmse, DetectorKind::Mp}) {
        cfg.detector.kind = d;
        const auto recs = run_ber(cfg);
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].errors == 0);
        CHECK(recs[0].bits >= 5000);
      }
    }
  }
}

TEST_CASE("records, accounting and determinism") {
  SimConfig cfg;
  cfg.n = 32;
  cfg.channel = {{0, 1, 2}, 2.0, GainModel::Rayleigh, DopplerModel::Jakes, {}};
  cfg.snr_db_list = {5.0, 10.0};
  cfg.min_bits = 3000;
  cfg.master_seed = 42;

  const auto a = run_ber(cfg);
  const auto b = run_ber(cfg);
  CHECK(csv_of(a) == csv_of(b));

  cfg.threads = 3;
  CHECK(csv_of(run_ber(cfg)) == csv_of(a));

  for (const auto& r : a) {
    CHECK(r.bits == r.frames * 32 * 2);
    CHECK(r.bits >= 3000);
    CHECK(r.bits - 64 < 3000);
    CHECK(r.errors <= r.bits);
    CHECK(r.ber == double(r.errors) / double(r.bits));
    CHECK(r.waveform == "AFDM");
    CHECK(r.k == 5.0);
    CHECK(r.seed == 42);
  }

  cfg.threads = 1;
  cfg.master_seed = 43;
  CHECK(csv_of(run_ber(cfg)) != csv_of(a));
}

TEST_CASE("max_frames caps the run") {
  SimConfig cfg;
  cfg.n = 16;
  cfg.min_bits = 1'000'000;
  cfg.max_frames = 7;
  const auto r = run_ber(cfg)[0];
  CHECK(r.frames == 7);
  CHECK(r.bits == 7 * 16 * 2);
}

TEST_CASE("solver failures are excluded and counted") {
  // Two unit-gain paths at Dopplers 0 and N/2 cancel on every odd sample, so
  // the noiseless LMMSE system is singular.
  SimConfig cfg = awgn_config(16, WaveformSource::slope(0.0));
  cfg.channel = {{0, 0}, 8.0, GainModel::Unit, DopplerModel::Fixed, {0.0, 8.0}};
  cfg.snr_db_list = {INFINITY};
  cfg.max_frames = 5;
  const auto r = run_ber(cfg)[0];
  CHECK(r.failed_frames == 5);
  CHECK(r.frames == 5);
  CHECK(r.bits == 0);
  CHECK(r.ber == 0.0);
}

TEST_CASE("OFDM over AWGN matches the closed form") {
  SimConfig cfg = awgn_config(256, WaveformSource::slope(0.0));
  cfg.snr_db_list = {4.0, 8.0};
  cfg.min_bits = 200'000;
  for (const auto& r : run_ber(cfg)) {
    const double expected = qpsk_awgn_ber(r.snr_db);
    const double se = std::sqrt(expected * (1.0 - expected) / double(r.bits));
    CAPTURE(r.snr_db);
    CAPTURE(r.ber);
    CHECK(std::abs(r.ber - expected) <= 3.0 * se);
  }
}

TEST_CASE("BER decreases from 0 dB to 30 dB for each waveform") {
  for (double k : {0.0, 1.0, 5.0}) {
    SimConfig cfg;
    cfg.n = 64;
    cfg.waveform = WaveformSource::slope(k);
    cfg.snr_db_list = {0.0, 30.0};
    cfg.min_bits = 200'000;
    const auto recs = run_ber(cfg);
    CHECK(recs[1].ber <= recs[0].ber);
  }
}

TEST_CASE("sweep shares frames across grid points") {
  SimConfig cfg;
  cfg.n = 32;
  cfg.min_bits = 2000;
  const auto grid = parse_grid("0:0.2:1", cfg.n);
  const auto recs = sweep_parameter(cfg, SweepTarget::C2, grid, 20.0);
  REQUIRE(recs.size() == 6);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].c2 == grid[i]);
    CHECK(recs[i].c1 == 5.0 / 64.0);
    CHECK(recs[i].snr_db == 20.0);
  }
  // The same grid value reproduces the run_ber point at SNR index 0.
  cfg.waveform = WaveformSource::explicit_params(5.0 / 64.0, 0.4);
  cfg.snr_db_list = {20.0};
  CHECK(csv_of({run_ber(cfg)[0]}) == csv_of({recs[2]}));
}

TEST_CASE("the alpha_max rule c1 beats the OFDM point on the 3-path channel at 20 dB") {
  SimConfig cfg;
  cfg.n = 256;
  cfg.min_bits = 200'000;
  const auto recs = sweep_parameter(cfg, SweepTarget::C1, {0.0, 5.0 / 512.0}, 20.0);
  MESSAGE("c1 = 0: " << recs[0].ber << ", c1 = 5/512: " << recs[1].ber);
  CHECK(recs[1].ber <= recs[0].ber);
}

TEST_CASE("csv") {
  CHECK(csv_of({}) == std::string(kCsvHeader) + "\n");

  BerRecord r;
  r.waveform = "AFDM";
  r.n = 256;
  r.c1 = 5.0 / 512.0;
  r.c2 = 1.0 / 3.0;
  r.k = 5.0;
  r.modulation = "16qam";
  r.detector = "mp";
  r.paths = 8;
  r.l_max = 6;
  r.alpha_max = 2.0;
  r.snr_db = 17.5;
  r.bits = 123456;
  r.errors = 78;
  r.ber = 78.0 / 123456.0;
  r.seed = 18446744073709551615ULL;
  const std::string text = csv_of({r});
  CHECK(text.find("0.333333333333,") != std::string::npos);  // 12 significant digits
  CHECK(text.find('\r') == std::string::npos);

  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.size() == 1);
  const auto& q = back[0];
  CHECK(q.waveform == r.waveform);
  CHECK(q.n == r.n);
  CHECK(q.c1 == r.c1);
  CHECK(q.c2 == doctest::Approx(r.c2).epsilon(1e-12));
  CHECK(q.k == 2.0 * double(q.n) * q.c1);
  CHECK(q.modulation == r.modulation);
  CHECK(q.detector == r.detector);
  CHECK(q.paths == r.paths);
  CHECK(q.l_max == r.l_max);
  CHECK(q.alpha_max == r.alpha_max);
  CHECK(q.snr_db == r.snr_db);
  CHECK(q.bits == r.bits);
  CHECK(q.errors == r.errors);
  CHECK(q.ber == doctest::Approx(r.ber).epsilon(1e-12));
  CHECK(q.seed == r.seed);
  // what a record reads back as prints identically
  CHECK(csv_of(back) == text);

  CHECK_THROWS_AS(emit_csv({r}, "/nonexistent-dir/x.csv"), IoError);
}
