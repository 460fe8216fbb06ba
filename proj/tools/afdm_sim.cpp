// afdm_sim: BER simulation, parameter sweeps and transform self-checks for the
// DAFT waveform family.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "afdm/grid.hpp"
#include "afdm/harness.hpp"
#include "afdm/xform.hpp"
#include "config_file.hpp"

namespace {

using namespace afdm;

struct CommonFlags {
  std::string waveform;
  std::optional<double> k;
  std::optional<double> c1;
  std::optional<double> c2;
  std::size_t n = 256;
  std::string mod = "4qam";
  std::string detector = "lmmse";
  int mp_iters = 30;
  double mp_damping = 0.6;
  double mp_prune = 1e-3;
  std::optional<std::size_t> paths;
  std::string delays;
  double alpha_max = 2.0;
  std::optional<double> speed_kmh;
  double carrier_hz = 4e9;
  double spacing_hz = 1e3;
  std::string doppler = "jakes";
  std::string dopplers;
  std::string gain_model = "rayleigh";
  std::optional<std::size_t> cpp;
  std::uint64_t min_bits = 1'000'000;
  std::uint64_t max_frames = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  auto* wf = sub->add_option("--waveform", f.waveform, "ofdm | ocdm | afdm")
                 ->check(CLI::IsMember({"ofdm", "ocdm", "afdm"}));
  auto* k = sub->add_option("--k", f.k, "chirp slope k = 2 N c1");
  auto* c1 = sub->add_option("--c1", f.c1, "explicit c1");
  wf->excludes(k)->excludes(c1);
  k->excludes(c1);
  sub->add_option("--c2", f.c2, "explicit c2 (overrides the default for afdm / --k)");
  sub->add_option("--n", f.n, "subcarrier count")->check(CLI::PositiveNumber);
  sub->add_option("--mod", f.mod)->check(CLI::IsMember({"bpsk", "qpsk", "4qam", "16qam"}));
  sub->add_option("--detector", f.detector)->check(CLI::IsMember({"lmmse", "mp"}));
  sub->add_option("--mp-iters", f.mp_iters);
  sub->add_option("--mp-damping", f.mp_damping);
  sub->add_option("--mp-prune", f.mp_prune);
  sub->add_option("--paths", f.paths, "path count (delays default to 0..P-1)");
  sub->add_option("--delays", f.delays, "comma separated normalized delays, e.g. 0,1,2");
  sub->add_option("--alpha-max", f.alpha_max, "max normalized Doppler");
  sub->add_option("--speed-kmh", f.speed_kmh, "derive alpha-max from speed, carrier and spacing");
  sub->add_option("--carrier-hz", f.carrier_hz);
  sub->add_option("--spacing-hz", f.spacing_hz);
  sub->add_option("--doppler", f.doppler)->check(CLI::IsMember({"jakes", "integer", "fixed"}));
  sub->add_option("--dopplers", f.dopplers, "per-path Dopplers for --doppler fixed");
  sub->add_option("--gain-model", f.gain_model)->check(CLI::IsMember({"rayleigh", "unit"}));
  sub->add_option("--cpp", f.cpp, "prefix length (default l_max)");
  sub->add_option("--min-bits", f.min_bits);
  sub->add_option("--max-frames", f.max_frames);
  sub->add_option("--seed", f.seed);
  sub->add_option("--threads", f.threads)->check(CLI::PositiveNumber);
  sub->add_option("--out", f.out, "CSV destination (stdout if omitted)");
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream cell(item);
    T v{};
    if (!(cell >> v)) throw CLI::ValidationError("list", "bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

SimConfig build_config(const CommonFlags& f) {
  SimConfig cfg;
  cfg.n = f.n;
  if (f.c1) cfg.waveform = WaveformSource::explicit_params(*f.c1, f.c2.value_or(default_afdm_c2(f.n)));
  else if (f.k) cfg.waveform = WaveformSource::slope(*f.k, f.c2);
  else if (f.waveform == "ofdm") cfg.waveform = WaveformSource::slope(0.0);
  else if (f.waveform == "ocdm") cfg.waveform = WaveformSource::slope(1.0);
  else cfg.waveform = WaveformSource::rule(f.c2);

  cfg.modulation = parse_modulation(f.mod);
  cfg.detector.kind = parse_detector(f.detector);
  cfg.detector.mp_iters = f.mp_iters;
  cfg.detector.mp_damping = f.mp_damping;
  cfg.detector.mp_prune = f.mp_prune;

  ChannelSpec ch = reference_channel();
  if (!f.delays.empty()) {
    ch.delays = parse_list<unsigned>(f.delays);
    if (f.paths && *f.paths != ch.delays.size())
      throw CLI::ValidationError("--paths", "does not match the number of --delays");
  } else if (f.paths) {
    ch.delays.resize(*f.paths);
    for (std::size_t i = 0; i < *f.paths; ++i) ch.delays[i] = static_cast<unsigned>(i);
  }
  ch.alpha_max = f.speed_kmh ? alpha_max_from_speed(*f.speed_kmh, f.carrier_hz, f.spacing_hz)
                             : f.alpha_max;
  if (f.doppler == "jakes") ch.doppler_model = DopplerModel::Jakes;
  else if (f.doppler == "integer") ch.doppler_model = DopplerModel::IntegerUniform;
  else {
    ch.doppler_model = DopplerModel::Fixed;
    ch.fixed_dopplers = parse_list<double>(f.dopplers);
  }
  ch.gain_model = f.gain_model == "unit" ? GainModel::Unit : GainModel::Rayleigh;
  cfg.channel = ch;

  cfg.cpp_length = f.cpp;
  cfg.min_bits = f.min_bits;
  cfg.max_frames = f.max_frames;
  cfg.master_seed = f.seed;
  cfg.threads = f.threads;
  return cfg;
}

void report_diagnostics(const std::vector<BerRecord>& records) {
  for (const auto& r : records) {
    if (r.failed_frames > 0)
      std::cerr << "diagnostic: " << r.failed_frames << " failed frame(s) excluded at snr_db="
                << r.snr_db << " c1=" << r.c1 << " c2=" << r.c2 << '\n';
    if (r.mp_unconverged > 0)
      std::cerr << "diagnostic: " << r.mp_unconverged << " MP frame(s) hit the iteration cap at snr_db="
                << r.snr_db << '\n';
  }
}

void write_records(const std::vector<BerRecord>& records, const std::string& out) {
  if (out.empty()) emit_csv(records, std::cout);
  else emit_csv(records, out);
  report_diagnostics(records);
}

int run_xform_check(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  bool ok = true;
  for (const auto& check : run_oracle_checks(sizes, seed)) {
    ok = ok && check.passed();
    std::cout << (check.passed() ? "PASS " : "FAIL ") << std::left << std::setw(36) << check.name
              << " N=" << std::setw(4) << check.n << " err=" << std::scientific
              << std::setprecision(3) << check.error << " tol=" << check.tolerance << std::defaultfloat
              << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAFT waveform family (OFDM / OCDM / AFDM) link simulator"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommonFlags ber_flags;
  std::string snr_text = "0:5:30";
  auto* ber = app.add_subcommand("ber", "BER versus SNR");
  add_common(ber, ber_flags);
  ber->add_option("--snr", snr_text, "lo:step:hi in dB, a comma list, or one value");
  ber->add_option("--config", "key = value file mirroring the flags");

  CommonFlags sweep_flags;
  std::string target = "c1";
  std::string grid_text;
  std::string grid_list;
  double sweep_snr = 20.0;
  auto* sweep = app.add_subcommand("sweep", "BER versus c1 or c2 at one SNR");
  add_common(sweep, sweep_flags);
  sweep->add_option("--target", target)->check(CLI::IsMember({"c1", "c2"}));
  auto* grid_opt = sweep->add_option("--grid", grid_text, "lo:step:hi, N allowed, e.g. 0:1/(4N):1");
  auto* list_opt = sweep->add_option("--grid-list", grid_list, "v1,v2,...");
  grid_opt->excludes(list_opt);
  sweep->add_option("--snr-db", sweep_snr);
  sweep->add_option("--config", "key = value file mirroring the flags");

  std::vector<std::size_t> sizes{4, 16, 64, 256};
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("xform-check", "fast transforms vs explicit matrices");
  check->add_option("--sizes", sizes)->delimiter(',');
  check->add_option("--seed", check_seed);

  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && (args[0] == "ber" || args[0] == "sweep")) {
    try {
      std::vector<std::string> rest(args.begin() + 1, args.end());
      rest = cli::merge_config(rest, {{"waveform", "k", "c1"}, {"grid", "grid-list"}});
      rest.insert(rest.begin(), args[0]);
      args = std::move(rest);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*check) return run_xform_check(sizes, check_seed);

    if (*ber) {
      SimConfig cfg = build_config(ber_flags);
      cfg.snr_db_list = parse_grid(snr_text, cfg.n);
      write_records(run_ber(cfg), ber_flags.out);
      return 0;
    }

    SimConfig cfg = build_config(sweep_flags);
    if (grid_text.empty() && grid_list.empty())
      throw InvalidArgument("sweep needs --grid or --grid-list");
    const auto grid = parse_grid(grid_text.empty() ? grid_list : grid_text, cfg.n);
    const auto records = sweep_parameter(cfg, target == "c1" ? SweepTarget::C1 : SweepTarget::C2,
                                         grid, sweep_snr);
    write_records(records, sweep_flags.out);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
