#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "afdm/harness.hpp"

namespace afdm {

namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void emit_csv(const std::vector<BerRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.waveform << ',' << r.n << ',' << number(r.c1) << ',' << number(r.c2) << ','
        << number(2.0 * static_cast<double>(r.n) * r.c1) << ',' << r.modulation << ','
        << r.detector << ',' << r.paths << ',' << r.l_max << ',' << number(r.alpha_max) << ','
        << number(r.snr_db) << ',' << r.bits << ',' << r.errors << ',' << number(r.ber) << ','
        << r.seed << '\n';
  }
}

void emit_csv(const std::vector<BerRecord>& records, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  emit_csv(records, file);
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

std::vector<BerRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("missing or unexpected CSV header");
  std::vector<BerRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_row(line);
    if (f.size() != 15) throw IoError("CSV row has " + std::to_string(f.size()) + " fields");
    BerRecord r;
    r.waveform = f[0];
    r.n = std::stoull(f[1]);
    r.c1 = std::strtod(f[2].c_str(), nullptr);
    r.c2 = std::strtod(f[3].c_str(), nullptr);
    r.k = std::strtod(f[4].c_str(), nullptr);
    r.modulation = f[5];
    r.detector = f[6];
    r.paths = std::stoull(f[7]);
    r.l_max = static_cast<unsigned>(std::stoul(f[8]));
    r.alpha_max = std::strtod(f[9].c_str(), nullptr);
    r.snr_db = std::strtod(f[10].c_str(), nullptr);
    r.bits = std::stoull(f[11]);
    r.errors = std::stoull(f[12]);
    r.ber = std::strtod(f[13].c_str(), nullptr);
    r.seed = std::stoull(f[14]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace afdm
