#include "qkr/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qkr {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path.string());
  out << "n,n_star,m1,m2,sigma,norm_error\n";
  for (const auto& r : series.records) {
    out << r.n << ',' << format_double(r.n_star) << ',' << format_double(r.m1) << ','
        << format_double(r.m2) << ',' << format_double(r.sigma) << ','
        << format_double(r.norm_error) << '\n';
  }
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot read " + path.string());
  TimeSeries series;
  std::string line;
  if (!std::getline(in, line)) throw validation_error("empty series file " + path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    MomentRecord r;
    if (!(ss >> r.n >> r.n_star >> r.m1 >> r.m2 >> r.sigma >> r.norm_error)) {
      throw validation_error("malformed series row in " + path.string() + ": " + line);
    }
    series.records.push_back(r);
  }
  return series;
}

void write_state_csv(const std::filesystem::path& path, const WaveState& state) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path.string());
  out << "l,re,im,prob\n";
  for (std::int64_t i = 0; i < state.size(); ++i) {
    const Complex a = state.amplitudes(i);
    out << state.l_min + i << ',' << format_double(a.real()) << ',' << format_double(a.imag())
        << ',' << format_double(std::norm(a)) << '\n';
  }
}

void write_profile_csv(const std::filesystem::path& path, const WaveState& state) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path.string());
  out << "l,prob\n";
  for (std::int64_t i = 0; i < state.size(); ++i) {
    out << state.l_min + i << ',' << format_double(std::norm(state.amplitudes(i))) << '\n';
  }
}

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> read_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line, section = "run";
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw validation_error(path.string() + ":" + std::to_string(lineno) + ": bad section");
      }
      section = strip(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw validation_error(path.string() + ":" + std::to_string(lineno) +
                             ": expected key = value");
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) {
      throw validation_error(path.string() + ":" + std::to_string(lineno) + ": empty key");
    }
    kv[section + "." + key] = value;
  }
  return kv;
}

}  // namespace qkr
