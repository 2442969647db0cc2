#include "pcgseg/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pcgseg {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::NotFound, "cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::NotFound, path);
  return in;
}

void expect_header(std::istream& in, const std::string& header,
                   const std::string& path) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    raise(ErrorCode::FormatError,
          path + ": expected header '" + header + "'");
  }
}

// Shortest round-trip decimal representation.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

std::vector<std::string> split(const std::string& line, std::size_t expect,
                               const std::string& path) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (out.size() != expect) {
    raise(ErrorCode::FormatError, path + ": malformed row '" + line + "'");
  }
  return out;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    raise(ErrorCode::FormatError, path + ": bad number '" + s + "'");
  }
}

State parse_state(const std::string& s, const std::string& path) {
  for (int i = 0; i < kNumStates; ++i) {
    if (s == state_name(static_cast<State>(i))) return static_cast<State>(i);
  }
  raise(ErrorCode::FormatError, path + ": unknown state '" + s + "'");
}

}  // namespace

void write_labels_csv(const std::string& path, const StateSequence& labels) {
  std::ofstream out = open_out(path);
  out << "frame,state\n";
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    out << i << ',' << state_name(labels.labels[i]) << '\n';
  }
}

StateSequence read_labels_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, "frame,state", path);
  StateSequence seq;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, 2, path);
    seq.labels.push_back(parse_state(fields[1], path));
  }
  return seq;
}

void write_rpeaks_csv(const std::string& path,
                      const std::vector<double>& rpeak_times_s) {
  std::ofstream out = open_out(path);
  out << "rpeak_time_s\n";
  for (double t : rpeak_times_s) out << fmt(t) << '\n';
}

std::vector<double> read_rpeaks_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, "rpeak_time_s", path);
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_double(line, path));
  }
  return out;
}

void write_beats_csv(const std::string& path, const BeatSeries& beats) {
  std::ofstream out = open_out(path);
  out << "onset_frame,delta_frames\n";
  for (std::size_t i = 0; i < beats.s1_onsets.size(); ++i) {
    const double delta = i < beats.deltas.size() ? beats.deltas[i] : 0.0;
    out << beats.s1_onsets[i] << ',' << fmt(delta) << '\n';
  }
}

BeatSeries read_beats_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, "onset_frame,delta_frames", path);
  BeatSeries beats;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, 2, path);
    beats.s1_onsets.push_back(
        static_cast<std::size_t>(parse_double(fields[0], path)));
  }
  for (std::size_t i = 0; i + 1 < beats.s1_onsets.size(); ++i) {
    beats.deltas.push_back(
        static_cast<double>(beats.s1_onsets[i + 1] - beats.s1_onsets[i]));
  }
  return beats;
}

void write_hr_csv(const std::string& path, const std::vector<double>& times_s,
                  const HrEstimate& est) {
  if (times_s.size() != est.raw_bpm.size() ||
      times_s.size() != est.filtered_bpm.size()) {
    raise(ErrorCode::BadConfig, "hr series length mismatch");
  }
  std::ofstream out = open_out(path);
  out << "time_s,bpm_raw,bpm_filtered\n";
  for (std::size_t i = 0; i < times_s.size(); ++i) {
    out << fmt(times_s[i]) << ',' << fmt(est.raw_bpm[i]) << ','
        << fmt(est.filtered_bpm[i]) << '\n';
  }
}

void read_hr_csv(const std::string& path, std::vector<double>& times_s,
                 HrEstimate& est) {
  std::ifstream in = open_in(path);
  expect_header(in, "time_s,bpm_raw,bpm_filtered", path);
  times_s.clear();
  est = HrEstimate{};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, 3, path);
    times_s.push_back(parse_double(fields[0], path));
    est.raw_bpm.push_back(parse_double(fields[1], path));
    est.filtered_bpm.push_back(parse_double(fields[2], path));
  }
}

void write_report_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& rows) {
  std::ofstream out = open_out(path);
  out << "metric,value\n";
  for (const auto& [metric, value] : rows) {
    out << metric << ',' << fmt(value) << '\n';
  }
}

std::vector<std::pair<std::string, double>> read_report_csv(
    const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, "metric,value", path);
  std::vector<std::pair<std::string, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, 2, path);
    rows.emplace_back(fields[0], parse_double(fields[1], path));
  }
  return rows;
}

}  // namespace pcgseg
