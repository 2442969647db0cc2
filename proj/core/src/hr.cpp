#include "pcgseg/hr.hpp"

#include <cmath>

namespace pcgseg {

BeatSeries find_beats(const StateSequence& labels) {
  BeatSeries beats;
  beats.frame_rate_hz = labels.frame_rate_hz;
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (labels.labels[i] == State::S1 &&
        (i == 0 || labels.labels[i - 1] != State::S1)) {
      beats.s1_onsets.push_back(i);
    }
  }
  for (std::size_t i = 0; i + 1 < beats.s1_onsets.size(); ++i) {
    beats.deltas.push_back(
        static_cast<double>(beats.s1_onsets[i + 1] - beats.s1_onsets[i]));
  }
  return beats;
}

HrEstimate estimate_heart_rate(const BeatSeries& beats,
                               const KalmanConfig& cfg) {
  if (beats.deltas.empty()) {
    raise(ErrorCode::NoBeats, "need at least one inter-beat interval");
  }
  if (!(cfg.process_variance > 0.0) || !(cfg.measurement_variance > 0.0) ||
      !(cfg.initial_variance > 0.0)) {
    raise(ErrorCode::BadConfig, "Kalman variances must be > 0");
  }

  HrEstimate est;
  est.raw_bpm.reserve(beats.deltas.size());
  for (double d : beats.deltas) {
    est.raw_bpm.push_back(60.0 / (d / beats.frame_rate_hz));
  }

  est.filtered_bpm.reserve(est.raw_bpm.size());
  double x = est.raw_bpm[0];
  double p = cfg.initial_variance;
  est.filtered_bpm.push_back(x);
  for (std::size_t i = 1; i < est.raw_bpm.size(); ++i) {
    p += cfg.process_variance;
    const double k = p / (p + cfg.measurement_variance);
    x += k * (est.raw_bpm[i] - x);
    p *= 1.0 - k;
    est.filtered_bpm.push_back(x);
  }
  return est;
}

HrvEstimate estimate_hrv(const BeatSeries& beats) {
  const std::vector<double>& deltas = beats.deltas;
  if (deltas.size() < 2) {
    raise(ErrorCode::NoBeats, "need at least two inter-beat intervals");
  }

  std::vector<double> retained;
  std::size_t rejected = 0;
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    const std::size_t begin = i >= 4 ? i - 4 : 0;
    double mean = 0.0;
    for (std::size_t j = begin; j < i; ++j) mean += deltas[j];
    mean /= static_cast<double>(i - begin);
    if (mean * 0.7 <= deltas[i] && deltas[i] <= mean * 1.3) {
      retained.push_back(deltas[i]);
    } else {
      ++rejected;
    }
  }
  if (retained.empty()) {
    raise(ErrorCode::AllRejected, "every inter-beat interval was rejected");
  }

  double mean = 0.0;
  for (double d : retained) mean += d;
  mean /= static_cast<double>(retained.size());
  double var = 0.0;
  for (double d : retained) var += (d - mean) * (d - mean);
  var /= static_cast<double>(retained.size());

  HrvEstimate est;
  est.value_ms = std::sqrt(var) / beats.frame_rate_hz * 1000.0;
  est.retained_count = retained.size();
  est.rejected_count = rejected;
  return est;
}

std::vector<double> smooth_ground_truth(const std::vector<double>& raw_hr,
                                        double alpha) {
  if (raw_hr.empty()) raise(ErrorCode::EmptyInput, "empty heart-rate series");
  if (!(alpha > 0.0) || alpha > 1.0) {
    raise(ErrorCode::BadAlpha, "alpha must be in (0, 1]");
  }
  std::vector<double> out;
  out.reserve(raw_hr.size());
  double s = raw_hr[0];
  out.push_back(s);
  for (std::size_t t = 1; t < raw_hr.size(); ++t) {
    s = alpha * raw_hr[t] + (1.0 - alpha) * s;
    out.push_back(s);
  }
  return out;
}

std::vector<double> smooth_ground_truth(const std::vector<double>& raw_hr,
                                        double alpha, double initial_state) {
  if (raw_hr.empty()) raise(ErrorCode::EmptyInput, "empty heart-rate series");
  if (!(alpha > 0.0) || alpha > 1.0) {
    raise(ErrorCode::BadAlpha, "alpha must be in (0, 1]");
  }
  std::vector<double> out;
  out.reserve(raw_hr.size());
  double s = initial_state;
  for (double x : raw_hr) {
    s = alpha * x + (1.0 - alpha) * s;
    out.push_back(s);
  }
  return out;
}

}  // namespace pcgseg
