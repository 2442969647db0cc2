#include "pcgseg/eval.hpp"

#include <algorithm>
#include <cmath>

namespace pcgseg {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

// Most recent value at or before t.
double sample_zoh(const TimedSeries& s, double t) {
  auto it = std::upper_bound(s.times_s.begin(), s.times_s.end(), t);
  const std::size_t i =
      static_cast<std::size_t>(std::distance(s.times_s.begin(), it));
  return s.values[i > 0 ? i - 1 : 0];
}

}  // namespace

HrErrorReport compare_hr(const TimedSeries& estimate,
                         const TimedSeries& truth) {
  if (estimate.times_s.empty() || truth.times_s.empty()) {
    raise(ErrorCode::NoOverlap, "empty series");
  }
  const double begin = std::max(estimate.times_s.front(), truth.times_s.front());
  const double end = std::min(estimate.times_s.back(), truth.times_s.back());
  if (end - begin < kHrGridStepS) {
    raise(ErrorCode::NoOverlap, "series overlap shorter than 2 s");
  }

  std::vector<double> abs_err, pct_err;
  for (double t = begin; t <= end + 1e-9; t += kHrGridStepS) {
    const double e = sample_zoh(estimate, t);
    const double g = sample_zoh(truth, t);
    abs_err.push_back(std::abs(e - g));
    pct_err.push_back(100.0 * std::abs(e - g) / g);
  }

  HrErrorReport report;
  report.median_abs_bpm = median(abs_err);
  report.mean_abs_bpm = mean(abs_err);
  report.median_pct = median(pct_err);
  report.mean_pct = mean(pct_err);
  return report;
}

SegmentationReport score_s1_localisation(
    const StateSequence& predicted, const std::vector<double>& rpeak_times_s) {
  std::vector<double> onsets;
  for (std::size_t i = 0; i < predicted.labels.size(); ++i) {
    if (predicted.labels[i] == State::S1 &&
        (i == 0 || predicted.labels[i - 1] != State::S1)) {
      onsets.push_back(static_cast<double>(i) / predicted.frame_rate_hz);
    }
  }

  struct Pair {
    double dt;
    std::size_t onset, peak;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < onsets.size(); ++i) {
    for (std::size_t j = 0; j < rpeak_times_s.size(); ++j) {
      const double dt = std::abs(onsets[i] - rpeak_times_s[j]);
      if (dt <= kS1MatchToleranceS) pairs.push_back({dt, i, j});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.dt < b.dt; });

  std::vector<bool> onset_used(onsets.size(), false);
  std::vector<bool> peak_used(rpeak_times_s.size(), false);
  std::size_t matches = 0;
  for (const Pair& p : pairs) {
    if (onset_used[p.onset] || peak_used[p.peak]) continue;
    onset_used[p.onset] = true;
    peak_used[p.peak] = true;
    ++matches;
  }

  SegmentationReport report;
  if (onsets.empty() && rpeak_times_s.empty()) {
    report.precision = report.recall = report.f1 = 1.0;
    return report;
  }
  report.precision =
      onsets.empty() ? 0.0 : static_cast<double>(matches) / onsets.size();
  report.recall = rpeak_times_s.empty()
                      ? 0.0
                      : static_cast<double>(matches) / rpeak_times_s.size();
  const double pr = report.precision + report.recall;
  report.f1 = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  return report;
}

HrvErrorReport compare_hrv(const HrvEstimate& estimated,
                           const HrvEstimate& truth) {
  if (!(truth.value_ms > 0.0)) {
    raise(ErrorCode::ZeroTruth, "percentage error undefined for zero truth");
  }
  HrvErrorReport report;
  report.abs_ms = std::abs(estimated.value_ms - truth.value_ms);
  report.pct = 100.0 * report.abs_ms / truth.value_ms;
  return report;
}

}  // namespace pcgseg
