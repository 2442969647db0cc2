#pragma once

#include "pcgseg/types.hpp"

namespace pcgseg {

struct TimedSeries {
  std::vector<double> times_s;   // non-decreasing
  std::vector<double> values;
};

struct HrErrorReport {
  double median_abs_bpm = 0.0;
  double mean_abs_bpm = 0.0;
  double median_pct = 0.0;
  double mean_pct = 0.0;
};

struct SegmentationReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct HrvErrorReport {
  double abs_ms = 0.0;
  double pct = 0.0;
};

// Both series are sampled every 2 s over their overlap by zero-order hold;
// absolute and percentage errors are aggregated per sample.
HrErrorReport compare_hr(const TimedSeries& estimate,
                         const TimedSeries& truth);

// Greedy one-to-one matching of predicted S1 onsets to R-peaks, nearest
// |dt| first, within a 100 ms tolerance. Zero peaks and zero onsets score
// 1.0 by convention.
SegmentationReport score_s1_localisation(const StateSequence& predicted,
                                         const std::vector<double>& rpeak_times_s);

HrvErrorReport compare_hrv(const HrvEstimate& estimated,
                           const HrvEstimate& truth);

inline constexpr double kS1MatchToleranceS = 0.1;
inline constexpr double kHrGridStepS = 2.0;

}  // namespace pcgseg
