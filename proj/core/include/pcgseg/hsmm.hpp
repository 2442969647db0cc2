#pragma once

#include "pcgseg/types.hpp"

namespace pcgseg {

struct StateDuration {
  double mean_s = 0.0;
  double std_s = 0.0;
  int min_frames = 1;
  int max_frames = 1;
};

// Per-state residence-time statistics. Bounds default to mean +/- 3 sigma
// on the frame grid, floored at 1 frame.
struct DurationModel {
  std::array<StateDuration, kNumStates> states;
  int frame_rate_hz = kFrameRateHz;

  static StateDuration from_moments(double mean_s, double std_s,
                                    int frame_rate_hz = kFrameRateHz);
  // Systole and diastole statistics are dataset-observed; the S1/S2 pairs
  // are configurable defaults consistent with their shorter durations.
  static DurationModel defaults();

  void validate() const;
};

inline constexpr double kDefaultS1MeanS = 0.122;
inline constexpr double kDefaultS1StdS = 0.022;
inline constexpr double kDefaultSystoleMeanS = 0.128;
inline constexpr double kDefaultSystoleStdS = 0.062;
inline constexpr double kDefaultS2MeanS = 0.092;
inline constexpr double kDefaultS2StdS = 0.022;
inline constexpr double kDefaultDiastoleMeanS = 0.356;
inline constexpr double kDefaultDiastoleStdS = 0.121;

// Log-mass of a run of length_frames in the given state: Gaussian density
// at length/frame_rate, discretized per frame, truncated to
// [min_frames, max_frames] and renormalized to sum to 1. Lengths below
// min_frames carry zero mass (-inf); lengths outside [1, max] are errors.
double duration_logmass(const DurationModel& durations, State state,
                        int length_frames);

struct DecodeResult {
  StateSequence sequence;
  double log_score = 0.0;
};

// Duration-explicit Viterbi over the fixed cycle S1 -> Systole -> S2 ->
// Diastole -> S1 with tied emissions: e = p for S1/S2 frames, 1 - p for
// Systole/Diastole. Interior runs obey the duration bounds; the first and
// last runs may be truncated, their duration term being the survivor mass
// of all durations >= the observed length. Initial state prior is uniform.
// Ties are broken by earliest first-run state in cycle order, then by the
// lexicographically smallest run-length sequence.
DecodeResult hsmm_decode(const EmissionSeries& emissions,
                         const DurationModel& durations);

// Objective value of an arbitrary valid labeling under the same scoring;
// used to cross-check the decoder.
double score_labeling(const std::vector<State>& labels,
                      const EmissionSeries& emissions,
                      const DurationModel& durations);

}  // namespace pcgseg
