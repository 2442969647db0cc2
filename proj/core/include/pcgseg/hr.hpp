#pragma once

#include "pcgseg/types.hpp"

namespace pcgseg {

// S1 onsets are frames where the label becomes S1 and the previous frame
// is not S1; a leading S1 run counts.
BeatSeries find_beats(const StateSequence& labels);

// Per-beat BPM (60 / interval) smoothed by a scalar random-walk Kalman
// filter; the first measurement initializes the state.
HrEstimate estimate_heart_rate(const BeatSeries& beats,
                               const KalmanConfig& cfg = {});

// SDNN-style HRV with local-mean outlier rejection: each delta past the
// first is kept iff within 30% of the mean of up to 4 preceding deltas;
// returns the population standard deviation of retained deltas in ms.
HrvEstimate estimate_hrv(const BeatSeries& beats);

// s(0) = x(0); s(t) = alpha * x(t) + (1 - alpha) * s(t-1).
std::vector<double> smooth_ground_truth(const std::vector<double>& raw_hr,
                                        double alpha);

// Continuation form: the recursion is applied from frame 0 against a
// caller-supplied previous state (s(-1) = initial_state). Used when a
// series resumes, or to realize the filter's step response.
std::vector<double> smooth_ground_truth(const std::vector<double>& raw_hr,
                                        double alpha, double initial_state);

}  // namespace pcgseg
