#pragma once

#include "pcgseg/types.hpp"

namespace pcgseg {

inline constexpr double kLogFloor = 1e-10;

// Number of complete analysis frames for a signal of num_samples samples.
std::size_t feature_frame_count(std::size_t num_samples);

// Log-magnitude STFT features: 16-sample symmetric-Hann windows, hop 5,
// bins 0..8 of the unnormalized real DFT, magnitudes floored at 1e-10
// before the log. Incomplete trailing frames are dropped.
FeatureMatrix extract_features(const AudioSegment& audio);

}  // namespace pcgseg
