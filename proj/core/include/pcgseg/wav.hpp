#pragma once

#include <string>

#include "pcgseg/types.hpp"

namespace pcgseg {

// PCM 16-bit mono 500 Hz only; samples are scaled by 1/32768 into [-1, 1).
AudioSegment read_wav(const std::string& path);

// Samples are clipped to [-1, 1 - 1/32768] and scaled by 32768.
void write_wav(const std::string& path, const AudioSegment& audio);

}  // namespace pcgseg
