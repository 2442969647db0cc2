#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcgseg {

enum class ErrorCode {
  TooShort,
  UnsupportedRate,
  NonFiniteInput,
  SingleClass,
  TooFewFrames,
  FormatError,
  EmptyInput,
  OutOfRange,
  UnsortedPeaks,
  NoBeats,
  AllRejected,
  BadAlpha,
  NoOverlap,
  ZeroTruth,
  BadConfig,
  NotFound,
  BadFormat,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::UnsupportedRate: return "UnsupportedRate";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnsortedPeaks: return "UnsortedPeaks";
    case ErrorCode::NoBeats: return "NoBeats";
    case ErrorCode::AllRejected: return "AllRejected";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::ZeroTruth: return "ZeroTruth";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
  throw Error(code, std::string(error_code_name(code)) + ": " + msg);
}

// Mono PCM audio, amplitude-normalized to [-1, 1].
struct AudioSegment {
  std::vector<double> samples;
  int sample_rate_hz = 500;
};

inline constexpr int kCanonicalSampleRate = 500;
inline constexpr int kFrameRateHz = 100;
inline constexpr int kWindowLen = 16;
inline constexpr int kHopLen = 5;
inline constexpr int kNumFeatures = 9;  // bins 0..8 of a 16-point real DFT

// Per-frame vectors of 9 log-magnitude STFT coefficients.
struct FeatureMatrix {
  std::vector<std::array<double, kNumFeatures>> frames;
  int frame_rate_hz = kFrameRateHz;

  std::size_t num_frames() const { return frames.size(); }
};

// Per-frame probability that a heart sound (S1 or S2) is present.
struct EmissionSeries {
  std::vector<double> probs;  // each in [1e-3, 1 - 1e-3]
  int frame_rate_hz = kFrameRateHz;
};

inline constexpr double kEmissionClamp = 1e-3;

enum class State : std::uint8_t { S1 = 0, Systole = 1, S2 = 2, Diastole = 3 };

inline constexpr int kNumStates = 4;

inline State next_state(State s) {
  return static_cast<State>((static_cast<int>(s) + 1) % kNumStates);
}
inline State prev_state(State s) {
  return static_cast<State>((static_cast<int>(s) + 3) % kNumStates);
}

inline const char* state_name(State s) {
  switch (s) {
    case State::S1: return "S1";
    case State::Systole: return "Systole";
    case State::S2: return "S2";
    case State::Diastole: return "Diastole";
  }
  return "?";
}

// Per-frame labels forming a valid cyclic path through the cardiac cycle.
struct StateSequence {
  std::vector<State> labels;
  int frame_rate_hz = kFrameRateHz;
};

// Binary frame labels: true = heart sound present.
struct FrameLabels {
  std::vector<bool> sound;
};

// S1 onsets (frame indices) and the inter-beat intervals they imply.
struct BeatSeries {
  std::vector<std::size_t> s1_onsets;   // strictly increasing
  std::vector<double> deltas;           // successive differences, frames
  int frame_rate_hz = kFrameRateHz;
};

struct HrEstimate {
  std::vector<double> raw_bpm;
  std::vector<double> filtered_bpm;
};

struct HrvEstimate {
  double value_ms = 0.0;  // population std of retained inter-beat intervals
  std::size_t retained_count = 0;
  std::size_t rejected_count = 0;
};

struct KalmanConfig {
  double process_variance = 0.1;      // BPM^2 per beat
  double measurement_variance = 4.0;  // BPM^2
  double initial_variance = 100.0;    // BPM^2
};

}  // namespace pcgseg
