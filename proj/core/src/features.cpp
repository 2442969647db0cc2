#include "pcgseg/features.hpp"

#include <cmath>

namespace pcgseg {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct DftTables {
  std::array<double, kWindowLen> window;
  // cos/sin of -2*pi*b*n/16 for bins 0..8, sample n in 0..15
  std::array<std::array<double, kWindowLen>, kNumFeatures> cos_t;
  std::array<std::array<double, kWindowLen>, kNumFeatures> sin_t;

  DftTables() {
    for (int n = 0; n < kWindowLen; ++n) {
      window[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * n / (kWindowLen - 1)));
    }
    for (int b = 0; b < kNumFeatures; ++b) {
      for (int n = 0; n < kWindowLen; ++n) {
        const double phase = -2.0 * kPi * b * n / kWindowLen;
        cos_t[b][n] = std::cos(phase);
        sin_t[b][n] = std::sin(phase);
      }
    }
  }
};

const DftTables& tables() {
  static const DftTables t;
  return t;
}

}  // namespace

std::size_t feature_frame_count(std::size_t num_samples) {
  if (num_samples < kWindowLen) return 0;
  return (num_samples - kWindowLen) / kHopLen + 1;
}

FeatureMatrix extract_features(const AudioSegment& audio) {
  if (audio.sample_rate_hz != kCanonicalSampleRate) {
    raise(ErrorCode::UnsupportedRate,
          "sample rate must be 500 Hz, got " +
              std::to_string(audio.sample_rate_hz));
  }
  if (audio.samples.size() < kWindowLen) {
    raise(ErrorCode::TooShort,
          "need at least 16 samples, got " +
              std::to_string(audio.samples.size()));
  }
  for (double s : audio.samples) {
    if (!std::isfinite(s)) {
      raise(ErrorCode::NonFiniteInput, "audio contains a non-finite sample");
    }
  }

  const DftTables& t = tables();
  const std::size_t n_frames = feature_frame_count(audio.samples.size());

  FeatureMatrix out;
  out.frame_rate_hz = audio.sample_rate_hz / kHopLen;
  out.frames.resize(n_frames);

  std::array<double, kWindowLen> windowed;
  for (std::size_t k = 0; k < n_frames; ++k) {
    const double* x = audio.samples.data() + k * kHopLen;
    for (int n = 0; n < kWindowLen; ++n) windowed[n] = x[n] * t.window[n];
    for (int b = 0; b < kNumFeatures; ++b) {
      double re = 0.0, im = 0.0;
      for (int n = 0; n < kWindowLen; ++n) {
        re += windowed[n] * t.cos_t[b][n];
        im += windowed[n] * t.sin_t[b][n];
      }
      const double mag = std::sqrt(re * re + im * im);
      out.frames[k][b] = std::log(std::max(mag, kLogFloor));
    }
  }
  return out;
}

}  // namespace pcgseg
