#include "pcgseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pcgseg/features.hpp"
#include "pcgseg/hsmm.hpp"

namespace pcgseg {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate(const SynthConfig& cfg) {
  if (!(cfg.duration_s > 0.0)) raise(ErrorCode::BadConfig, "duration_s <= 0");
  if (cfg.mean_bpm < 30.0 || cfg.mean_bpm > 220.0) {
    raise(ErrorCode::BadConfig, "mean_bpm outside [30, 220]");
  }
  if (!std::isfinite(cfg.snr_db)) raise(ErrorCode::BadConfig, "snr_db not finite");
  if (!(cfg.s2_amplitude_ratio > 0.0) || cfg.s2_amplitude_ratio > 1.0) {
    raise(ErrorCode::BadConfig, "s2_amplitude_ratio outside (0, 1]");
  }
  if (cfg.bpm_jitter_std_ms < 0.0) raise(ErrorCode::BadConfig, "negative jitter");
}

// Gaussian-envelope sinusoid starting at onset_s; sigma = duration / 4.
void add_burst(std::vector<double>& signal, int rate, double onset_s,
               double duration_s, double carrier_hz, double amplitude) {
  const double center = onset_s + duration_s / 2.0;
  const double sigma = duration_s / 4.0;
  const long first = std::max(0L, static_cast<long>(std::ceil(onset_s * rate)));
  const long last = std::min(static_cast<long>(signal.size()),
                             static_cast<long>((onset_s + duration_s) * rate));
  for (long n = first; n < last; ++n) {
    const double t = static_cast<double>(n) / rate;
    const double z = (t - center) / sigma;
    signal[n] += amplitude * std::exp(-0.5 * z * z) *
                 std::sin(2.0 * kPi * carrier_hz * (t - onset_s));
  }
}

}  // namespace

SynthRecord generate(const SynthConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.rng_seed);
  std::normal_distribution<double> jitter(0.0, 1.0);

  const int rate = kCanonicalSampleRate;
  const std::size_t n_samples =
      static_cast<std::size_t>(std::llround(cfg.duration_s * rate));
  const double period_ms = 60000.0 / cfg.mean_bpm;

  SynthRecord rec;
  double t = period_ms / 2000.0;  // half a mean period in
  while (t < cfg.duration_s) {
    rec.rpeak_times_s.push_back(t);
    double interval_ms = period_ms;
    if (cfg.bpm_jitter_std_ms > 0.0) {
      interval_ms += cfg.bpm_jitter_std_ms * jitter(rng);
    }
    t += std::max(interval_ms, 1.0) / 1000.0;
  }
  for (std::size_t i = 0; i + 1 < rec.rpeak_times_s.size(); ++i) {
    rec.true_deltas_ms.push_back(
        (rec.rpeak_times_s[i + 1] - rec.rpeak_times_s[i]) * 1000.0);
  }

  std::vector<double> signal(n_samples, 0.0);
  const double s2_onset = kDefaultS1MeanS + kDefaultSystoleMeanS;
  for (double r : rec.rpeak_times_s) {
    add_burst(signal, rate, r, kDefaultS1MeanS, cfg.s1_carrier_hz, 1.0);
    add_burst(signal, rate, r + s2_onset, kDefaultS2MeanS, cfg.s2_carrier_hz,
              cfg.s2_amplitude_ratio);
  }

  double sig_power = 0.0;
  for (double s : signal) sig_power += s * s;
  sig_power /= static_cast<double>(n_samples);

  const double noise_power = sig_power * std::pow(10.0, -cfg.snr_db / 10.0);
  std::vector<double> noise(n_samples);
  std::normal_distribution<double> white(0.0, 1.0);
  if (cfg.noise_color == NoiseColor::White) {
    for (double& v : noise) v = white(rng);
  } else {
    double y = 0.0;
    for (double& v : noise) {
      y = 0.98 * y + white(rng);
      v = y;
    }
  }
  double raw_power = 0.0;
  for (double v : noise) raw_power += v * v;
  raw_power /= static_cast<double>(n_samples);
  const double scale =
      raw_power > 0.0 ? std::sqrt(noise_power / raw_power) : 0.0;

  rec.audio.sample_rate_hz = rate;
  rec.audio.samples.resize(n_samples);
  double peak = 0.0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    rec.audio.samples[n] = signal[n] + scale * noise[n];
    peak = std::max(peak, std::abs(rec.audio.samples[n]));
  }
  if (peak > 0.0) {
    const double norm = 0.95 / peak;
    for (double& s : rec.audio.samples) s *= norm;
  }

  // Ground-truth labels on the feature frame grid.
  const std::size_t n_frames = feature_frame_count(n_samples);
  rec.true_states.frame_rate_hz = kFrameRateHz;
  rec.true_states.labels.resize(n_frames);
  std::size_t peak_idx = 0;
  for (std::size_t i = 0; i < n_frames; ++i) {
    const double ft = static_cast<double>(i) / kFrameRateHz;
    while (peak_idx + 1 < rec.rpeak_times_s.size() &&
           rec.rpeak_times_s[peak_idx + 1] <= ft) {
      ++peak_idx;
    }
    State s = State::Diastole;
    if (!rec.rpeak_times_s.empty() && ft >= rec.rpeak_times_s[peak_idx]) {
      const double dt = ft - rec.rpeak_times_s[peak_idx];
      if (dt < kDefaultS1MeanS) {
        s = State::S1;
      } else if (dt < s2_onset) {
        s = State::Systole;
      } else if (dt < s2_onset + kDefaultS2MeanS) {
        s = State::S2;
      }
    }
    rec.true_states.labels[i] = s;
  }
  return rec;
}

}  // namespace pcgseg
