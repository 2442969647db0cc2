#pragma once

#include <cstdint>

#include "pcgseg/types.hpp"

namespace pcgseg {

enum class NoiseColor { White, Pink };

struct SynthConfig {
  double duration_s = 60.0;
  double mean_bpm = 70.0;
  double bpm_jitter_std_ms = 0.0;  // Gaussian jitter on inter-beat intervals
  double snr_db = 20.0;
  double s1_carrier_hz = 50.0;
  double s2_carrier_hz = 70.0;
  double s2_amplitude_ratio = 0.5;
  NoiseColor noise_color = NoiseColor::White;
  std::uint64_t rng_seed = 0;
};

struct SynthRecord {
  AudioSegment audio;               // 500 Hz, normalized to peak 0.95
  std::vector<double> rpeak_times_s;
  StateSequence true_states;
  std::vector<double> true_deltas_ms;
};

// Synthetic PCG with exact ground truth: Gaussian-envelope sinusoid bursts
// for S1/S2 at the default state durations, Gaussian inter-beat jitter,
// and additive noise scaled to the requested SNR. Deterministic per seed.
SynthRecord generate(const SynthConfig& cfg);

}  // namespace pcgseg
