#include "pcgseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pcgseg/features.hpp"
#include "pcgseg/synth.hpp"

namespace pcgseg {

namespace {

void validate(const PipelineConfig& cfg) {
  if (cfg.chunk_length_s < 1.0) {
    raise(ErrorCode::BadConfig, "chunk_length_s must be >= 1");
  }
  if (!(cfg.chunk_overlap_s > 0.0) ||
      cfg.chunk_overlap_s >= cfg.chunk_length_s) {
    raise(ErrorCode::BadConfig, "overlap must be in (0, chunk_length)");
  }
  cfg.durations.validate();
}

PipelineResult finish(StateSequence labels, const KalmanConfig& kalman) {
  PipelineResult result;
  result.labels = std::move(labels);
  result.beats = find_beats(result.labels);
  if (!result.beats.deltas.empty()) {
    result.hr = estimate_heart_rate(result.beats, kalman);
  }
  return result;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PipelineResult run_pipeline(const AudioSegment& audio, const ForestModel& model,
                            const PipelineConfig& cfg) {
  validate(cfg);
  const FeatureMatrix features = extract_features(audio);
  const EmissionSeries emissions = predict_emissions(model, features);
  DecodeResult decoded = hsmm_decode(emissions, cfg.durations);
  return finish(std::move(decoded.sequence), cfg.kalman);
}

PipelineResult run_pipeline_streaming(const AudioSegment& audio,
                                      const ForestModel& model,
                                      const PipelineConfig& cfg) {
  validate(cfg);
  const int rate = audio.sample_rate_hz;
  const std::size_t n = audio.samples.size();
  const std::size_t chunk_samples =
      static_cast<std::size_t>(std::llround(cfg.chunk_length_s * rate));
  const std::size_t overlap_samples =
      static_cast<std::size_t>(std::llround(cfg.chunk_overlap_s * rate));
  const std::size_t hop = chunk_samples - overlap_samples;

  if (n < kWindowLen) {
    raise(ErrorCode::TooShort,
          "chunk 0: need at least 16 samples, got " + std::to_string(n));
  }

  StateSequence out;
  out.frame_rate_hz = rate / kHopLen;
  out.labels.resize(feature_frame_count(n), State::Diastole);

  std::size_t chunk_index = 0;
  for (std::size_t offset = 0; offset < n; offset += hop, ++chunk_index) {
    const std::size_t end = std::min(offset + chunk_samples, n);
    if (end - offset < kWindowLen && chunk_index > 0) break;  // tail too short

    AudioSegment chunk;
    chunk.sample_rate_hz = rate;
    chunk.samples.assign(audio.samples.begin() + offset,
                         audio.samples.begin() + end);
    try {
      const FeatureMatrix features = extract_features(chunk);
      const EmissionSeries emissions = predict_emissions(model, features);
      const DecodeResult decoded = hsmm_decode(emissions, cfg.durations);
      const std::size_t frame_offset = offset / kHopLen;
      for (std::size_t i = 0; i < decoded.sequence.labels.size(); ++i) {
        out.labels[frame_offset + i] = decoded.sequence.labels[i];
      }
    } catch (const Error& e) {
      raise(e.code(), "chunk " + std::to_string(chunk_index) + ": " + e.what());
    }
    if (end == n) break;
  }
  return finish(std::move(out), cfg.kalman);
}

LatencyReport bench_stages(const ForestModel& model,
                           const DurationModel& durations, int repetitions) {
  repetitions = std::max(repetitions, 30);

  SynthConfig synth_cfg;
  synth_cfg.duration_s = 1.0;
  synth_cfg.mean_bpm = 70.0;
  synth_cfg.snr_db = 20.0;
  synth_cfg.rng_seed = 12345;
  const SynthRecord rec = generate(synth_cfg);

  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  std::vector<double> feat_ms, emit_ms, viterbi_ms, total_ms;
  volatile double sink = 0.0;
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = clock::now();
    const FeatureMatrix features = extract_features(rec.audio);
    const double t_feat = ms_since(t0);

    const auto t1 = clock::now();
    const EmissionSeries emissions = predict_emissions(model, features);
    const double t_emit = ms_since(t1);

    const auto t2 = clock::now();
    const DecodeResult decoded = hsmm_decode(emissions, durations);
    const double t_vit = ms_since(t2);

    sink = sink + decoded.log_score;
    feat_ms.push_back(t_feat);
    emit_ms.push_back(t_emit);
    viterbi_ms.push_back(t_vit);
    total_ms.push_back(ms_since(t0));
  }
  (void)sink;

  LatencyReport report;
  report.features_ms = median_of(feat_ms);
  report.emissions_ms = median_of(emit_ms);
  report.viterbi_ms = median_of(viterbi_ms);
  report.total_ms = median_of(total_ms);
  report.repetitions = repetitions;
  return report;
}

}  // namespace pcgseg
