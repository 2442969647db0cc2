#include <benchmark/benchmark.h>

#include "pcgseg/features.hpp"
#include "pcgseg/forest.hpp"
#include "pcgseg/hsmm.hpp"
#include "pcgseg/pipeline.hpp"
#include "pcgseg/synth.hpp"

namespace {

using namespace pcgseg;

struct Fixture {
  AudioSegment audio;
  FeatureMatrix features;
  EmissionSeries emissions;
  ForestModel model;

  Fixture() {
    SynthConfig cfg;
    cfg.duration_s = 60.0;
    cfg.mean_bpm = 72.0;
    cfg.bpm_jitter_std_ms = 30.0;
    cfg.snr_db = 20.0;
    cfg.rng_seed = 12345;
    const SynthRecord rec = generate(cfg);

    features = extract_features(rec.audio);
    const FrameLabels labels = derive_frame_labels(
        rec.rpeak_times_s, features.num_frames(), features.frame_rate_hz);
    model = train_forest(features, labels, 42);
    emissions = predict_emissions(model, features);

    SynthConfig one_s = cfg;
    one_s.duration_s = 1.0;
    audio = generate(one_s).audio;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Features(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_features(f.audio));
  }
}
BENCHMARK(BM_Features);

void BM_Emissions(benchmark::State& state) {
  const Fixture& f = fixture();
  FeatureMatrix one_s;
  one_s.frame_rate_hz = f.features.frame_rate_hz;
  one_s.frames.assign(f.features.frames.begin(),
                      f.features.frames.begin() + 97);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_emissions(f.model, one_s));
  }
}
BENCHMARK(BM_Emissions);

void BM_Viterbi(benchmark::State& state) {
  const Fixture& f = fixture();
  EmissionSeries one_s;
  one_s.frame_rate_hz = f.emissions.frame_rate_hz;
  one_s.probs.assign(f.emissions.probs.begin(), f.emissions.probs.begin() + 97);
  const DurationModel durations = DurationModel::defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsmm_decode(one_s, durations));
  }
}
BENCHMARK(BM_Viterbi);

void BM_PipelineWholeFile(benchmark::State& state) {
  const Fixture& f = fixture();
  SynthConfig cfg;
  cfg.duration_s = static_cast<double>(state.range(0));
  cfg.mean_bpm = 72.0;
  cfg.bpm_jitter_std_ms = 30.0;
  cfg.snr_db = 20.0;
  cfg.rng_seed = 777;
  const AudioSegment audio = generate(cfg).audio;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(audio, f.model));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(cfg.duration_s));
}
BENCHMARK(BM_PipelineWholeFile)->Arg(10)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
