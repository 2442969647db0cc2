// Command-line frontend for the heart-sound segmentation pipeline.
//
// Subcommands: synth, train, segment, estimate, evaluate, bench.
// Exit codes: 0 success, 2 input error, 1 internal error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcgseg/csvio.hpp"
#include "pcgseg/eval.hpp"
#include "pcgseg/features.hpp"
#include "pcgseg/forest.hpp"
#include "pcgseg/hr.hpp"
#include "pcgseg/hsmm.hpp"
#include "pcgseg/pipeline.hpp"
#include "pcgseg/synth.hpp"
#include "pcgseg/wav.hpp"

namespace {

using namespace pcgseg;

constexpr double kGroundTruthAlpha = 0.075;

std::vector<double> beat_times(const BeatSeries& beats) {
  // One timestamp per interval: the closing onset.
  std::vector<double> times;
  for (std::size_t i = 1; i < beats.s1_onsets.size(); ++i) {
    times.push_back(static_cast<double>(beats.s1_onsets[i]) /
                    beats.frame_rate_hz);
  }
  return times;
}

BeatSeries beats_from_rpeaks(const std::vector<double>& rpeaks) {
  BeatSeries beats;
  beats.frame_rate_hz = kFrameRateHz;
  for (double t : rpeaks) {
    beats.s1_onsets.push_back(
        static_cast<std::size_t>(std::llround(t * kFrameRateHz)));
  }
  for (std::size_t i = 0; i + 1 < beats.s1_onsets.size(); ++i) {
    beats.deltas.push_back(
        static_cast<double>(beats.s1_onsets[i + 1] - beats.s1_onsets[i]));
  }
  return beats;
}

TimedSeries truth_hr_series(const std::vector<double>& rpeaks, double alpha) {
  TimedSeries series;
  std::vector<double> raw;
  for (std::size_t i = 1; i < rpeaks.size(); ++i) {
    raw.push_back(60.0 / (rpeaks[i] - rpeaks[i - 1]));
    series.times_s.push_back(rpeaks[i]);
  }
  if (!raw.empty()) series.values = smooth_ground_truth(raw, alpha);
  return series;
}

ForestModel train_default_model(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.duration_s = 60.0;
  cfg.mean_bpm = 70.0;
  cfg.bpm_jitter_std_ms = 30.0;
  cfg.snr_db = 20.0;
  cfg.rng_seed = seed;
  const SynthRecord rec = generate(cfg);
  const FeatureMatrix features = extract_features(rec.audio);
  const FrameLabels labels = derive_frame_labels(
      rec.rpeak_times_s, features.num_frames(), features.frame_rate_hz);
  return train_forest(features, labels, seed);
}

int run(int argc, char** argv) {
  CLI::App app{"On-device heart-sound analysis pipeline"};
  app.require_subcommand(1);

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate a synthetic PCG recording with ground truth");
  SynthConfig synth_cfg;
  std::string synth_out, synth_rpeaks, synth_states;
  std::string noise = "white";
  synth_cmd->add_option("--out", synth_out, "Output WAV path")->required();
  synth_cmd->add_option("--rpeaks", synth_rpeaks, "Ground-truth R-peak CSV");
  synth_cmd->add_option("--states", synth_states, "Ground-truth state CSV");
  synth_cmd->add_option("--duration", synth_cfg.duration_s, "Seconds");
  synth_cmd->add_option("--bpm", synth_cfg.mean_bpm, "Mean heart rate");
  synth_cmd->add_option("--jitter-ms", synth_cfg.bpm_jitter_std_ms,
                        "Inter-beat jitter std (ms)");
  synth_cmd->add_option("--snr-db", synth_cfg.snr_db, "Signal-to-noise ratio");
  synth_cmd->add_option("--noise", noise, "white|pink");
  synth_cmd->add_option("--seed", synth_cfg.rng_seed, "RNG seed");

  // train
  auto* train_cmd = app.add_subcommand(
      "train", "Train the random-forest emission model");
  std::vector<std::string> train_audio, train_rpeaks;
  std::string train_out;
  std::uint64_t train_seed = 0;
  train_cmd->add_option("--audio", train_audio, "Training WAV (repeatable)")
      ->required();
  train_cmd
      ->add_option("--rpeaks", train_rpeaks,
                   "R-peak CSV per audio file (repeatable)")
      ->required();
  train_cmd->add_option("--out", train_out, "Output model path")->required();
  train_cmd->add_option("--seed", train_seed, "RNG seed");

  // duration-model overrides shared by segment
  auto* segment_cmd = app.add_subcommand(
      "segment", "Segment a recording into cardiac states");
  std::string seg_audio, seg_model, seg_labels, seg_beats;
  double chunk_s = 10.0;
  bool whole_file = false;
  DurationModel durations = DurationModel::defaults();
  double s1_mean = kDefaultS1MeanS, s1_std = kDefaultS1StdS;
  double s2_mean = kDefaultS2MeanS, s2_std = kDefaultS2StdS;
  segment_cmd->add_option("--audio", seg_audio, "Input WAV")->required();
  segment_cmd->add_option("--model", seg_model, "Forest model path")->required();
  segment_cmd->add_option("--labels", seg_labels, "Output label CSV")->required();
  segment_cmd->add_option("--beats", seg_beats, "Output beats CSV");
  segment_cmd->add_option("--chunk-s", chunk_s, "Chunk length (s)");
  segment_cmd->add_flag("--whole-file", whole_file,
                        "Decode in one pass instead of chunks");
  segment_cmd->add_option("--s1-mean-s", s1_mean, "S1 duration mean (s)");
  segment_cmd->add_option("--s1-std-s", s1_std, "S1 duration std (s)");
  segment_cmd->add_option("--s2-mean-s", s2_mean, "S2 duration mean (s)");
  segment_cmd->add_option("--s2-std-s", s2_std, "S2 duration std (s)");

  // estimate
  auto* estimate_cmd = app.add_subcommand(
      "estimate", "Heart rate and HRV from a label CSV");
  std::string est_labels, est_hr, est_hrv;
  KalmanConfig kalman;
  estimate_cmd->add_option("--labels", est_labels, "Label CSV")->required();
  estimate_cmd->add_option("--hr", est_hr, "Output HR CSV");
  estimate_cmd->add_option("--hrv", est_hrv, "Output HRV report CSV");
  estimate_cmd->add_option("--kalman-q", kalman.process_variance,
                           "Process variance (BPM^2/beat)");
  estimate_cmd->add_option("--kalman-r", kalman.measurement_variance,
                           "Measurement variance (BPM^2)");
  estimate_cmd->add_option("--kalman-p0", kalman.initial_variance,
                           "Initial variance (BPM^2)");

  // evaluate
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Score predictions against ground truth");
  std::string ev_labels, ev_rpeaks, ev_hr, ev_report;
  double alpha = kGroundTruthAlpha;
  eval_cmd->add_option("--labels", ev_labels, "Predicted label CSV")->required();
  eval_cmd->add_option("--rpeaks", ev_rpeaks, "Ground-truth R-peak CSV")
      ->required();
  eval_cmd->add_option("--hr", ev_hr, "Estimated HR CSV (enables HR metrics)");
  eval_cmd->add_option("--alpha", alpha, "Ground-truth smoothing alpha");
  eval_cmd->add_option("--report", ev_report, "Output report CSV")->required();

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "Per-stage latency for 1 s of audio");
  std::string bench_model, bench_report;
  int reps = 30;
  std::uint64_t bench_seed = 0;
  bench_cmd->add_option("--model", bench_model,
                        "Forest model path (default: train on synthetic data)");
  bench_cmd->add_option("--reps", reps, "Repetitions (>= 30)");
  bench_cmd->add_option("--report", bench_report, "Output report CSV");
  bench_cmd->add_option("--seed", bench_seed, "RNG seed for fallback model");

  CLI11_PARSE(app, argc, argv);

  if (synth_cmd->parsed()) {
    if (noise == "pink") {
      synth_cfg.noise_color = NoiseColor::Pink;
    } else if (noise != "white") {
      raise(ErrorCode::BadConfig, "--noise must be white or pink");
    }
    const SynthRecord rec = generate(synth_cfg);
    write_wav(synth_out, rec.audio);
    if (!synth_rpeaks.empty()) write_rpeaks_csv(synth_rpeaks, rec.rpeak_times_s);
    if (!synth_states.empty()) write_labels_csv(synth_states, rec.true_states);
    return 0;
  }

  if (train_cmd->parsed()) {
    if (train_audio.size() != train_rpeaks.size()) {
      raise(ErrorCode::BadConfig, "--audio and --rpeaks counts must match");
    }
    FeatureMatrix features;
    FrameLabels labels;
    for (std::size_t i = 0; i < train_audio.size(); ++i) {
      const AudioSegment audio = read_wav(train_audio[i]);
      const std::vector<double> rpeaks = read_rpeaks_csv(train_rpeaks[i]);
      FeatureMatrix f = extract_features(audio);
      FrameLabels l =
          derive_frame_labels(rpeaks, f.num_frames(), f.frame_rate_hz);
      features.frame_rate_hz = f.frame_rate_hz;
      features.frames.insert(features.frames.end(), f.frames.begin(),
                             f.frames.end());
      labels.sound.insert(labels.sound.end(), l.sound.begin(), l.sound.end());
    }
    const ForestModel model = train_forest(features, labels, train_seed);
    save_forest(model, train_out);
    return 0;
  }

  if (segment_cmd->parsed()) {
    durations.states[static_cast<int>(State::S1)] =
        DurationModel::from_moments(s1_mean, s1_std);
    durations.states[static_cast<int>(State::S2)] =
        DurationModel::from_moments(s2_mean, s2_std);
    const AudioSegment audio = read_wav(seg_audio);
    const ForestModel model = load_forest(seg_model);
    PipelineConfig cfg;
    cfg.durations = durations;
    cfg.chunk_length_s = chunk_s;
    const PipelineResult result =
        whole_file ? run_pipeline(audio, model, cfg)
                   : run_pipeline_streaming(audio, model, cfg);
    write_labels_csv(seg_labels, result.labels);
    if (!seg_beats.empty()) write_beats_csv(seg_beats, result.beats);
    return 0;
  }

  if (estimate_cmd->parsed()) {
    StateSequence labels = read_labels_csv(est_labels);
    const BeatSeries beats = find_beats(labels);
    if (!est_hr.empty()) {
      const HrEstimate hr = estimate_heart_rate(beats, kalman);
      write_hr_csv(est_hr, beat_times(beats), hr);
    }
    if (!est_hrv.empty()) {
      const HrvEstimate hrv = estimate_hrv(beats);
      write_report_csv(est_hrv,
                       {{"hrv_ms", hrv.value_ms},
                        {"retained", static_cast<double>(hrv.retained_count)},
                        {"rejected", static_cast<double>(hrv.rejected_count)}});
    }
    return 0;
  }

  if (eval_cmd->parsed()) {
    const StateSequence labels = read_labels_csv(ev_labels);
    const std::vector<double> rpeaks = read_rpeaks_csv(ev_rpeaks);

    std::vector<std::pair<std::string, double>> rows;
    const SegmentationReport seg = score_s1_localisation(labels, rpeaks);
    rows.emplace_back("precision", seg.precision);
    rows.emplace_back("recall", seg.recall);
    rows.emplace_back("f1", seg.f1);

    if (!ev_hr.empty()) {
      TimedSeries estimate;
      HrEstimate hr;
      read_hr_csv(ev_hr, estimate.times_s, hr);
      estimate.values = hr.filtered_bpm;
      const HrErrorReport report =
          compare_hr(estimate, truth_hr_series(rpeaks, alpha));
      rows.emplace_back("hr_median_abs_bpm", report.median_abs_bpm);
      rows.emplace_back("hr_mean_abs_bpm", report.mean_abs_bpm);
      rows.emplace_back("hr_median_pct", report.median_pct);
      rows.emplace_back("hr_mean_pct", report.mean_pct);
    }

    const BeatSeries est_beats = find_beats(labels);
    const BeatSeries truth_beats = beats_from_rpeaks(rpeaks);
    if (est_beats.deltas.size() >= 2 && truth_beats.deltas.size() >= 2) {
      try {
        const HrvEstimate est_hrv_v = estimate_hrv(est_beats);
        const HrvEstimate truth_hrv = estimate_hrv(truth_beats);
        rows.emplace_back("hrv_est_ms", est_hrv_v.value_ms);
        rows.emplace_back("hrv_truth_ms", truth_hrv.value_ms);
        if (truth_hrv.value_ms > 0.0) {
          const HrvErrorReport err = compare_hrv(est_hrv_v, truth_hrv);
          rows.emplace_back("hrv_abs_err_ms", err.abs_ms);
          rows.emplace_back("hrv_pct_err", err.pct);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AllRejected) throw;
      }
    }
    write_report_csv(ev_report, rows);
    return 0;
  }

  if (bench_cmd->parsed()) {
    const ForestModel model = bench_model.empty()
                                  ? train_default_model(bench_seed)
                                  : load_forest(bench_model);
    const LatencyReport report =
        bench_stages(model, DurationModel::defaults(), reps);
    const std::vector<std::pair<std::string, double>> rows = {
        {"features_ms", report.features_ms},
        {"emissions_ms", report.emissions_ms},
        {"viterbi_ms", report.viterbi_ms},
        {"total_ms", report.total_ms},
        {"repetitions", static_cast<double>(report.repetitions)},
    };
    if (!bench_report.empty()) write_report_csv(bench_report, rows);
    for (const auto& [metric, value] : rows) {
      std::printf("%s,%g\n", metric.c_str(), value);
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pcgseg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == pcgseg::ErrorCode::Internal ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
