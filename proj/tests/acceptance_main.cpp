// Acceptance suite: one pass/fail line per criterion. Exits non-zero if
// any criterion fails. argv[1] (optional) is the path to the CLI binary,
// used by the determinism criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pcgseg/eval.hpp"
#include "pcgseg/features.hpp"
#include "pcgseg/forest.hpp"
#include "pcgseg/hr.hpp"
#include "pcgseg/hsmm.hpp"
#include "pcgseg/pipeline.hpp"
#include "pcgseg/synth.hpp"

using namespace pcgseg;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str());
  if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

DurationModel random_duration_model(std::mt19937& rng) {
  DurationModel m;
  m.frame_rate_hz = kFrameRateHz;
  std::uniform_int_distribution<int> min_d(6, 10);
  std::uniform_real_distribution<double> std_s(0.01, 0.08);
  for (int s = 0; s < kNumStates; ++s) {
    StateDuration d;
    d.min_frames = min_d(rng);
    std::uniform_int_distribution<int> max_d(d.min_frames + 2, 20);
    d.max_frames = max_d(rng);
    std::uniform_real_distribution<double> mean_s(d.min_frames / 100.0,
                                                  d.max_frames / 100.0);
    d.mean_s = mean_s(rng);
    d.std_s = std_s(rng);
    m.states[s] = d;
  }
  return m;
}

SynthRecord make_recording(double bpm, double snr_db, std::uint64_t seed,
                           double duration_s = 60.0) {
  SynthConfig cfg;
  cfg.duration_s = duration_s;
  cfg.mean_bpm = bpm;
  cfg.bpm_jitter_std_ms = 30.0;
  cfg.snr_db = snr_db;
  cfg.rng_seed = seed;
  return generate(cfg);
}

ForestModel train_on_recordings(const std::vector<SynthRecord>& recs,
                                std::uint64_t seed) {
  FeatureMatrix features;
  FrameLabels labels;
  for (const SynthRecord& rec : recs) {
    FeatureMatrix f = extract_features(rec.audio);
    FrameLabels l = derive_frame_labels(rec.rpeak_times_s, f.num_frames(),
                                        f.frame_rate_hz);
    features.frame_rate_hz = f.frame_rate_hz;
    features.frames.insert(features.frames.end(), f.frames.begin(),
                           f.frames.end());
    labels.sound.insert(labels.sound.end(), l.sound.begin(), l.sound.end());
  }
  return train_forest(features, labels, seed);
}

TimedSeries estimate_series(const PipelineResult& result) {
  TimedSeries series;
  for (std::size_t i = 1; i < result.beats.s1_onsets.size(); ++i) {
    series.times_s.push_back(static_cast<double>(result.beats.s1_onsets[i]) /
                             result.beats.frame_rate_hz);
  }
  series.values = result.hr.filtered_bpm;
  return series;
}

TimedSeries truth_series(const SynthRecord& rec) {
  TimedSeries series;
  std::vector<double> raw;
  for (std::size_t i = 1; i < rec.rpeak_times_s.size(); ++i) {
    raw.push_back(60.0 / (rec.rpeak_times_s[i] - rec.rpeak_times_s[i - 1]));
    series.times_s.push_back(rec.rpeak_times_s[i]);
  }
  series.values = smooth_ground_truth(raw, 0.075);
  return series;
}

struct EvalOutcome {
  double median_abs_bpm;
  double f1;
};

EvalOutcome evaluate_recording(const SynthRecord& rec, const ForestModel& model) {
  const PipelineResult result = run_pipeline(rec.audio, model);
  const SegmentationReport seg =
      score_s1_localisation(result.labels, rec.rpeak_times_s);
  EvalOutcome out{1e9, seg.f1};
  if (result.hr.filtered_bpm.size() >= 2) {
    const HrErrorReport hr = compare_hr(estimate_series(result), truth_series(rec));
    out.median_abs_bpm = hr.median_abs_bpm;
  }
  return out;
}

double population_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 == 1 ? v[v.size() / 2]
                           : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

void criterion_1_decoder_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(1001);
  std::uniform_real_distribution<double> prob(0.001, 0.999);
  std::uniform_int_distribution<int> len(10, 60);
  bool all_match = true;
  for (int trial = 0; trial < 200; ++trial) {
    const DurationModel m = random_duration_model(rng);
    EmissionSeries em;
    em.probs.resize(len(rng));
    for (double& p : em.probs) p = prob(rng);

    const DecodeResult dp = hsmm_decode(em, m);
    const auto brute = pcgseg::testing::brute_force_decode(em, m);
    if (std::abs(dp.log_score - brute.score) > 1e-9 ||
        dp.sequence.labels != brute.labels) {
      all_match = false;
      break;
    }
  }
  const double secs = elapsed_s(t0);
  report(1, "decoder matches exhaustive enumeration on 200 instances (" +
                std::to_string(secs) + " s)",
         all_match && secs < 60.0);
}

void criterion_2_feature_oracle() {
  std::mt19937 rng(1002);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(16, 200);
  bool all_match = true;
  for (int trial = 0; trial < 100; ++trial) {
    AudioSegment audio;
    audio.sample_rate_hz = kCanonicalSampleRate;
    audio.samples.resize(len(rng));
    for (double& s : audio.samples) s = amp(rng);
    const FeatureMatrix f = extract_features(audio);
    for (std::size_t k = 0; k < f.num_frames() && all_match; ++k) {
      const auto oracle =
          pcgseg::testing::naive_dft_frame(audio.samples.data() + 5 * k);
      for (int b = 0; b < kNumFeatures; ++b) {
        if (std::abs(f.frames[k][b] - oracle[b]) > 1e-7) {
          all_match = false;
          break;
        }
      }
    }
  }
  report(2, "STFT frames match the naive Hann-weighted DFT within 1e-7",
         all_match);
}

ForestModel criterion_3_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SynthRecord> train_recs = {
      make_recording(60.0, 20.0, 1), make_recording(80.0, 20.0, 2),
      make_recording(100.0, 20.0, 3)};
  const ForestModel model = train_on_recordings(train_recs, 42);

  bool pass = true;
  std::string detail;
  for (const auto& [bpm, seed] :
       std::vector<std::pair<double, std::uint64_t>>{{65.0, 11}, {75.0, 12},
                                                     {95.0, 13}}) {
    const EvalOutcome out =
        evaluate_recording(make_recording(bpm, 20.0, seed), model);
    detail += " [" + std::to_string(static_cast<int>(bpm)) +
              " BPM: err=" + std::to_string(out.median_abs_bpm) +
              " f1=" + std::to_string(out.f1) + "]";
    if (out.median_abs_bpm > 1.0 || out.f1 < 0.9) pass = false;
  }
  const double secs = elapsed_s(t0);
  report(3, "synthetic rest analogue: median |HR err| <= 1 BPM, F1 >= 0.9" +
                detail + " (" + std::to_string(secs) + " s)",
         pass && secs < 300.0);
  return model;
}

void criterion_4_noise_degradation() {
  // The emission model sees a moderate spread of noise levels in training,
  // as the reference classifier did; everything else is held fixed across
  // the three evaluation SNRs (same seeds, so the same noise realisations
  // scaled). Ten recordings per SNR keep the medians stable.
  const ForestModel model = train_on_recordings(
      {make_recording(60.0, 20.0, 4), make_recording(80.0, 12.0, 5)}, 42);
  std::vector<double> errs, f1s;
  std::string detail;
  for (double snr : {20.0, 5.0, -10.0}) {
    std::vector<double> medians;
    double f1_sum = 0.0;
    for (std::uint64_t seed = 21; seed <= 30; ++seed) {
      const EvalOutcome out =
          evaluate_recording(make_recording(75.0, snr, seed), model);
      medians.push_back(out.median_abs_bpm);
      f1_sum += out.f1;
    }
    errs.push_back(population_median(medians));
    f1s.push_back(f1_sum / 10.0);
    detail += " [snr=" + std::to_string(static_cast<int>(snr)) +
              ": err=" + std::to_string(errs.back()) +
              " f1=" + std::to_string(f1s.back()) + "]";
  }
  const bool monotone = errs[0] <= errs[1] + 1e-12 && errs[1] <= errs[2] + 1e-12;
  const bool collapsed = f1s[2] < 0.6;
  report(4, "median HR error non-decreasing through SNR {20,5,-10} dB and "
            "F1 < 0.6 at -10 dB" + detail,
         monotone && collapsed);
}

void criterion_5_hrv() {
  bool pass = true;

  BeatSeries worked;
  worked.deltas = {100, 100, 100, 200, 100};
  worked.s1_onsets = {0, 100, 200, 300, 500, 600};
  const HrvEstimate hrv = estimate_hrv(worked);
  pass = pass && hrv.rejected_count == 1 && hrv.retained_count == 3 &&
         hrv.value_ms == 0.0;

  BeatSeries constant;
  constant.deltas.assign(20, 90.0);
  constant.s1_onsets.resize(21);
  const HrvEstimate const_hrv = estimate_hrv(constant);
  pass = pass && const_hrv.value_ms == 0.0 && const_hrv.rejected_count == 0;

  std::mt19937 rng(1005);
  std::uniform_real_distribution<double> delta(50.0, 150.0);
  std::uniform_real_distribution<double> scale(0.25, 4.0);
  for (int trial = 0; trial < 100 && pass; ++trial) {
    BeatSeries a;
    a.deltas.resize(30);
    for (double& d : a.deltas) d = delta(rng);
    const double c = scale(rng);
    BeatSeries b;
    b.deltas = a.deltas;
    for (double& d : b.deltas) d *= c;
    try {
      const HrvEstimate ha = estimate_hrv(a);
      const HrvEstimate hb = estimate_hrv(b);
      pass = pass && std::abs(hb.value_ms - ha.value_ms * c) <=
                         1e-9 * std::max(1.0, ha.value_ms * c) &&
             ha.retained_count == hb.retained_count &&
             ha.rejected_count == hb.rejected_count;
    } catch (const Error&) {
      pass = false;
    }
  }
  report(5, "HRV outlier-rejection conformance: worked example, constants, "
            "scale equivariance", pass);
}

void criterion_6_smoothing() {
  const auto out = smooth_ground_truth(std::vector<double>(100, 1.0), 0.075, 0.0);
  bool pass = true;
  for (int t = 0; t < 100; ++t) {
    if (std::abs(out[t] - (1.0 - std::pow(0.925, t + 1))) > 1e-12) {
      pass = false;
      break;
    }
  }
  report(6, "exponential-smoothing step response matches 1 - 0.925^(t+1) "
            "to 1e-12", pass);
}

void criterion_7_realtime(const ForestModel& model) {
  const LatencyReport r = bench_stages(model, DurationModel::defaults(), 50);
  const bool realtime = r.total_ms < 1000.0;
  const bool ordering = r.viterbi_ms > r.features_ms && r.viterbi_ms > r.emissions_ms;
  report(7, "bench: total " + std::to_string(r.total_ms) + " ms < 1000; "
            "viterbi (" + std::to_string(r.viterbi_ms) + ") > features (" +
            std::to_string(r.features_ms) + "), emissions (" +
            std::to_string(r.emissions_ms) + ")",
         realtime && ordering);
}

void criterion_8_streaming(const ForestModel& model) {
  const SynthRecord rec = make_recording(72.0, 20.0, 31, 120.0);
  PipelineConfig cfg;
  cfg.chunk_length_s = 10.0;
  const PipelineResult whole = run_pipeline(rec.audio, model, cfg);
  const PipelineResult streamed = run_pipeline_streaming(rec.audio, model, cfg);

  auto median_hr = [](const PipelineResult& r) {
    return population_median(r.hr.filtered_bpm);
  };
  const bool hr_close =
      std::abs(median_hr(whole) - median_hr(streamed)) < 0.5;

  // Chunk boundaries fall every (chunk - overlap) seconds.
  const double hop_s = cfg.chunk_length_s - cfg.chunk_overlap_s;
  auto near_boundary = [&](double t) {
    for (double b = hop_s; b < 120.0 + cfg.chunk_length_s; b += hop_s) {
      if (std::abs(t - b) <= 0.5 || std::abs(t - (b + 0.5)) <= 0.5) return true;
    }
    return false;
  };
  auto interior_onsets = [&](const PipelineResult& r) {
    std::vector<std::size_t> out;
    for (std::size_t onset : r.beats.s1_onsets) {
      if (!near_boundary(static_cast<double>(onset) / 100.0)) out.push_back(onset);
    }
    return out;
  };
  const bool onsets_agree = interior_onsets(whole) == interior_onsets(streamed);
  report(8, "streaming vs whole-file on 120 s: median HR delta < 0.5 BPM and "
            "interior onsets identical", hr_close && onsets_agree);
}

void criterion_9_cli_determinism(const std::string& cli) {
  if (cli.empty()) {
    report(9, "CLI determinism (skipped: no CLI path given)", false);
    return;
  }
  const fs::path base = fs::temp_directory_path() / "pcgseg_acceptance";
  fs::remove_all(base);

  auto run_all = [&](const fs::path& dir) {
    fs::create_directories(dir);
    const std::string d = dir.string() + "/";
    const std::vector<std::string> commands = {
        cli + " synth --out " + d + "a.wav --rpeaks " + d + "r.csv --states " +
            d + "s.csv --duration 30 --bpm 70 --jitter-ms 30 --snr-db 20 "
            "--seed 5",
        cli + " train --audio " + d + "a.wav --rpeaks " + d + "r.csv --out " +
            d + "model.bin --seed 7",
        cli + " segment --audio " + d + "a.wav --model " + d +
            "model.bin --labels " + d + "labels.csv --beats " + d + "beats.csv",
        cli + " estimate --labels " + d + "labels.csv --hr " + d +
            "hr.csv --hrv " + d + "hrv.csv",
        cli + " evaluate --labels " + d + "labels.csv --rpeaks " + d +
            "r.csv --hr " + d + "hr.csv --report " + d + "report.csv",
    };
    for (const std::string& cmd : commands) {
      if (std::system(cmd.c_str()) != 0) return false;
    }
    return true;
  };

  bool pass = run_all(base / "run1") && run_all(base / "run2");
  if (pass) {
    for (const char* name : {"a.wav", "r.csv", "s.csv", "model.bin",
                             "labels.csv", "beats.csv", "hr.csv", "hrv.csv",
                             "report.csv"}) {
      std::ifstream f1(base / "run1" / name, std::ios::binary);
      std::ifstream f2(base / "run2" / name, std::ios::binary);
      const std::string c1((std::istreambuf_iterator<char>(f1)),
                           std::istreambuf_iterator<char>());
      const std::string c2((std::istreambuf_iterator<char>(f2)),
                           std::istreambuf_iterator<char>());
      if (c1.empty() || c1 != c2) {
        pass = false;
        break;
      }
    }
  }
  fs::remove_all(base);
  report(9, "CLI commands with a fixed --seed produce byte-identical outputs",
         pass);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  try {
    criterion_1_decoder_oracle();
    criterion_2_feature_oracle();
    const ForestModel model = criterion_3_end_to_end();
    criterion_4_noise_degradation();
    criterion_5_hrv();
    criterion_6_smoothing();
    criterion_7_realtime(model);
    criterion_8_streaming(model);
    criterion_9_cli_determinism(cli);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
