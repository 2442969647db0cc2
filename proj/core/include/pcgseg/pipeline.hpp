#pragma once

#include "pcgseg/forest.hpp"
#include "pcgseg/hr.hpp"
#include "pcgseg/hsmm.hpp"
#include "pcgseg/types.hpp"

namespace pcgseg {

struct PipelineConfig {
  DurationModel durations = DurationModel::defaults();
  KalmanConfig kalman;
  double chunk_length_s = 10.0;   // >= 1
  double chunk_overlap_s = 0.5;   // later chunk wins on the overlap
};

struct PipelineResult {
  StateSequence labels;
  BeatSeries beats;
  HrEstimate hr;  // empty when fewer than two S1 onsets were found
};

// Whole-file decode: features -> emissions -> Viterbi -> beats -> Kalman HR.
PipelineResult run_pipeline(const AudioSegment& audio, const ForestModel& model,
                            const PipelineConfig& cfg = {});

// Chunked decode with a 0.5 s overlap; labels in the overlap come from the
// later chunk. Memory use is bounded by the chunk length, not the
// recording length.
PipelineResult run_pipeline_streaming(const AudioSegment& audio,
                                      const ForestModel& model,
                                      const PipelineConfig& cfg = {});

// Median wall time per stage to process 1 s of audio.
struct LatencyReport {
  double features_ms = 0.0;
  double emissions_ms = 0.0;
  double viterbi_ms = 0.0;
  double total_ms = 0.0;
  int repetitions = 0;
};

LatencyReport bench_stages(const ForestModel& model,
                           const DurationModel& durations, int repetitions = 30);

}  // namespace pcgseg
