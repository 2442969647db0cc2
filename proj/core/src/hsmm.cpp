#include "pcgseg/hsmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcgseg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogUniformPrior = std::log(0.25);

// Discretized, truncated and renormalized Gaussian duration masses plus
// their survivor function, per state, indexed by run length in frames.
struct DurationTable {
  struct PerState {
    int min_frames = 1;
    int max_frames = 1;
    std::vector<double> logmass;  // index d in [1, max]; -inf below min
    std::vector<double> logsurv;  // log sum of masses for lengths >= d
  };
  std::array<PerState, kNumStates> states;

  explicit DurationTable(const DurationModel& m) {
    for (int s = 0; s < kNumStates; ++s) {
      const StateDuration& sd = m.states[s];
      PerState& p = states[s];
      p.min_frames = sd.min_frames;
      p.max_frames = sd.max_frames;
      p.logmass.assign(sd.max_frames + 1, kNegInf);
      p.logsurv.assign(sd.max_frames + 1, kNegInf);

      std::vector<double> logg(sd.max_frames + 1, kNegInf);
      double max_logg = kNegInf;
      for (int d = sd.min_frames; d <= sd.max_frames; ++d) {
        const double z =
            (static_cast<double>(d) / m.frame_rate_hz - sd.mean_s) / sd.std_s;
        logg[d] = -0.5 * z * z;
        max_logg = std::max(max_logg, logg[d]);
      }
      double norm = 0.0;
      for (int d = sd.min_frames; d <= sd.max_frames; ++d) {
        norm += std::exp(logg[d] - max_logg);
      }
      const double log_norm = max_logg + std::log(norm);

      std::vector<double> mass(sd.max_frames + 1, 0.0);
      for (int d = sd.min_frames; d <= sd.max_frames; ++d) {
        p.logmass[d] = logg[d] - log_norm;
        mass[d] = std::exp(p.logmass[d]);
      }
      double suffix = 0.0;
      for (int d = sd.max_frames; d >= 1; --d) {
        suffix += mass[d];
        p.logsurv[d] = std::log(std::min(suffix, 1.0));
      }
    }
  }
};

void validate_emissions(const EmissionSeries& emissions) {
  if (emissions.probs.empty()) {
    raise(ErrorCode::EmptyInput, "emission series is empty");
  }
}

struct RunHistory {
  int first_state = kNumStates;
  std::vector<int> durations;
};

// Smaller is preferred: earliest first-run state in cycle order, then the
// lexicographically smallest run-length sequence.
bool history_less(const RunHistory& a, const RunHistory& b) {
  if (a.first_state != b.first_state) return a.first_state < b.first_state;
  return std::lexicographical_compare(a.durations.begin(), a.durations.end(),
                                      b.durations.begin(), b.durations.end());
}

}  // namespace

StateDuration DurationModel::from_moments(double mean_s, double std_s,
                                          int frame_rate_hz) {
  StateDuration d;
  d.mean_s = mean_s;
  d.std_s = std_s;
  d.min_frames = std::max(
      1, static_cast<int>(std::lround((mean_s - 3.0 * std_s) * frame_rate_hz)));
  d.max_frames = std::max(
      d.min_frames,
      static_cast<int>(std::lround((mean_s + 3.0 * std_s) * frame_rate_hz)));
  return d;
}

DurationModel DurationModel::defaults() {
  DurationModel m;
  m.frame_rate_hz = kFrameRateHz;
  m.states[static_cast<int>(State::S1)] =
      from_moments(kDefaultS1MeanS, kDefaultS1StdS);
  m.states[static_cast<int>(State::Systole)] =
      from_moments(kDefaultSystoleMeanS, kDefaultSystoleStdS);
  m.states[static_cast<int>(State::S2)] =
      from_moments(kDefaultS2MeanS, kDefaultS2StdS);
  m.states[static_cast<int>(State::Diastole)] =
      from_moments(kDefaultDiastoleMeanS, kDefaultDiastoleStdS);
  return m;
}

void DurationModel::validate() const {
  if (frame_rate_hz <= 0) raise(ErrorCode::BadConfig, "frame rate must be > 0");
  for (const StateDuration& s : states) {
    if (!(s.mean_s > 0.0) || !(s.std_s > 0.0)) {
      raise(ErrorCode::BadConfig, "duration mean and std must be > 0");
    }
    if (s.min_frames < 1 || s.max_frames < s.min_frames) {
      raise(ErrorCode::BadConfig, "invalid duration frame bounds");
    }
  }
}

double duration_logmass(const DurationModel& durations, State state,
                        int length_frames) {
  durations.validate();
  const StateDuration& sd = durations.states[static_cast<int>(state)];
  if (length_frames < 1 || length_frames > sd.max_frames) {
    raise(ErrorCode::OutOfRange,
          "run length " + std::to_string(length_frames) +
              " outside [1, " + std::to_string(sd.max_frames) + "]");
  }
  DurationTable table(durations);
  return table.states[static_cast<int>(state)].logmass[length_frames];
}

DecodeResult hsmm_decode(const EmissionSeries& emissions,
                         const DurationModel& durations) {
  validate_emissions(emissions);
  durations.validate();
  const DurationTable table(durations);
  const int T = static_cast<int>(emissions.probs.size());

  // Prefix sums of per-frame log-emissions under the tied model.
  std::vector<double> cum_sound(T + 1, 0.0), cum_quiet(T + 1, 0.0);
  for (int t = 0; t < T; ++t) {
    const double p =
        std::clamp(emissions.probs[t], kEmissionClamp, 1.0 - kEmissionClamp);
    cum_sound[t + 1] = cum_sound[t] + std::log(p);
    cum_quiet[t + 1] = cum_quiet[t] + std::log(1.0 - p);
  }
  auto emit_sum = [&](int s, int a, int b) {
    const bool sound = (s == static_cast<int>(State::S1) ||
                        s == static_cast<int>(State::S2));
    return sound ? cum_sound[b] - cum_sound[a] : cum_quiet[b] - cum_quiet[a];
  };

  // score[t][s]: best prefix [0, t) whose final run is state s ending at t.
  std::vector<std::array<double, kNumStates>> score(
      T + 1, {kNegInf, kNegInf, kNegInf, kNegInf});
  std::vector<std::array<int, kNumStates>> back_len(T + 1, {0, 0, 0, 0});

  auto history_of = [&](int t, int s) {
    RunHistory h;
    while (t > 0) {
      const int d = back_len[t][s];
      h.durations.push_back(d);
      h.first_state = s;
      t -= d;
      s = (s + kNumStates - 1) % kNumStates;
    }
    std::reverse(h.durations.begin(), h.durations.end());
    return h;
  };

  for (int t = 1; t <= T; ++t) {
    const bool last = (t == T);
    for (int s = 0; s < kNumStates; ++s) {
      const DurationTable::PerState& dur = table.states[s];
      const int prev = (s + kNumStates - 1) % kNumStates;
      const int d_cap = std::min(t, dur.max_frames);
      for (int d = 1; d <= d_cap; ++d) {
        const int start = t - d;
        const bool first = (start == 0);
        double base;
        if (first) {
          base = kLogUniformPrior;
        } else {
          base = score[start][prev];
          if (base == kNegInf) continue;
        }
        double dur_term;
        if (first || last) {
          dur_term = dur.logsurv[d];
        } else {
          if (d < dur.min_frames) continue;
          dur_term = dur.logmass[d];
        }
        const double cand = base + dur_term + emit_sum(s, start, t);
        if (cand == kNegInf) continue;
        if (cand > score[t][s]) {
          score[t][s] = cand;
          back_len[t][s] = d;
        } else if (cand == score[t][s]) {
          RunHistory incumbent = history_of(t, s);
          RunHistory challenger =
              first ? RunHistory{s, {d}} : history_of(start, prev);
          if (!first) {
            challenger.durations.push_back(d);
            if (challenger.first_state == kNumStates) challenger.first_state = s;
          }
          if (history_less(challenger, incumbent)) back_len[t][s] = d;
        }
      }
    }
  }

  int best_state = -1;
  for (int s = 0; s < kNumStates; ++s) {
    if (score[T][s] == kNegInf) continue;
    if (best_state < 0 || score[T][s] > score[T][best_state]) {
      best_state = s;
    } else if (score[T][s] == score[T][best_state] &&
               history_less(history_of(T, s), history_of(T, best_state))) {
      best_state = s;
    }
  }
  if (best_state < 0) {
    raise(ErrorCode::Internal, "no feasible segmentation found");
  }

  DecodeResult result;
  result.log_score = score[T][best_state];
  result.sequence.frame_rate_hz = emissions.frame_rate_hz;
  result.sequence.labels.assign(T, State::S1);
  int t = T, s = best_state;
  while (t > 0) {
    const int d = back_len[t][s];
    for (int i = t - d; i < t; ++i) {
      result.sequence.labels[i] = static_cast<State>(s);
    }
    t -= d;
    s = (s + kNumStates - 1) % kNumStates;
  }
  return result;
}

double score_labeling(const std::vector<State>& labels,
                      const EmissionSeries& emissions,
                      const DurationModel& durations) {
  if (labels.empty() || labels.size() != emissions.probs.size()) {
    raise(ErrorCode::EmptyInput, "labeling and emissions must match");
  }
  durations.validate();
  const DurationTable table(durations);
  const int T = static_cast<int>(labels.size());

  struct Run {
    int state;
    int length;
  };
  std::vector<Run> runs;
  for (int t = 0; t < T; ++t) {
    const int s = static_cast<int>(labels[t]);
    if (runs.empty() || runs.back().state != s) {
      if (!runs.empty() &&
          (runs.back().state + 1) % kNumStates != s) {
        return kNegInf;  // cyclic order violated
      }
      runs.push_back({s, 1});
    } else {
      ++runs.back().length;
    }
  }

  double total = kLogUniformPrior;
  for (int t = 0; t < T; ++t) {
    const double p =
        std::clamp(emissions.probs[t], kEmissionClamp, 1.0 - kEmissionClamp);
    const int s = static_cast<int>(labels[t]);
    const bool sound = (s == static_cast<int>(State::S1) ||
                        s == static_cast<int>(State::S2));
    total += std::log(sound ? p : 1.0 - p);
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const DurationTable::PerState& dur = table.states[runs[i].state];
    const bool boundary = (i == 0 || i + 1 == runs.size());
    if (runs[i].length > dur.max_frames) return kNegInf;
    if (boundary) {
      total += dur.logsurv[runs[i].length];
    } else {
      if (runs[i].length < dur.min_frames) return kNegInf;
      total += dur.logmass[runs[i].length];
    }
  }
  return total;
}

}  // namespace pcgseg
