#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "pcgseg/hr.hpp"

using namespace pcgseg;

namespace {

StateSequence sequence_from_runs(
    const std::vector<std::pair<State, int>>& runs) {
  StateSequence seq;
  for (const auto& [state, len] : runs) {
    seq.labels.insert(seq.labels.end(), len, state);
  }
  return seq;
}

BeatSeries beats_from_deltas(std::vector<double> deltas) {
  BeatSeries beats;
  beats.s1_onsets.push_back(0);
  for (double d : deltas) {
    beats.s1_onsets.push_back(beats.s1_onsets.back() +
                              static_cast<std::size_t>(d));
  }
  beats.deltas = std::move(deltas);
  return beats;
}

}  // namespace

TEST_CASE("find_beats locates S1 run starts") {
  SUBCASE("all diastole") {
    const BeatSeries beats =
        find_beats(sequence_from_runs({{State::Diastole, 50}}));
    CHECK(beats.s1_onsets.empty());
    CHECK(beats.deltas.empty());
  }
  SUBCASE("three runs at 0, 86, 172") {
    const BeatSeries beats = find_beats(sequence_from_runs({
        {State::S1, 12}, {State::Systole, 13}, {State::S2, 9},
        {State::Diastole, 52},  // S1 at 86
        {State::S1, 12}, {State::Systole, 13}, {State::S2, 9},
        {State::Diastole, 52},  // S1 at 172
        {State::S1, 12}, {State::Systole, 13},
    }));
    CHECK(beats.s1_onsets == std::vector<std::size_t>{0, 86, 172});
    CHECK(beats.deltas == std::vector<double>{86.0, 86.0});
  }
  SUBCASE("onset count equals S1 run count") {
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> n_runs(1, 40), run_len(1, 30);
    std::uniform_int_distribution<int> start(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::pair<State, int>> runs;
      State s = static_cast<State>(start(rng));
      std::size_t s1_runs = 0;
      const int k = n_runs(rng);
      for (int i = 0; i < k; ++i) {
        runs.emplace_back(s, run_len(rng));
        if (s == State::S1) ++s1_runs;
        s = next_state(s);
      }
      const BeatSeries beats = find_beats(sequence_from_runs(runs));
      CHECK(beats.s1_onsets.size() == s1_runs);
    }
  }
}

TEST_CASE("Kalman filter on constant input converges to the input") {
  const BeatSeries beats = beats_from_deltas(std::vector<double>(60, 100.0));
  const HrEstimate est = estimate_heart_rate(beats);
  for (double r : est.raw_bpm) CHECK(r == doctest::Approx(60.0));
  CHECK(std::abs(est.filtered_bpm[49] - 60.0) < 1e-6);
  CHECK(est.filtered_bpm.size() == beats.deltas.size());
}

TEST_CASE("first measurement initializes the filter state") {
  const HrEstimate est = estimate_heart_rate(beats_from_deltas({100.0}));
  CHECK(est.filtered_bpm == std::vector<double>{60.0});
}

TEST_CASE("an outlier is attenuated relative to the raw jump") {
  std::vector<double> deltas(20, 100.0);  // 60 BPM
  deltas[10] = 200.0 / 3.0;               // 90 BPM outlier
  const HrEstimate est = estimate_heart_rate(beats_from_deltas(deltas));
  CHECK(est.raw_bpm[10] == doctest::Approx(90.0));
  CHECK(est.filtered_bpm[10] - 60.0 < 30.0 * 0.5);
  CHECK(est.filtered_bpm[10] > est.filtered_bpm[9]);
}

TEST_CASE("filtered output stays inside the raw min/max envelope") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> delta(60.0, 140.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> deltas(40);
    for (double& d : deltas) d = delta(rng);
    const HrEstimate est = estimate_heart_rate(beats_from_deltas(deltas));
    const auto [lo, hi] =
        std::minmax_element(est.raw_bpm.begin(), est.raw_bpm.end());
    for (double f : est.filtered_bpm) {
      CHECK(f >= *lo - 1e-12);
      CHECK(f <= *hi + 1e-12);
    }
  }
}

TEST_CASE("no beats yields NoBeats") {
  CHECK_THROWS_WITH_AS(estimate_heart_rate(BeatSeries{}),
                       doctest::Contains("NoBeats"), Error);
  CHECK_THROWS_WITH_AS(estimate_hrv(beats_from_deltas({100.0})),
                       doctest::Contains("NoBeats"), Error);
}

TEST_CASE("HRV traces the outlier-rejection loop literally") {
  SUBCASE("constant deltas give zero HRV") {
    const HrvEstimate hrv = estimate_hrv(beats_from_deltas({100, 100, 100, 100}));
    CHECK(hrv.value_ms == 0.0);
    CHECK(hrv.rejected_count == 0);
    CHECK(hrv.retained_count == 3);
  }
  SUBCASE("a 2x interval is rejected against the local mean") {
    const HrvEstimate hrv =
        estimate_hrv(beats_from_deltas({100, 100, 100, 200, 100}));
    CHECK(hrv.rejected_count == 1);
    CHECK(hrv.retained_count == 3);
    CHECK(hrv.value_ms == 0.0);
  }
  SUBCASE("alternating 90/110 is fully retained") {
    std::vector<double> deltas;
    for (int i = 0; i < 20; ++i) {
      deltas.push_back(90.0);
      deltas.push_back(110.0);
    }
    const HrvEstimate hrv = estimate_hrv(beats_from_deltas(deltas));
    CHECK(hrv.rejected_count == 0);
    CHECK(hrv.retained_count == 39);
    CHECK(hrv.value_ms == doctest::Approx(100.0).epsilon(0.01));
  }
  SUBCASE("all rejected is an error, not zero") {
    // Each tested delta alternates far outside 30% of its local mean.
    CHECK_THROWS_WITH_AS(estimate_hrv(beats_from_deltas({100, 500, 100, 500})),
                         doctest::Contains("AllRejected"), Error);
  }
}

TEST_CASE("HRV is scale-equivariant") {
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> delta(50.0, 150.0);
  std::uniform_real_distribution<double> scale(0.25, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> deltas(30);
    for (double& d : deltas) d = delta(rng);
    const double c = scale(rng);
    std::vector<double> scaled = deltas;
    for (double& d : scaled) d *= c;

    HrvEstimate a, b;
    bool a_ok = true, b_ok = true;
    try {
      a = estimate_hrv(beats_from_deltas(deltas));
    } catch (const Error&) {
      a_ok = false;
    }
    try {
      b = estimate_hrv(beats_from_deltas(scaled));
    } catch (const Error&) {
      b_ok = false;
    }
    REQUIRE(a_ok == b_ok);
    if (!a_ok) continue;
    CHECK(b.value_ms == doctest::Approx(a.value_ms * c).epsilon(1e-9));
    CHECK(a.retained_count == b.retained_count);
    CHECK(a.rejected_count == b.rejected_count);
  }
}

TEST_CASE("exponential smoothing") {
  SUBCASE("constant input is a fixed point") {
    const auto out = smooth_ground_truth(std::vector<double>(20, 72.5), 0.075);
    for (double v : out) CHECK(v == doctest::Approx(72.5));
  }
  SUBCASE("alpha = 1 is the identity") {
    const std::vector<double> in = {60, 65, 70, 62};
    CHECK(smooth_ground_truth(in, 1.0) == in);
  }
  SUBCASE("unit step response matches the closed form") {
    const auto out =
        smooth_ground_truth(std::vector<double>(100, 1.0), 0.075, 0.0);
    for (int t = 0; t < 100; ++t) {
      CHECK(out[t] == doctest::Approx(1.0 - std::pow(0.925, t + 1)).epsilon(1e-12));
    }
    CHECK(out[9] == doctest::Approx(0.5416).epsilon(1e-3));
  }
  SUBCASE("output bounded by input range") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> bpm(40.0, 180.0);
    std::vector<double> in(50);
    for (double& v : in) v = bpm(rng);
    const auto out = smooth_ground_truth(in, 0.075);
    const auto [lo, hi] = std::minmax_element(in.begin(), in.end());
    for (double v : out) {
      CHECK(v >= *lo - 1e-12);
      CHECK(v <= *hi + 1e-12);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(smooth_ground_truth({}, 0.5),
                         doctest::Contains("EmptyInput"), Error);
    CHECK_THROWS_WITH_AS(smooth_ground_truth({1.0}, 0.0),
                         doctest::Contains("BadAlpha"), Error);
    CHECK_THROWS_WITH_AS(smooth_ground_truth({1.0}, 1.5),
                         doctest::Contains("BadAlpha"), Error);
  }
}
