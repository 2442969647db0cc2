#pragma once

#include <cstdint>
#include <iosfwd>

#include "pcgseg/types.hpp"

namespace pcgseg {

// Binary decision-tree node. feature < 0 marks a leaf; a leaf stores the
// fraction of positive (sound) training samples that reached it.
struct TreeNode {
  std::int16_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double leaf_value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  double predict(const std::array<double, kNumFeatures>& x) const;
  int depth() const;
};

struct ForestModel {
  static constexpr int kNumTrees = 10;
  static constexpr int kMaxDepth = 8;

  std::vector<DecisionTree> trees;
};

// CART with Gini impurity: bootstrap sample per tree, 3 random candidate
// features per split, thresholds at midpoints of sorted unique values,
// stop at depth 8, a pure node, or fewer than 4 samples.
ForestModel train_forest(const FeatureMatrix& features,
                         const FrameLabels& labels, std::uint64_t rng_seed);

// Soft vote: mean of the 10 reached leaf fractions, clamped to
// [1e-3, 1 - 1e-3].
EmissionSeries predict_emissions(const ForestModel& model,
                                 const FeatureMatrix& features);

// Binary frame labels from ECG R-peak times: each peak marks an S1 span
// of the default S1 duration, followed (after the default systole gap) by
// an S2 span of the default S2 duration.
FrameLabels derive_frame_labels(const std::vector<double>& rpeak_times_s,
                                std::size_t num_frames, int frame_rate_hz);

std::vector<std::uint8_t> serialize_forest(const ForestModel& model);
ForestModel deserialize_forest(const std::vector<std::uint8_t>& bytes);

void save_forest(const ForestModel& model, const std::string& path);
ForestModel load_forest(const std::string& path);

}  // namespace pcgseg
