#include "pcgseg/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "pcgseg/hsmm.hpp"

namespace pcgseg {

namespace {

constexpr int kMinSplitSamples = 4;
constexpr int kCandidateFeatures = 3;  // ~sqrt(9)

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

double gini(std::size_t pos, std::size_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(n);
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
public:
  TreeBuilder(const FeatureMatrix& features, const FrameLabels& labels,
              std::mt19937_64& rng)
      : features_(features), labels_(labels), rng_(rng) {}

  DecisionTree build() {
    const std::size_t n = features_.num_frames();
    std::vector<std::uint32_t> sample(n);
    std::uniform_int_distribution<std::uint32_t> pick(
        0, static_cast<std::uint32_t>(n - 1));
    for (std::size_t i = 0; i < n; ++i) sample[i] = pick(rng_);

    DecisionTree tree;
    grow(tree, sample, 0);
    return tree;
  }

private:
  std::int32_t grow(DecisionTree& tree, std::vector<std::uint32_t>& idx,
                    int depth) {
    const std::size_t n = idx.size();
    std::size_t pos = 0;
    for (std::uint32_t i : idx) pos += labels_.sound[i] ? 1 : 0;

    const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();

    const bool pure = (pos == 0 || pos == n);
    if (depth >= ForestModel::kMaxDepth || pure || n < kMinSplitSamples) {
      tree.nodes[node_id].leaf_value =
          static_cast<double>(pos) / static_cast<double>(n);
      return node_id;
    }

    Split best = find_split(idx, pos);
    if (best.feature < 0) {
      tree.nodes[node_id].leaf_value =
          static_cast<double>(pos) / static_cast<double>(n);
      return node_id;
    }

    std::vector<std::uint32_t> left_idx, right_idx;
    left_idx.reserve(n);
    right_idx.reserve(n);
    for (std::uint32_t i : idx) {
      if (features_.frames[i][best.feature] <= best.threshold) {
        left_idx.push_back(i);
      } else {
        right_idx.push_back(i);
      }
    }
    idx.clear();
    idx.shrink_to_fit();

    tree.nodes[node_id].feature = static_cast<std::int16_t>(best.feature);
    tree.nodes[node_id].threshold = best.threshold;
    const std::int32_t left = grow(tree, left_idx, depth + 1);
    tree.nodes[node_id].left = left;
    const std::int32_t right = grow(tree, right_idx, depth + 1);
    tree.nodes[node_id].right = right;
    return node_id;
  }

  Split find_split(const std::vector<std::uint32_t>& idx, std::size_t pos) {
    std::array<int, kNumFeatures> feats;
    std::iota(feats.begin(), feats.end(), 0);
    // Partial Fisher-Yates for the candidate subset.
    for (int i = 0; i < kCandidateFeatures; ++i) {
      std::uniform_int_distribution<int> pick(i, kNumFeatures - 1);
      std::swap(feats[i], feats[pick(rng_)]);
    }

    const std::size_t n = idx.size();
    const double parent = gini(pos, n);
    Split best;

    std::vector<std::pair<double, bool>> vals(n);
    for (int c = 0; c < kCandidateFeatures; ++c) {
      const int f = feats[c];
      for (std::size_t i = 0; i < n; ++i) {
        vals[i] = {features_.frames[idx[i]][f], labels_.sound[idx[i]]};
      }
      std::sort(vals.begin(), vals.end());

      std::size_t left_n = 0, left_pos = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_n += 1;
        left_pos += vals[i].second ? 1 : 0;
        if (vals[i].first == vals[i + 1].first) continue;
        const std::size_t right_n = n - left_n;
        const std::size_t right_pos = pos - left_pos;
        const double weighted =
            (left_n * gini(left_pos, left_n) +
             right_n * gini(right_pos, right_n)) /
            static_cast<double>(n);
        const double decrease = parent - weighted;
        if (decrease > best.impurity_decrease) {
          best.impurity_decrease = decrease;
          best.feature = f;
          best.threshold = 0.5 * (vals[i].first + vals[i + 1].first);
        }
      }
    }
    return best;
  }

  const FeatureMatrix& features_;
  const FrameLabels& labels_;
  std::mt19937_64& rng_;
};

void validate_model(const ForestModel& model) {
  if (static_cast<int>(model.trees.size()) != ForestModel::kNumTrees) {
    raise(ErrorCode::FormatError,
          "expected " + std::to_string(ForestModel::kNumTrees) + " trees");
  }
  for (const DecisionTree& tree : model.trees) {
    if (tree.nodes.empty()) raise(ErrorCode::FormatError, "empty tree");
    const std::int32_t n = static_cast<std::int32_t>(tree.nodes.size());
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) {
        if (!(node.leaf_value >= 0.0 && node.leaf_value <= 1.0)) {
          raise(ErrorCode::FormatError, "leaf value outside [0, 1]");
        }
      } else {
        if (node.feature >= kNumFeatures || !std::isfinite(node.threshold) ||
            node.left < 0 || node.left >= n || node.right < 0 ||
            node.right >= n) {
          raise(ErrorCode::FormatError, "malformed internal node");
        }
      }
    }
    if (tree.depth() > ForestModel::kMaxDepth) {
      raise(ErrorCode::FormatError, "tree exceeds maximum depth");
    }
  }
}

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t& at) {
  if (at + sizeof(T) > in.size()) {
    raise(ErrorCode::FormatError, "truncated forest data");
  }
  T value;
  std::memcpy(&value, in.data() + at, sizeof(T));
  at += sizeof(T);
  return value;
}

constexpr std::uint8_t kMagic[4] = {'P', 'C', 'G', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

double DecisionTree::predict(const std::array<double, kNumFeatures>& x) const {
  const TreeNode* node = &nodes[0];
  while (!node->is_leaf()) {
    node = &nodes[x[node->feature] <= node->threshold ? node->left
                                                      : node->right];
  }
  return node->leaf_value;
}

int DecisionTree::depth() const {
  // Iterative DFS; node indices always point forward, so no cycle check.
  int max_depth = 0;
  std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes[id];
    if (node.is_leaf()) {
      max_depth = std::max(max_depth, d);
    } else {
      stack.push_back({node.left, d + 1});
      stack.push_back({node.right, d + 1});
    }
  }
  return max_depth;
}

ForestModel train_forest(const FeatureMatrix& features,
                         const FrameLabels& labels, std::uint64_t rng_seed) {
  const std::size_t n = features.num_frames();
  if (n != labels.sound.size()) {
    raise(ErrorCode::BadConfig, "features and labels differ in length");
  }
  if (n < 100) {
    raise(ErrorCode::TooFewFrames,
          "need at least 100 frames, got " + std::to_string(n));
  }
  std::size_t pos = 0;
  for (bool b : labels.sound) pos += b ? 1 : 0;
  if (pos == 0 || pos == n) {
    raise(ErrorCode::SingleClass, "both classes must be present");
  }

  std::mt19937_64 rng(rng_seed);
  ForestModel model;
  model.trees.reserve(ForestModel::kNumTrees);
  for (int t = 0; t < ForestModel::kNumTrees; ++t) {
    TreeBuilder builder(features, labels, rng);
    model.trees.push_back(builder.build());
  }
  return model;
}

EmissionSeries predict_emissions(const ForestModel& model,
                                 const FeatureMatrix& features) {
  validate_model(model);
  EmissionSeries out;
  out.frame_rate_hz = features.frame_rate_hz;
  out.probs.reserve(features.num_frames());
  for (const auto& frame : features.frames) {
    double sum = 0.0;
    for (const DecisionTree& tree : model.trees) sum += tree.predict(frame);
    const double p = sum / static_cast<double>(model.trees.size());
    out.probs.push_back(std::clamp(p, kEmissionClamp, 1.0 - kEmissionClamp));
  }
  return out;
}

FrameLabels derive_frame_labels(const std::vector<double>& rpeak_times_s,
                                std::size_t num_frames, int frame_rate_hz) {
  for (std::size_t i = 1; i < rpeak_times_s.size(); ++i) {
    if (rpeak_times_s[i] < rpeak_times_s[i - 1]) {
      raise(ErrorCode::UnsortedPeaks, "R-peak times must be sorted");
    }
  }
  FrameLabels out;
  out.sound.assign(num_frames, false);

  const double s1 = kDefaultS1MeanS;
  const double s2_start = kDefaultS1MeanS + kDefaultSystoleMeanS;
  const double s2_end = s2_start + kDefaultS2MeanS;
  for (double r : rpeak_times_s) {
    auto mark = [&](double begin_s, double end_s) {
      const long first =
          static_cast<long>(std::ceil(begin_s * frame_rate_hz - 1e-9));
      for (long i = std::max(first, 0L);
           i < static_cast<long>(num_frames) &&
           static_cast<double>(i) / frame_rate_hz < end_s;
           ++i) {
        out.sound[i] = true;
      }
    };
    mark(r, r + s1);
    mark(r + s2_start, r + s2_end);
  }
  return out;
}

std::vector<std::uint8_t> serialize_forest(const ForestModel& model) {
  validate_model(model);
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.trees.size()));
  for (const DecisionTree& tree : model.trees) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const TreeNode& node : tree.nodes) {
      put<std::int16_t>(out, node.feature);
      put<double>(out, node.threshold);
      put<std::int32_t>(out, node.left);
      put<std::int32_t>(out, node.right);
      put<double>(out, node.leaf_value);
    }
  }
  return out;
}

ForestModel deserialize_forest(const std::vector<std::uint8_t>& bytes) {
  std::size_t at = 0;
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    raise(ErrorCode::FormatError, "bad magic header");
  }
  at = 4;
  const auto version = get<std::uint32_t>(bytes, at);
  if (version != kFormatVersion) {
    raise(ErrorCode::FormatError,
          "unsupported format version " + std::to_string(version));
  }
  const auto n_trees = get<std::uint32_t>(bytes, at);
  if (n_trees != ForestModel::kNumTrees) {
    raise(ErrorCode::FormatError, "unexpected tree count");
  }
  ForestModel model;
  model.trees.resize(n_trees);
  for (DecisionTree& tree : model.trees) {
    const auto n_nodes = get<std::uint32_t>(bytes, at);
    if (n_nodes == 0 || n_nodes > (1u << 20)) {
      raise(ErrorCode::FormatError, "implausible node count");
    }
    tree.nodes.resize(n_nodes);
    for (TreeNode& node : tree.nodes) {
      node.feature = get<std::int16_t>(bytes, at);
      node.threshold = get<double>(bytes, at);
      node.left = get<std::int32_t>(bytes, at);
      node.right = get<std::int32_t>(bytes, at);
      node.leaf_value = get<double>(bytes, at);
    }
  }
  if (at != bytes.size()) {
    raise(ErrorCode::FormatError, "trailing bytes after forest data");
  }
  validate_model(model);
  return model;
}

void save_forest(const ForestModel& model, const std::string& path) {
  const std::vector<std::uint8_t> bytes = serialize_forest(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::NotFound, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

ForestModel load_forest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::NotFound, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_forest(bytes);
}

}  // namespace pcgseg
