#include "mobkit/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mobkit/error.hpp"
#include "mobkit/stats.hpp"

namespace mobkit {

namespace {

struct TreeBuilder {
  std::span<const double> x;
  size_t f;
  std::span<const uint8_t> y;
  int mtry;
  int min_leaf;
  std::mt19937_64 rng;
  std::vector<RandomForest::Node> nodes;
  std::vector<int> feature_pool;

  // indices: the node's sample rows (bootstrap indices), reordered in place.
  int build(std::vector<size_t>& indices, size_t lo, size_t hi) {
    const size_t n = hi - lo;
    size_t n_pos = 0;
    for (size_t i = lo; i < hi; ++i) n_pos += y[indices[i]];

    const int node_id = int(nodes.size());
    nodes.emplace_back();

    if (n_pos == 0 || n_pos == n || n < size_t(2 * min_leaf)) {
      nodes[size_t(node_id)].leaf_value = double(n_pos) / double(n);
      return node_id;
    }

    // sample mtry distinct features
    for (int i = int(f) - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(feature_pool[size_t(i)], feature_pool[size_t(pick(rng))]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = -1.0;  // Gini impurity decrease numerator
    const double parent_gini =
        1.0 - (double(n_pos) / n) * (double(n_pos) / n) -
        (double(n - n_pos) / n) * (double(n - n_pos) / n);

    std::vector<std::pair<double, uint8_t>> vals;
    vals.reserve(n);
    for (int t = 0; t < mtry; ++t) {
      const int feat = feature_pool[size_t(int(f) - 1 - t)];
      vals.clear();
      for (size_t i = lo; i < hi; ++i)
        vals.emplace_back(x[indices[i] * f + size_t(feat)], y[indices[i]]);
      std::sort(vals.begin(), vals.end());
      size_t left_pos = 0;
      for (size_t i = 0; i + 1 < n; ++i) {
        left_pos += vals[i].second;
        if (vals[i].first == vals[i + 1].first) continue;
        const size_t nl = i + 1, nr = n - nl;
        if (nl < size_t(min_leaf) || nr < size_t(min_leaf)) continue;
        const double pl = double(left_pos) / double(nl);
        const double pr = double(n_pos - left_pos) / double(nr);
        const double gini_l = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl);
        const double gini_r = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr);
        const double weighted =
            (double(nl) * gini_l + double(nr) * gini_r) / double(n);
        const double gain = parent_gini - weighted;
        if (gain > best_score + 1e-15) {
          best_score = gain;
          best_feature = feat;
          best_threshold = (vals[i].first + vals[i + 1].first) / 2.0;
        }
      }
    }

    if (best_feature < 0 || best_score <= 1e-15) {
      nodes[size_t(node_id)].leaf_value = double(n_pos) / double(n);
      return node_id;
    }

    auto mid_it = std::partition(
        indices.begin() + long(lo), indices.begin() + long(hi), [&](size_t row) {
          return x[row * f + size_t(best_feature)] <= best_threshold;
        });
    const size_t mid = size_t(mid_it - indices.begin());
    if (mid == lo || mid == hi) {  // numerically stuck; close the leaf
      nodes[size_t(node_id)].leaf_value = double(n_pos) / double(n);
      return node_id;
    }

    nodes[size_t(node_id)].feature = best_feature;
    nodes[size_t(node_id)].threshold = best_threshold;
    const int l = build(indices, lo, mid);
    const int r = build(indices, mid, hi);
    nodes[size_t(node_id)].left = l;
    nodes[size_t(node_id)].right = r;
    return node_id;
  }
};

}  // namespace

RandomForest fit_forest(std::span<const double> x, size_t n, size_t f,
                        std::span<const uint8_t> y, const ForestParams& params,
                        uint64_t seed) {
  size_t n_pos = 0;
  for (uint8_t v : y) n_pos += v;
  if (n_pos == 0 || n_pos == n)
    throw Error(errc::no_class_variation, "training labels are constant");

  int mtry = params.mtry > 0 ? params.mtry : int(std::sqrt(double(f)));
  mtry = std::clamp(mtry, 1, int(f));

  RandomForest forest;
  forest.n_features_ = f;
  forest.trees_.resize(size_t(params.n_trees));

  for (int t = 0; t < params.n_trees; ++t) {
    TreeBuilder b{x, f, y, mtry, std::max(params.min_leaf, 1),
                  std::mt19937_64(derive_seed(seed, uint64_t(t))),
                  {}, {}};
    b.feature_pool.resize(f);
    std::iota(b.feature_pool.begin(), b.feature_pool.end(), 0);

    std::vector<size_t> indices(n);
    std::uniform_int_distribution<size_t> row(0, n - 1);
    for (size_t i = 0; i < n; ++i) indices[i] = row(b.rng);

    size_t boot_pos = 0;
    for (size_t i : indices) boot_pos += y[i];
    if (boot_pos == 0 || boot_pos == n) {
      // degenerate bootstrap; a single leaf carrying the resampled rate
      b.nodes.emplace_back();
      b.nodes[0].leaf_value = double(boot_pos) / double(n);
    } else {
      b.build(indices, 0, n);
    }
    forest.trees_[size_t(t)] = std::move(b.nodes);
  }
  return forest;
}

double RandomForest::predict(std::span<const double> x) const {
  double votes = 0.0;
  for (const auto& tree : trees_) {
    int i = 0;
    while (tree[size_t(i)].feature >= 0) {
      const auto& nd = tree[size_t(i)];
      i = x[size_t(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    const double lv = tree[size_t(i)].leaf_value;
    votes += lv > 0.5 ? 1.0 : (lv < 0.5 ? 0.0 : 0.5);
  }
  return votes / double(trees_.size());
}

}  // namespace mobkit
