#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mobkit {

struct ForestParams {
  int n_trees = 200;
  int mtry = 0;      // features tried per split; 0 = floor(sqrt(n_features))
  int min_leaf = 1;  // minimum samples per leaf
};

// Bagged CART classifier: bootstrap rows per tree, Gini splits over mtry
// random features, grown until pure or unsplittable. Per-tree RNG streams
// derive from the seed alone, so results are independent of thread order.
class RandomForest {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = 0;
    int right = 0;
    double leaf_value = 0.0;  // positive-class fraction at the leaf
  };

  // Fraction of trees voting positive (split leaves count half).
  double predict(std::span<const double> x) const;

  size_t n_features() const { return n_features_; }

  friend RandomForest fit_forest(std::span<const double> x, size_t n, size_t f,
                                 std::span<const uint8_t> y,
                                 const ForestParams& params, uint64_t seed);

 private:
  std::vector<std::vector<Node>> trees_;
  size_t n_features_ = 0;
};

// Throws no_class_variation when y is constant.
RandomForest fit_forest(std::span<const double> x, size_t n, size_t f,
                        std::span<const uint8_t> y, const ForestParams& params,
                        uint64_t seed);

}  // namespace mobkit
