#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mobkit {

// Ridge-penalized logistic regression with per-training-participant intercept
// offsets standing in for a random participant effect. Feature weights and
// offsets share the penalty; the global intercept is unpenalized. Features
// are standardized internally from the training rows.
struct LogisticModel {
  size_t n_features = 0;
  std::vector<double> weights;      // on standardized features
  double intercept = 0.0;
  std::vector<double> participant_offsets;  // by training participant index
  std::vector<double> feat_mean;
  std::vector<double> feat_scale;
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective_trace;  // penalized deviance per iteration

  // Probability for an unseen participant (offset 0), raw feature row.
  double predict(std::span<const double> x) const;
};

struct LogisticOptions {
  double lambda = 1.0;
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
};

// x: n x f row-major raw features; y in {0,1}; participant_index in
// [0, n_participants) per row. Throws no_class_variation when y is constant.
LogisticModel fit_logistic(std::span<const double> x, size_t n, size_t f,
                           std::span<const uint8_t> y,
                           std::span<const int> participant_index,
                           size_t n_participants, const LogisticOptions& opts = {});

}  // namespace mobkit
