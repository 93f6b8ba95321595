#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mobkit {

double mean(std::span<const double> xs);
double variance_sample(std::span<const double> xs);      // n-1 denominator
double variance_population(std::span<const double> xs);  // n denominator

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);

// Two-sided p for a t statistic on real (Welch-Satterthwaite) df.
double student_t_two_sided_p(double t, double df);

struct WelchResult {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double t_statistic = 0.0;
  double degrees_freedom = 0.0;
  double p_value = 1.0;
  size_t n_a = 0;
  size_t n_b = 0;
  // Both samples constant: p is 1 (equal means) or the 0 limit (different
  // means) by convention rather than from the t distribution.
  bool degenerate = false;
};

// Welch two-sample t test, no equal-variance assumption. Requires n >= 2 per
// sample; throws degenerate_variance if a sample is empty or too small.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

// ROC AUC by the pairwise Mann-Whitney formulation, ties scored 0.5.
// nullopt when either class is absent.
std::optional<double> auc_pairwise(std::span<const double> scores,
                                   std::span<const uint8_t> labels);

// Kolmogorov-Smirnov distance between the empirical distribution of `values`
// and U(0,1). Used for p-value calibration checks.
double ks_uniform_distance(std::vector<double> values);

// splitmix64; the documented seed-splitting rule for every stream that needs
// an independent substream (participants, trees, folds).
uint64_t splitmix64(uint64_t x);
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return splitmix64(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// Solves A x = b for small dense SPD A (row-major, n x n) in place via
// Cholesky. Returns false if A is not positive definite.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, size_t n);

}  // namespace mobkit
