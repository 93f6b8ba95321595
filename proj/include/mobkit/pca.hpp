#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mobkit/ddp.hpp"

namespace mobkit {

// Covariance PCA of pooled displacement profiles. Loading columns are
// orthonormal with a fixed sign convention (largest-magnitude entry
// positive), so identical input always produces identical output.
struct PcaModel {
  size_t n_features = 0;
  size_t n_rows = 0;
  int k = 0;
  std::vector<double> mean;             // n_features
  std::vector<double> loadings;         // n_features x k, row-major
  std::vector<double> eigenvalues;      // all n_features, descending
  std::vector<double> explained_ratio;  // first k, of the full-trace total
  std::vector<double> scores;           // n_rows x k, row-major

  double loading(size_t feature, int comp) const {
    return loadings[feature * size_t(k) + size_t(comp)];
  }
  double score(size_t row, int comp) const {
    return scores[row * size_t(k) + size_t(comp)];
  }
  double cumulative_ratio(int n_components) const;
};

// Eigendecomposition of a symmetric matrix (row-major n x n) by cyclic
// Jacobi rotations, run on the unit-normalized matrix until the
// off-diagonal norm falls below 1e-10. Returns eigenvalues (descending)
// and column eigenvectors (row-major n x n, column j = vector j).
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<double> a, size_t n);

// data: n_rows x n_features row-major; columns are mean-centered internally,
// covariance uses the n-1 denominator. k components retained (clamped to
// n_features). Throws insufficient_days when n_rows < 2.
PcaModel pca_fit(const std::vector<double>& data, size_t n_rows, size_t n_features,
                 int k);

// Loadings table oriented rows = components, columns = arrival-bin labels.
std::string pca_loadings_csv(const PcaModel& model);
// `component,eigenvalue,explained_ratio,cumulative_ratio` per component.
std::string pca_summary_csv(const PcaModel& model);
// Scores aligned with the profile rows the model was fitted on.
std::string pca_scores_csv(const PcaModel& model,
                           const std::vector<DisplacementProfile>& profiles);

}  // namespace mobkit
