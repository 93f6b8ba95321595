#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mobkit/pca.hpp"
#include "mobkit/stats.hpp"

using namespace mobkit;

namespace {

std::vector<double> random_matrix(size_t n, size_t p, uint64_t seed,
                                  double scale = 100.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> m(n * p);
  // a few latent factors so the spectrum is interesting
  std::vector<double> f1(p), f2(p);
  for (size_t j = 0; j < p; ++j) {
    f1[j] = g(rng);
    f2[j] = g(rng);
  }
  for (size_t i = 0; i < n; ++i) {
    const double a = g(rng) * 3.0, b = g(rng);
    for (size_t j = 0; j < p; ++j)
      m[i * p + j] = scale * (a * f1[j] + b * f2[j] + 0.3 * g(rng));
  }
  return m;
}

}  // namespace

TEST_CASE("jacobi recovers a known diagonalization") {
  // A = Q diag(9, 4, 1) Q^T for a fixed rotation Q
  const double c = std::cos(0.6), s = std::sin(0.6);
  // rotation in the (0,1) plane
  std::vector<double> q = {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
  std::vector<double> d = {9.0, 4.0, 1.0};
  std::vector<double> a(9, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) a[size_t(i * 3 + j)] += q[size_t(i * 3 + k)] * d[size_t(k)] * q[size_t(j * 3 + k)];
  const SymmetricEigen e = jacobi_eigen(a, 3);
  CHECK(e.values[0] == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(e.values[2] == doctest::Approx(1.0).epsilon(1e-12));
  // eigenvector of the top value is the first column of Q, up to sign
  const double dot = std::fabs(e.vectors[0 * 3 + 0] * q[0] + e.vectors[1 * 3 + 0] * q[3] +
                               e.vectors[2 * 3 + 0] * q[6]);
  CHECK(dot == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("collinear two-factor data concentrates variance in PC1") {
  // x_j = j-th feature of a rank-1 pattern embedded in the 47-space
  const size_t n = 200, p = 47;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> dir(p);
  for (double& v : dir) v = g(rng);
  std::vector<double> m(n * p);
  for (size_t i = 0; i < n; ++i) {
    const double a = g(rng);
    for (size_t j = 0; j < p; ++j) m[i * p + j] = a * dir[j];
  }
  const PcaModel model = pca_fit(m, n, p, 5);
  CHECK(model.explained_ratio[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(model.explained_ratio[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("explained ratios over all components sum to 1") {
  const auto m = random_matrix(300, 47, 9);
  const PcaModel model = pca_fit(m, 300, 47, 47);
  double sum = 0.0;
  for (double r : model.explained_ratio) sum += r;
  CHECK(std::fabs(sum - 1.0) < 1e-9);
  // ratios are non-increasing
  for (size_t j = 1; j < model.explained_ratio.size(); ++j)
    CHECK(model.explained_ratio[j] <= model.explained_ratio[j - 1] + 1e-12);
}

TEST_CASE("loadings are orthonormal with the sign convention") {
  const auto m = random_matrix(400, 47, 13);
  const PcaModel model = pca_fit(m, 400, 47, 47);
  for (int a = 0; a < model.k; ++a) {
    double norm = 0.0;
    double max_mag = 0.0, max_val = 0.0;
    for (size_t i = 0; i < model.n_features; ++i) {
      const double v = model.loading(i, a);
      norm += v * v;
      if (std::fabs(v) > max_mag) {
        max_mag = std::fabs(v);
        max_val = v;
      }
    }
    CHECK(std::fabs(norm - 1.0) < 1e-9);
    CHECK(max_val > 0.0);  // largest-magnitude entry is positive
    for (int b = a + 1; b < model.k; ++b) {
      double dot = 0.0;
      for (size_t i = 0; i < model.n_features; ++i)
        dot += model.loading(i, a) * model.loading(i, b);
      CHECK(std::fabs(dot) < 1e-8);
    }
  }
}

TEST_CASE("K=47 reconstruction reproduces the data") {
  const size_t n = 150, p = 47;
  const auto m = random_matrix(n, p, 21);
  const PcaModel model = pca_fit(m, n, p, 47);
  double worst = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < p; ++j) {
      double rec = model.mean[j];
      for (int k = 0; k < model.k; ++k)
        rec += model.score(i, k) * model.loading(j, k);
      worst = std::max(worst, std::fabs(rec - m[i * p + j]));
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("scores have zero mean and eigenvalue variances") {
  const size_t n = 500;
  const auto m = random_matrix(n, 47, 33);
  const PcaModel model = pca_fit(m, n, 47, 10);
  for (int k = 0; k < model.k; ++k) {
    std::vector<double> col(n);
    for (size_t i = 0; i < n; ++i) col[i] = model.score(i, k);
    CHECK(std::fabs(mean(col)) < 1e-9 * std::sqrt(model.eigenvalues[size_t(k)] + 1.0));
    const double var = variance_sample(col);
    CHECK(std::fabs(var - model.eigenvalues[size_t(k)]) <=
          1e-6 * std::max(1.0, model.eigenvalues[size_t(k)]));
  }
}

TEST_CASE("pca_fit is bit-deterministic across repeated runs") {
  const auto m = random_matrix(250, 47, 55);
  const PcaModel first = pca_fit(m, 250, 47, 10);
  for (int rep = 0; rep < 3; ++rep) {
    const PcaModel again = pca_fit(m, 250, 47, 10);
    CHECK(again.loadings == first.loadings);
    CHECK(again.scores == first.scores);
    CHECK(again.eigenvalues == first.eigenvalues);
  }
}

TEST_CASE("rank-deficient input keeps trailing zero eigenvalues") {
  // two distinct rows repeated: rank 1 after centering
  const size_t p = 47;
  std::vector<double> m(4 * p);
  for (size_t j = 0; j < p; ++j) {
    m[0 * p + j] = double(j);
    m[1 * p + j] = -double(j);
    m[2 * p + j] = double(j);
    m[3 * p + j] = -double(j);
  }
  const PcaModel model = pca_fit(m, 4, p, 3);
  CHECK(model.eigenvalues[0] > 0.0);
  CHECK(model.eigenvalues[1] == doctest::Approx(0.0).scale(model.eigenvalues[0]));
  CHECK(model.explained_ratio[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("loadings csv is oriented components x bins") {
  const auto m = random_matrix(100, 47, 77);
  const PcaModel model = pca_fit(m, 100, 47, 3);
  const std::string csv = pca_loadings_csv(model);
  CHECK(csv.find("component,H00b,H01a") == 0);
  CHECK(csv.find("\nPC1,") != std::string::npos);
  CHECK(csv.find("\nPC3,") != std::string::npos);
  CHECK(csv.find("H23b\n") != std::string::npos);
}
