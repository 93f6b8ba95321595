#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mobkit/error.hpp"
#include "mobkit/forest.hpp"
#include "mobkit/logistic.hpp"
#include "mobkit/stats.hpp"

using namespace mobkit;

TEST_CASE("threshold-separable single feature trains to AUC 1") {
  const size_t n = 200;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  std::vector<uint8_t> y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = u(rng);
    y[i] = x[i] > 0.5 ? 1 : 0;
  }
  const RandomForest m = fit_forest(x, n, 1, y, {50, 1, 1}, 7);
  std::vector<double> scores(n);
  for (size_t i = 0; i < n; ++i)
    scores[i] = m.predict(std::span<const double>(&x[i], 1));
  CHECK(*auc_pairwise(scores, y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical seed and data give bit-identical predictions") {
  const size_t n = 300, f = 4;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n * f);
  std::vector<uint8_t> y(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < f; ++j) x[i * f + j] = g(rng);
    y[i] = u(rng) < 0.5 ? 1 : 0;
  }
  const RandomForest a = fit_forest(x, n, f, y, {}, 42);
  const RandomForest b = fit_forest(x, n, f, y, {}, 42);
  const RandomForest c = fit_forest(x, n, f, y, {}, 43);
  bool any_diff_seed = false;
  for (size_t i = 0; i < n; ++i) {
    const std::span<const double> row(&x[i * f], f);
    CHECK(a.predict(row) == b.predict(row));
    if (a.predict(row) != c.predict(row)) any_diff_seed = true;
  }
  CHECK(any_diff_seed);  // different seed actually changes the ensemble
}

TEST_CASE("XOR structure: forest succeeds where logistic is blind") {
  const size_t n_train = 400, n_test = 400, f = 2;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto make = [&](size_t n, std::vector<double>& x, std::vector<uint8_t>& y) {
    x.resize(n * f);
    y.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const double a = u(rng), b = u(rng);
      x[i * f] = a;
      x[i * f + 1] = b;
      y[i] = (a > 0.5) != (b > 0.5) ? 1 : 0;
    }
  };
  std::vector<double> xtr, xte;
  std::vector<uint8_t> ytr, yte;
  make(n_train, xtr, ytr);
  make(n_test, xte, yte);

  const RandomForest forest = fit_forest(xtr, n_train, f, ytr, {200, 2, 1}, 9);
  std::vector<double> fscores(n_test);
  for (size_t i = 0; i < n_test; ++i)
    fscores[i] = forest.predict(std::span<const double>(&xte[i * f], f));
  CHECK(*auc_pairwise(fscores, yte) > 0.9);

  std::vector<int> pidx(n_train, 0);
  const LogisticModel logit = fit_logistic(xtr, n_train, f, ytr, pidx, 1);
  std::vector<double> lscores(n_test);
  for (size_t i = 0; i < n_test; ++i)
    lscores[i] = logit.predict(std::span<const double>(&xte[i * f], f));
  CHECK(std::fabs(*auc_pairwise(lscores, yte) - 0.5) < 0.1);
}

TEST_CASE("constant labels raise no_class_variation") {
  std::vector<double> x(20, 1.0);
  std::vector<uint8_t> y(20, 0);
  CHECK_THROWS_AS(fit_forest(x, 20, 1, y, {}, 1), Error);
}

TEST_CASE("mtry defaults to floor(sqrt(f))") {
  // indirect check: a forest on 7 features fits and predicts within [0,1]
  const size_t n = 100, f = 7;
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n * f);
  std::vector<uint8_t> y(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < f; ++j) x[i * f + j] = g(rng);
    y[i] = u(rng) < 0.4 ? 1 : 0;
  }
  const RandomForest m = fit_forest(x, n, f, y, {}, 3);
  for (size_t i = 0; i < 10; ++i) {
    const double p = m.predict(std::span<const double>(&x[i * f], f));
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}
