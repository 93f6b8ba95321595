#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mobkit/error.hpp"
#include "mobkit/logistic.hpp"
#include "mobkit/stats.hpp"

using namespace mobkit;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

TEST_CASE("all-zero features reduce to the intercept at class prevalence") {
  // 4 participants, identical label counts, so offsets vanish by symmetry
  const size_t n = 40;
  std::vector<double> x(n * 2, 0.0);
  std::vector<uint8_t> y(n);
  std::vector<int> pidx(n);
  for (size_t i = 0; i < n; ++i) {
    pidx[i] = int(i / 10);
    y[i] = (i % 10) < 3 ? 1 : 0;  // prevalence 0.3 per participant
  }
  const LogisticModel m = fit_logistic(x, n, 2, y, pidx, 4);
  CHECK(m.converged);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(m.predict(zero) == doctest::Approx(0.3).epsilon(1e-6));
  for (double w : m.weights) CHECK(std::fabs(w) < 1e-6);
}

TEST_CASE("separable 1-D data keeps finite weights under ridge") {
  const size_t n = 60;
  std::vector<double> x(n);
  std::vector<uint8_t> y(n);
  std::vector<int> pidx(n, 0);
  for (size_t i = 0; i < n; ++i) {
    x[i] = i < n / 2 ? -1.0 - double(i % 5) * 0.1 : 1.0 + double(i % 5) * 0.1;
    y[i] = i < n / 2 ? 0 : 1;
  }
  const LogisticModel m = fit_logistic(x, n, 1, y, pidx, 1);
  CHECK(std::isfinite(m.weights[0]));
  CHECK(std::fabs(m.weights[0]) < 50.0);
  // train AUC is 1: every positive scores above every negative
  double min_pos = 1.0, max_neg = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double p = m.predict(std::span<const double>(&x[i], 1));
    if (y[i]) min_pos = std::min(min_pos, p);
    else max_neg = std::max(max_neg, p);
  }
  CHECK(min_pos > max_neg);
}

TEST_CASE("recovers generating coefficients on standardized data") {
  const size_t n = 5000, f = 7;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> beta{0.8, -0.5, 0.0, 0.3, -0.9, 0.15, 0.0};
  const double b0 = -0.4;
  std::vector<double> x(n * f);
  std::vector<uint8_t> y(n);
  std::vector<int> pidx(n);
  for (size_t i = 0; i < n; ++i) {
    double eta = b0;
    for (size_t j = 0; j < f; ++j) {
      x[i * f + j] = g(rng);
      eta += beta[j] * x[i * f + j];
    }
    y[i] = u(rng) < sigmoid(eta) ? 1 : 0;
    pidx[i] = int(i % 50);
  }
  const LogisticModel m = fit_logistic(x, n, f, y, pidx, 50);
  for (size_t j = 0; j < f; ++j) CHECK(std::fabs(m.weights[j] - beta[j]) < 0.1);
  CHECK(std::fabs(m.intercept - b0) < 0.1);
}

TEST_CASE("objective trace is non-increasing") {
  const size_t n = 300, f = 3;
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g(0.0, 2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n * f);
  std::vector<uint8_t> y(n);
  std::vector<int> pidx(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < f; ++j) x[i * f + j] = g(rng);
    y[i] = u(rng) < sigmoid(x[i * f] - 0.5 * x[i * f + 1]) ? 1 : 0;
    pidx[i] = int(i % 7);
  }
  const LogisticModel m = fit_logistic(x, n, f, y, pidx, 7);
  REQUIRE(m.objective_trace.size() >= 2);
  for (size_t i = 1; i < m.objective_trace.size(); ++i)
    CHECK(m.objective_trace[i] <= m.objective_trace[i - 1] + 1e-12);
}

TEST_CASE("constant labels raise no_class_variation") {
  std::vector<double> x(10, 0.0);
  std::vector<uint8_t> y(10, 1);
  std::vector<int> pidx(10, 0);
  CHECK_THROWS_AS(fit_logistic(x, 10, 1, y, pidx, 1), Error);
}

TEST_CASE("participant offsets absorb group-level shifts") {
  // one participant is much sadder at identical features
  const size_t n = 200;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n, 0.0);
  std::vector<uint8_t> y(n);
  std::vector<int> pidx(n);
  for (size_t i = 0; i < n; ++i) {
    pidx[i] = i < n / 2 ? 0 : 1;
    const double p = i < n / 2 ? 0.8 : 0.2;
    y[i] = u(rng) < p ? 1 : 0;
  }
  const LogisticModel m = fit_logistic(x, n, 1, y, pidx, 2);
  CHECK(m.participant_offsets[0] > m.participant_offsets[1]);
}
