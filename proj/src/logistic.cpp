#include "mobkit/logistic.hpp"

#include <cmath>

#include "mobkit/error.hpp"
#include "mobkit/stats.hpp"

namespace mobkit {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Penalized negative log-likelihood; log terms computed stably from the
// linear predictor.
double objective(std::span<const double> eta, std::span<const uint8_t> y,
                 std::span<const double> theta, size_t f, size_t n_p,
                 double lambda) {
  double nll = 0.0;
  for (size_t i = 0; i < eta.size(); ++i) {
    const double z = eta[i];
    // log(1 + exp(z)) without overflow
    const double softplus = z > 30.0 ? z : std::log1p(std::exp(z));
    nll += softplus - (y[i] ? z : 0.0);
  }
  double pen = 0.0;
  for (size_t j = 0; j < f; ++j) pen += theta[j] * theta[j];
  for (size_t j = 0; j < n_p; ++j) pen += theta[f + 1 + j] * theta[f + 1 + j];
  return nll + 0.5 * lambda * pen;
}

}  // namespace

double LogisticModel::predict(std::span<const double> x) const {
  double z = intercept;
  for (size_t j = 0; j < n_features; ++j)
    z += weights[j] * (x[j] - feat_mean[j]) / feat_scale[j];
  return sigmoid(z);
}

LogisticModel fit_logistic(std::span<const double> x, size_t n, size_t f,
                           std::span<const uint8_t> y,
                           std::span<const int> participant_index,
                           size_t n_participants, const LogisticOptions& opts) {
  size_t n_pos = 0;
  for (uint8_t v : y) n_pos += v;
  if (n_pos == 0 || n_pos == n)
    throw Error(errc::no_class_variation, "training labels are constant");

  LogisticModel m;
  m.n_features = f;
  m.feat_mean.assign(f, 0.0);
  m.feat_scale.assign(f, 1.0);
  for (size_t j = 0; j < f; ++j) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += x[i * f + j];
    m.feat_mean[j] = s / double(n);
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d = x[i * f + j] - m.feat_mean[j];
      ss += d * d;
    }
    const double sd = n > 1 ? std::sqrt(ss / double(n - 1)) : 0.0;
    if (sd > 1e-12) m.feat_scale[j] = sd;
  }

  std::vector<double> xs(n * f);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < f; ++j)
      xs[i * f + j] = (x[i * f + j] - m.feat_mean[j]) / m.feat_scale[j];

  // theta layout: [w(f), intercept, offsets(n_participants)]
  const size_t dim = f + 1 + n_participants;
  std::vector<double> theta(dim, 0.0);
  theta[f] = std::log(double(n_pos) / double(n - n_pos));

  auto linear = [&](const std::vector<double>& th, std::vector<double>& eta) {
    for (size_t i = 0; i < n; ++i) {
      double z = th[f];
      for (size_t j = 0; j < f; ++j) z += th[j] * xs[i * f + j];
      z += th[f + 1 + size_t(participant_index[i])];
      eta[i] = z;
    }
  };

  std::vector<double> eta(n), mu(n), grad(dim), step(dim), hess(dim * dim);
  std::vector<double> candidate(dim), cand_eta(n);

  linear(theta, eta);
  double obj = objective(eta, y, theta, f, n_participants, opts.lambda);
  m.objective_trace.push_back(obj);

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    m.iterations = iter + 1;
    for (size_t i = 0; i < n; ++i) mu[i] = sigmoid(eta[i]);

    // gradient: X^T (mu - y) + lambda * D * theta
    std::fill(grad.begin(), grad.end(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      const double r = mu[i] - double(y[i]);
      for (size_t j = 0; j < f; ++j) grad[j] += r * xs[i * f + j];
      grad[f] += r;
      grad[f + 1 + size_t(participant_index[i])] += r;
    }
    for (size_t j = 0; j < f; ++j) grad[j] += opts.lambda * theta[j];
    for (size_t j = 0; j < n_participants; ++j)
      grad[f + 1 + j] += opts.lambda * theta[f + 1 + j];

    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::fabs(g));
    if (gmax < opts.gradient_tolerance) {
      m.converged = true;
      break;
    }

    // Hessian: X^T W X + lambda D, W = mu(1-mu)
    std::fill(hess.begin(), hess.end(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      const double w = std::max(mu[i] * (1.0 - mu[i]), 1e-12);
      const size_t pi = f + 1 + size_t(participant_index[i]);
      const double* xi = &xs[i * f];
      for (size_t a = 0; a < f; ++a) {
        const double wa = w * xi[a];
        for (size_t b = a; b < f; ++b) hess[a * dim + b] += wa * xi[b];
        hess[a * dim + f] += wa;
        hess[a * dim + pi] += wa;
      }
      hess[f * dim + f] += w;
      hess[f * dim + pi] += w;
      hess[pi * dim + pi] += w;
    }
    for (size_t a = 0; a < dim; ++a)
      for (size_t b = a + 1; b < dim; ++b) hess[b * dim + a] = hess[a * dim + b];
    for (size_t j = 0; j < f; ++j) hess[j * dim + j] += opts.lambda;
    for (size_t j = 0; j < n_participants; ++j) {
      const size_t d = f + 1 + j;
      hess[d * dim + d] += opts.lambda;
    }

    step = grad;
    std::vector<double> hcopy = hess;
    if (!cholesky_solve(hcopy, step, dim)) {
      // ill-conditioned corner; fall back to a scaled gradient step
      for (size_t j = 0; j < dim; ++j) step[j] = grad[j] / double(n);
    }

    // Newton with halving keeps the penalized objective non-increasing.
    double alpha = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      for (size_t j = 0; j < dim; ++j) candidate[j] = theta[j] - alpha * step[j];
      linear(candidate, cand_eta);
      const double cand_obj =
          objective(cand_eta, y, candidate, f, n_participants, opts.lambda);
      if (cand_obj <= obj + 1e-12) {
        theta = candidate;
        eta = cand_eta;
        obj = cand_obj;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    m.objective_trace.push_back(obj);
    if (!accepted) break;  // no descent direction left; report best iterate
  }

  m.weights.assign(theta.begin(), theta.begin() + long(f));
  m.intercept = theta[f];
  m.participant_offsets.assign(theta.begin() + long(f) + 1, theta.end());
  return m;
}

}  // namespace mobkit
