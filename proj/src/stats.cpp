#include "mobkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mobkit/error.hpp"

namespace mobkit {

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / double(xs.size());
}

static double sum_sq_dev(std::span<const double> xs) {
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) {
    double d = x - m;
    s += d * d;
  }
  return s;
}

double variance_sample(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return sum_sq_dev(xs) / double(xs.size() - 1);
}

double variance_population(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return sum_sq_dev(xs) / double(xs.size());
}

// Continued fraction for the incomplete beta (modified Lentz).
static double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) return 1.0;
  if (t == 0.0) return 1.0;
  const double x = df / (df + t * t);
  double p = reg_incomplete_beta(df / 2.0, 0.5, x);
  if (p > 1.0) p = 1.0;
  if (p < 0.0) p = 0.0;
  return p;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw Error(errc::degenerate_variance,
                "welch_t requires at least 2 observations per sample");
  WelchResult r;
  r.n_a = a.size();
  r.n_b = b.size();
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  const double va = variance_sample(a);
  const double vb = variance_sample(b);
  if (!(std::isfinite(va) && std::isfinite(vb)))
    throw Error(errc::degenerate_variance, "welch_t: non-finite variance");
  const double sa = va / double(r.n_a);
  const double sb = vb / double(r.n_b);
  if (sa + sb == 0.0) {
    r.degenerate = true;
    if (r.mean_a == r.mean_b) {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_statistic = r.mean_a > r.mean_b
                          ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    r.degrees_freedom = double(r.n_a + r.n_b - 2);
    return r;
  }
  r.t_statistic = (r.mean_a - r.mean_b) / std::sqrt(sa + sb);
  r.degrees_freedom = (sa + sb) * (sa + sb) /
                      (sa * sa / double(r.n_a - 1) + sb * sb / double(r.n_b - 1));
  r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_freedom);
  return r;
}

std::optional<double> auc_pairwise(std::span<const double> scores,
                                   std::span<const uint8_t> labels) {
  double wins = 0.0;
  size_t n_pos = 0, n_neg = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) ++n_pos;
    else ++n_neg;
  }
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    for (size_t j = 0; j < labels.size(); ++j) {
      if (labels[j]) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / (double(n_pos) * double(n_neg));
}

double ks_uniform_distance(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double lo = double(i) / double(n);
    const double hi = double(i + 1) / double(n);
    d = std::max(d, std::fabs(values[i] - lo));
    d = std::max(d, std::fabs(values[i] - hi));
  }
  return d;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, size_t n) {
  // In-place lower Cholesky, then forward/back substitution.
  for (size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (diag <= 0.0) return false;
    diag = std::sqrt(diag);
    a[j * n + j] = diag;
    for (size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / diag;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return true;
}

}  // namespace mobkit
