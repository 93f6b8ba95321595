#include "mobkit/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"

namespace mobkit {

SymmetricEigen jacobi_eigen(std::vector<double> a, size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double fro = 0.0;
  for (double x : a) fro += x * x;
  fro = std::sqrt(fro);
  const double scale = fro > 0.0 ? fro : 1.0;
  for (double& x : a) x /= scale;

  auto off_norm = [&] {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
  };

  constexpr double kTol = 1e-10;
  constexpr int kMaxSweeps = 64;
  double prev = off_norm();
  for (int sweep = 0; sweep < kMaxSweeps && prev >= kTol; ++sweep) {
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t i = 0; i < n; ++i) {
          const double aip = a[i * n + p];
          const double aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[i * n + q] = s * aip + c * aiq;
        }
        for (size_t i = 0; i < n; ++i) {
          const double api = a[p * n + i];
          const double aqi = a[q * n + i];
          a[p * n + i] = c * api - s * aqi;
          a[q * n + i] = s * api + c * aqi;
        }
        for (size_t i = 0; i < n; ++i) {
          const double vip = v[i * n + p];
          const double viq = v[i * n + q];
          v[i * n + p] = c * vip - s * viq;
          v[i * n + q] = s * vip + c * viq;
        }
      }
    }
    const double cur = off_norm();
    if (cur >= prev && cur < 1e-13) break;  // machine-precision floor
    prev = cur;
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return a[x * n + x] > a[y * n + y];
  });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (size_t j = 0; j < n; ++j) {
    out.values[j] = a[order[j] * n + order[j]] * scale;
    for (size_t i = 0; i < n; ++i) out.vectors[i * n + j] = v[i * n + order[j]];
  }
  return out;
}

PcaModel pca_fit(const std::vector<double>& data, size_t n_rows, size_t n_features,
                 int k) {
  if (n_rows < 2)
    throw Error(errc::insufficient_days, "PCA needs at least 2 rows");
  if (k <= 0 || size_t(k) > n_features) k = int(n_features);

  PcaModel m;
  m.n_features = n_features;
  m.n_rows = n_rows;
  m.k = k;

  m.mean.assign(n_features, 0.0);
  for (size_t r = 0; r < n_rows; ++r)
    for (size_t c = 0; c < n_features; ++c) m.mean[c] += data[r * n_features + c];
  for (double& v : m.mean) v /= double(n_rows);

  std::vector<double> centered(n_rows * n_features);
  for (size_t r = 0; r < n_rows; ++r)
    for (size_t c = 0; c < n_features; ++c)
      centered[r * n_features + c] = data[r * n_features + c] - m.mean[c];

  std::vector<double> cov(n_features * n_features, 0.0);
  for (size_t r = 0; r < n_rows; ++r) {
    const double* row = &centered[r * n_features];
    for (size_t i = 0; i < n_features; ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      double* c_i = &cov[i * n_features];
      for (size_t j = i; j < n_features; ++j) c_i[j] += ri * row[j];
    }
  }
  const double denom = double(n_rows - 1);
  for (size_t i = 0; i < n_features; ++i)
    for (size_t j = i; j < n_features; ++j) {
      cov[i * n_features + j] /= denom;
      cov[j * n_features + i] = cov[i * n_features + j];
    }

  SymmetricEigen eig = jacobi_eigen(std::move(cov), n_features);

  m.eigenvalues = eig.values;
  for (double& v : m.eigenvalues)
    if (v < 0.0) v = 0.0;  // numerical negatives on rank-deficient input

  // Sign convention: in every column the largest-magnitude entry is positive.
  for (int j = 0; j < k; ++j) {
    size_t arg = 0;
    double best = -1.0;
    for (size_t i = 0; i < n_features; ++i) {
      const double mag = std::fabs(eig.vectors[i * n_features + size_t(j)]);
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (eig.vectors[arg * n_features + size_t(j)] < 0.0)
      for (size_t i = 0; i < n_features; ++i)
        eig.vectors[i * n_features + size_t(j)] =
            -eig.vectors[i * n_features + size_t(j)];
  }

  m.loadings.resize(n_features * size_t(k));
  for (size_t i = 0; i < n_features; ++i)
    for (int j = 0; j < k; ++j)
      m.loadings[i * size_t(k) + size_t(j)] = eig.vectors[i * n_features + size_t(j)];

  const double total =
      std::accumulate(m.eigenvalues.begin(), m.eigenvalues.end(), 0.0);
  m.explained_ratio.resize(size_t(k));
  for (int j = 0; j < k; ++j)
    m.explained_ratio[size_t(j)] = total > 0.0 ? m.eigenvalues[size_t(j)] / total : 0.0;

  m.scores.assign(n_rows * size_t(k), 0.0);
  for (size_t r = 0; r < n_rows; ++r) {
    const double* row = &centered[r * n_features];
    double* srow = &m.scores[r * size_t(k)];
    for (size_t i = 0; i < n_features; ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      const double* l = &m.loadings[i * size_t(k)];
      for (int j = 0; j < k; ++j) srow[j] += ri * l[j];
    }
  }
  return m;
}

double PcaModel::cumulative_ratio(int n_components) const {
  const double total = std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (int j = 0; j < n_components && size_t(j) < eigenvalues.size(); ++j)
    s += eigenvalues[size_t(j)];
  return s / total;
}

std::string pca_loadings_csv(const PcaModel& model) {
  std::string out = "component";
  for (size_t i = 0; i < model.n_features; ++i) {
    out += ',';
    out += bin_label(int(i) + 1);
  }
  out += '\n';
  for (int j = 0; j < model.k; ++j) {
    out += "PC" + std::to_string(j + 1);
    for (size_t i = 0; i < model.n_features; ++i) {
      out += ',';
      out += fmt_sig(model.loading(i, j), 9);
    }
    out += '\n';
  }
  return out;
}

std::string pca_summary_csv(const PcaModel& model) {
  std::string out = "component,eigenvalue,explained_ratio,cumulative_ratio\n";
  double cum = 0.0;
  const double total =
      std::accumulate(model.eigenvalues.begin(), model.eigenvalues.end(), 0.0);
  for (size_t j = 0; j < model.eigenvalues.size(); ++j) {
    const double ratio = total > 0.0 ? model.eigenvalues[j] / total : 0.0;
    cum += ratio;
    out += "PC" + std::to_string(j + 1);
    out += ',';
    out += fmt_sig(model.eigenvalues[j], 9);
    out += ',';
    out += fmt_sig(ratio, 9);
    out += ',';
    out += fmt_sig(cum, 9);
    out += '\n';
  }
  return out;
}

std::string pca_scores_csv(const PcaModel& model,
                           const std::vector<DisplacementProfile>& profiles) {
  std::string out = "participant_id,local_date,group";
  for (int j = 0; j < model.k; ++j) out += ",PC" + std::to_string(j + 1);
  out += '\n';
  for (size_t r = 0; r < model.n_rows; ++r) {
    out += profiles[r].participant_id;
    out += ',';
    out += date_to_string(profiles[r].date);
    out += ',';
    out += group_name(profiles[r].group);
    for (int j = 0; j < model.k; ++j) {
      out += ',';
      out += fmt_sig(model.score(r, j), 9);
    }
    out += '\n';
  }
  return out;
}

}  // namespace mobkit
