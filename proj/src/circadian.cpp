#include "mobkit/circadian.hpp"

#include <cmath>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"
#include "mobkit/stats.hpp"

namespace mobkit {

namespace {

void check_days(const std::vector<std::vector<double>>& days, size_t min_days) {
  if (days.size() < min_days)
    throw Error(errc::insufficient_days, "need at least " +
                                             std::to_string(min_days) + " days");
  for (const auto& d : days)
    if (d.size() != days.front().size() || d.empty())
      throw Error(errc::insufficient_days, "day series lengths differ");
}

std::vector<double> mean_profile(const std::vector<std::vector<double>>& days) {
  const size_t p = days.front().size();
  std::vector<double> prof(p, 0.0);
  for (const auto& d : days)
    for (size_t h = 0; h < p; ++h) prof[h] += d[h];
  for (double& v : prof) v /= double(days.size());
  return prof;
}

}  // namespace

double interdaily_stability(const std::vector<std::vector<double>>& days) {
  check_days(days, 2);
  const size_t p = days.front().size();
  const size_t n = p * days.size();

  double grand = 0.0;
  for (const auto& d : days)
    for (double v : d) grand += v;
  grand /= double(n);

  const std::vector<double> prof = mean_profile(days);
  double between = 0.0;
  for (double v : prof) between += (v - grand) * (v - grand);
  between /= double(p);

  double total = 0.0;
  for (const auto& d : days)
    for (double v : d) total += (v - grand) * (v - grand);
  total /= double(n);

  if (total <= 0.0)
    throw Error(errc::degenerate_variance, "all activity values equal");
  return between / total;
}

std::optional<double> iv_series(std::span<const double> xs) {
  const size_t n = xs.size();
  if (n < 2) return std::nullopt;
  const double m = mean(xs);
  double ssd = 0.0;  // successive squared differences
  double var = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = xs[i] - m;
    var += d * d;
    if (i > 0) {
      const double s = xs[i] - xs[i - 1];
      ssd += s * s;
    }
  }
  if (var <= 0.0) return std::nullopt;
  return (double(n) * ssd) / (double(n - 1) * var);
}

double intradaily_variability(const std::vector<std::vector<double>>& days) {
  check_days(days, 1);
  double sum = 0.0;
  size_t defined = 0;
  for (const auto& d : days) {
    if (auto iv = iv_series(d)) {
      sum += *iv;
      ++defined;
    }
  }
  if (defined == 0)
    throw Error(errc::degenerate_variance, "every day is constant");
  return sum / double(defined);
}

std::pair<double, double> m10_l5(const std::vector<std::vector<double>>& days,
                                 bool pad_leading_zero) {
  check_days(days, 1);
  std::vector<double> prof = mean_profile(days);
  if (pad_leading_zero) prof.insert(prof.begin(), 0.0);
  const size_t p = prof.size();
  const size_t w10 = 20, w5 = 10;  // half-hour bins per window
  if (p < w10)
    throw Error(errc::insufficient_days, "profile shorter than the M10 window");

  auto best_window = [&](size_t w, bool want_max) {
    double sum = 0.0;
    for (size_t i = 0; i < w; ++i) sum += prof[i];
    double best = sum;
    for (size_t start = 1; start + w <= p; ++start) {
      sum += prof[start + w - 1] - prof[start - 1];
      if (want_max ? sum > best : sum < best) best = sum;
    }
    return best / double(w);
  };

  return {best_window(w10, true), best_window(w5, false)};
}

std::optional<double> relative_amplitude(double m10, double l5) {
  if (m10 + l5 <= 0.0) return std::nullopt;
  return (m10 - l5) / (m10 + l5);
}

CircadianMetrics circadian_metrics(const std::string& participant_id, Group group,
                                   const std::vector<std::vector<double>>& days,
                                   bool pad_leading_zero) {
  CircadianMetrics m;
  m.participant_id = participant_id;
  m.group = group;
  m.n_days = int(days.size());
  if (days.empty()) return m;

  try {
    m.IS = interdaily_stability(days);
  } catch (const Error&) {
  }
  try {
    m.IV = intradaily_variability(days);
  } catch (const Error&) {
  }
  auto [m10, l5] = m10_l5(days, pad_leading_zero);
  m.M10 = m10;
  m.L5 = l5;
  m.RA = relative_amplitude(m10, l5);
  return m;
}

static void append_opt(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (v) out += fmt_sig(*v, 9);
}

std::string circadian_to_csv(const std::vector<CircadianMetrics>& rows) {
  std::string out = "participant_id,group,IS,IV,M10,L5,RA,n_days\n";
  for (const auto& r : rows) {
    out += r.participant_id;
    out += ',';
    out += group_name(r.group);
    append_opt(out, r.IS);
    append_opt(out, r.IV);
    append_opt(out, r.M10);
    append_opt(out, r.L5);
    append_opt(out, r.RA);
    out += ',';
    out += std::to_string(r.n_days);
    out += '\n';
  }
  return out;
}

std::vector<CircadianMetrics> circadian_from_csv(std::string_view csv) {
  std::vector<CircadianMetrics> out;
  bool saw_header = false;
  std::vector<std::string_view> f;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      saw_header = true;
      return;
    }
    if (line.empty()) return;
    split_csv_line(line, f);
    if (f.size() != 8) throw Error(errc::malformed_header, "bad circadian row");
    CircadianMetrics m;
    m.participant_id = std::string(f[0]);
    auto g = parse_group(f[1]);
    if (!g) throw Error(errc::malformed_header, "bad circadian group");
    m.group = *g;
    auto opt = [](std::string_view s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_f64(s);
    };
    m.IS = opt(f[2]);
    m.IV = opt(f[3]);
    m.M10 = opt(f[4]);
    m.L5 = opt(f[5]);
    m.RA = opt(f[6]);
    m.n_days = int(parse_i64(f[7]).value_or(0));
    out.push_back(std::move(m));
  });
  return out;
}

}  // namespace mobkit
