#include "mobkit/phenotypes.hpp"

#include <algorithm>
#include <cmath>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"

namespace mobkit {

std::optional<double> location_variance(std::span<const GpsPoint> points,
                                        bool degrees_mode) {
  if (points.size() < 2) return std::nullopt;
  const double n = double(points.size());

  double lat0 = 0.0, lon0 = 0.0;
  for (const GpsPoint& p : points) {
    lat0 += p.latitude;
    lon0 += p.longitude;
  }
  lat0 /= n;
  lon0 /= n;

  double sxx = 0.0, syy = 0.0;
  if (degrees_mode) {
    for (const GpsPoint& p : points) {
      sxx += (p.longitude - lon0) * (p.longitude - lon0);
      syy += (p.latitude - lat0) * (p.latitude - lat0);
    }
  } else {
    const LocalProjection proj({lat0, lon0});
    for (const GpsPoint& p : points) {
      double x, y;
      proj.to_xy(p.coord(), x, y);
      sxx += x * x;
      syy += y * y;
    }
  }
  return std::sqrt((sxx + syy) / (n - 1.0));
}

std::vector<std::pair<int, double>> day_place_dwells(
    std::span<const GpsPoint> day_points, const std::vector<PlaceCluster>& clusters,
    const ClusterParams& params) {
  std::vector<std::pair<int, double>> dwells;
  if (clusters.empty()) return dwells;
  for (const DwellSegment& seg : scan_dwell_segments(day_points, params)) {
    const int id = nearest_cluster(clusters, seg.centroid);
    const double span_s = double(seg.end_ms - seg.start_ms) / 1000.0;
    auto it = std::find_if(dwells.begin(), dwells.end(),
                           [&](const auto& d) { return d.first == id; });
    if (it == dwells.end()) dwells.emplace_back(id, span_s);
    else it->second += span_s;
  }
  std::sort(dwells.begin(), dwells.end());
  return dwells;
}

double place_entropy(std::span<const double> dwell_seconds) {
  if (dwell_seconds.size() < 2) return 0.0;
  double total = 0.0;
  for (double d : dwell_seconds) total += d;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double d : dwell_seconds) {
    if (d <= 0.0) continue;
    const double p = d / total;
    h -= p * std::log(p);
  }
  return h / std::log(double(dwell_seconds.size()));
}

double percent_home(const BinnedDay& imputed, const Coord& home, double d_thresh_m) {
  int at_home = 0;
  for (const Coord& c : imputed.coords)
    if (haversine_m(c, home) <= d_thresh_m) ++at_home;
  return double(at_home) / double(kBinsPerDay);
}

double total_distance(std::span<const GpsPoint> points) {
  double total = 0.0;
  for (size_t i = 1; i < points.size(); ++i)
    total += haversine_m(points[i - 1].coord(), points[i].coord());
  return total;
}

namespace {

// Andrew's monotone chain on planar-projected points.
std::vector<size_t> convex_hull_indices(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  auto cross = [&](size_t o, size_t a, size_t b) {
    return (x[a] - x[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (x[b] - x[o]);
  };
  std::vector<size_t> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

double max_chord_sq(const std::vector<Vec3>& v) {
  double best = 0.0;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      best = std::max(best, chord_sq(v[i], v[j]));
  return best;
}

}  // namespace

double max_distance(std::span<const GpsPoint> points) {
  const size_t n = points.size();
  if (n < 2) return 0.0;

  std::vector<Vec3> vecs;
  vecs.reserve(n);
  for (const GpsPoint& p : points) vecs.push_back(to_unit_vec(p.coord()));

  if (n <= 5000) return chord_sq_to_arc_m(max_chord_sq(vecs));

  // Large day: the diameter pair lies on the convex hull of the projection.
  double lat0 = 0.0, lon0 = 0.0;
  for (const GpsPoint& p : points) {
    lat0 += p.latitude;
    lon0 += p.longitude;
  }
  const LocalProjection proj({lat0 / double(n), lon0 / double(n)});
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) proj.to_xy(points[i].coord(), x[i], y[i]);
  std::vector<Vec3> hull_vecs;
  for (size_t i : convex_hull_indices(x, y)) hull_vecs.push_back(vecs[i]);
  if (hull_vecs.size() < 2) return 0.0;
  return chord_sq_to_arc_m(max_chord_sq(hull_vecs));
}

std::array<int, kBinsPerDay> routine_labels(const BinnedDay& imputed,
                                            const std::vector<PlaceCluster>& clusters,
                                            double d_thresh_m) {
  std::array<int, kBinsPerDay> labels{};
  for (int b = 0; b < kBinsPerDay; ++b) {
    if (b > 0 &&
        haversine_m(imputed.coords[b - 1], imputed.coords[b]) > d_thresh_m) {
      labels[b] = kMovingLabel;
      continue;
    }
    const int id = nearest_cluster(clusters, imputed.coords[b]);
    labels[b] = id < 0 ? kNoPlaceLabel : clusters[size_t(id)].cluster_id;
  }
  return labels;
}

std::optional<double> routine_index(
    size_t day_index, const std::vector<std::array<int, kBinsPerDay>>& all_days) {
  const size_t n_days = all_days.size();
  if (n_days < 2) return std::nullopt;
  const auto& mine = all_days[day_index];
  double acc = 0.0;
  for (int b = 0; b < kBinsPerDay; ++b) {
    int same = 0;
    for (size_t d = 0; d < n_days; ++d)
      if (d != day_index && all_days[d][b] == mine[b]) ++same;
    acc += double(same) / double(n_days - 1);
  }
  return acc / double(kBinsPerDay);
}

std::vector<SurveyEntry> parse_survey(std::string_view csv, size_t* rejected) {
  std::vector<SurveyEntry> out;
  size_t bad = 0;
  bool saw_header = false;
  std::vector<std::string_view> f;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      split_csv_line(line, f);
      if (f.size() != 3 || f[0] != "participant_id" || f[1] != "local_date" ||
          f[2] != "sadness_level")
        throw Error(errc::malformed_header,
                    "survey header must be participant_id,local_date,sadness_level");
      saw_header = true;
      return;
    }
    if (line.empty()) return;
    split_csv_line(line, f);
    if (f.size() != 3) {
      ++bad;
      return;
    }
    auto date = parse_date(f[1]);
    auto level = parse_i64(f[2]);
    if (f[0].empty() || !date || !level || *level < 0 || *level > 4) {
      ++bad;
      return;
    }
    out.push_back({std::string(f[0]), *date, int(*level)});
  });
  if (rejected) *rejected = bad;
  return out;
}

SurveyLookup survey_lookup(const std::vector<SurveyEntry>& entries) {
  SurveyLookup m;
  for (const auto& e : entries) m[{e.participant_id, e.date}] = e.sadness_level;
  return m;
}

ParticipantPhenotypes compute_daily_phenotypes(
    const std::string& participant_id, Group group, int timezone_offset_minutes,
    const std::vector<DayTrace>& days, const ClusterParams& params,
    const SurveyLookup& survey, bool loc_var_degrees) {
  ParticipantPhenotypes out;

  std::vector<GpsPoint> all_points;
  for (const DayTrace& d : days)
    all_points.insert(all_points.end(), d.points.begin(), d.points.end());
  out.clusters = cluster_places(all_points, params, timezone_offset_minutes);
  out.home_cluster = detect_home(out.clusters);

  std::vector<std::array<int, kBinsPerDay>> labels;
  labels.reserve(days.size());

  for (const DayTrace& day : days) {
    DailyPhenotypes row;
    row.participant_id = participant_id;
    row.date = day.date;
    row.group = group;

    row.loc_var = location_variance(day.points, loc_var_degrees);

    const auto dwells = day_place_dwells(day.points, out.clusters, params);
    row.num_pls = int(dwells.size());
    std::vector<double> shares;
    shares.reserve(dwells.size());
    for (const auto& [id, s] : dwells) shares.push_back(s);
    row.ent_pls = place_entropy(shares);

    row.total_dist = total_distance(day.points);
    row.max_dist = max_distance(day.points);

    const BinnedDay imputed = impute_bins(bin_day(day, timezone_offset_minutes));
    if (out.home_cluster) {
      const Coord& home = out.clusters[size_t(*out.home_cluster)].centroid;
      row.perc_home = percent_home(imputed, home, params.d_thresh_m);
    }
    labels.push_back(routine_labels(imputed, out.clusters, params.d_thresh_m));

    if (auto it = survey.find({participant_id, day.date}); it != survey.end())
      row.severe_sad = severe_sadness(it->second);

    out.days.push_back(std::move(row));
  }

  for (size_t i = 0; i < out.days.size(); ++i)
    out.days[i].routine_idx = routine_index(i, labels);

  return out;
}

namespace {

void append_opt_fixed(std::string& out, const std::optional<double>& v, int dec) {
  out += ',';
  if (v) out += fmt_fixed(*v, dec);
}

std::optional<double> opt_field(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_f64(s);
}

}  // namespace

std::string phenotypes_to_csv(const std::vector<DailyPhenotypes>& rows) {
  std::string out =
      "participant_id,local_date,group,loc.var,num.pls,ent.pls,perc.home,"
      "total.dist,max.dist,routine.idx,severe_sad\n";
  for (const auto& r : rows) {
    out += r.participant_id;
    out += ',';
    out += date_to_string(r.date);
    out += ',';
    out += group_name(r.group);
    append_opt_fixed(out, r.loc_var, 3);
    out += ',';
    if (r.num_pls) out += std::to_string(*r.num_pls);
    append_opt_fixed(out, r.ent_pls, 6);
    append_opt_fixed(out, r.perc_home, 6);
    append_opt_fixed(out, r.total_dist, 3);
    append_opt_fixed(out, r.max_dist, 3);
    append_opt_fixed(out, r.routine_idx, 6);
    out += ',';
    if (r.severe_sad) out += *r.severe_sad ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<DailyPhenotypes> phenotypes_from_csv(std::string_view csv) {
  std::vector<DailyPhenotypes> out;
  bool saw_header = false;
  std::vector<std::string_view> f;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      saw_header = true;
      return;
    }
    if (line.empty()) return;
    split_csv_line(line, f);
    if (f.size() != 11) throw Error(errc::malformed_header, "bad phenotype row");
    DailyPhenotypes r;
    r.participant_id = std::string(f[0]);
    auto date = parse_date(f[1]);
    auto g = parse_group(f[2]);
    if (!date || !g) throw Error(errc::malformed_header, "bad phenotype row");
    r.date = *date;
    r.group = *g;
    r.loc_var = opt_field(f[3]);
    if (!f[4].empty()) r.num_pls = int(parse_i64(f[4]).value_or(0));
    r.ent_pls = opt_field(f[5]);
    r.perc_home = opt_field(f[6]);
    r.total_dist = opt_field(f[7]);
    r.max_dist = opt_field(f[8]);
    r.routine_idx = opt_field(f[9]);
    if (!f[10].empty()) r.severe_sad = f[10] == "1";
    out.push_back(std::move(r));
  });
  return out;
}

}  // namespace mobkit
