#include "mobkit/places.hpp"

#include <algorithm>
#include <cmath>

namespace mobkit {

std::vector<DwellSegment> scan_dwell_segments(std::span<const GpsPoint> points,
                                              const ClusterParams& params) {
  std::vector<DwellSegment> segments;
  double lat_sum = 0.0, lon_sum = 0.0;
  size_t n = 0;
  int64_t start_ms = 0, end_ms = 0;

  auto close = [&] {
    if (n == 0) return;
    if (double(end_ms - start_ms) / 1000.0 >= params.t_thresh_s)
      segments.push_back({{lat_sum / n, lon_sum / n}, start_ms, end_ms, n});
    n = 0;
  };

  for (const GpsPoint& p : points) {
    if (n > 0) {
      const Coord centroid{lat_sum / n, lon_sum / n};
      if (haversine_m(centroid, p.coord()) <= params.d_thresh_m) {
        lat_sum += p.latitude;
        lon_sum += p.longitude;
        ++n;
        end_ms = p.timestamp_ms;
        continue;
      }
      close();
    }
    lat_sum = p.latitude;
    lon_sum = p.longitude;
    n = 1;
    start_ms = end_ms = p.timestamp_ms;
  }
  close();
  return segments;
}

double overnight_overlap_s(int64_t start_ms, int64_t end_ms,
                           int timezone_offset_minutes) {
  if (end_ms <= start_ms) return 0.0;
  const int64_t tz = int64_t(timezone_offset_minutes) * 60'000;
  const int64_t ls = start_ms + tz;
  const int64_t le = end_ms + tz;
  const int64_t night_len = 6 * 3'600'000;

  int64_t day = ls / kMsPerDay;
  if (ls < 0 && ls % kMsPerDay != 0) --day;
  int64_t total = 0;
  for (; day * kMsPerDay < le; ++day) {
    const int64_t night_start = day * kMsPerDay;
    const int64_t night_end = night_start + night_len;
    const int64_t lo = std::max(ls, night_start);
    const int64_t hi = std::min(le, night_end);
    if (hi > lo) total += hi - lo;
  }
  return double(total) / 1000.0;
}

namespace {

struct Agg {
  double lat_sum = 0.0, lon_sum = 0.0;
  size_t n = 0;
  double dwell_s = 0.0, overnight_s = 0.0;

  Coord centroid() const { return {lat_sum / n, lon_sum / n}; }
};

void fold(Agg& into, const Agg& from) {
  into.lat_sum += from.lat_sum;
  into.lon_sum += from.lon_sum;
  into.n += from.n;
  into.dwell_s += from.dwell_s;
  into.overnight_s += from.overnight_s;
}

}  // namespace

std::vector<PlaceCluster> cluster_places(std::span<const GpsPoint> points,
                                         const ClusterParams& params,
                                         int timezone_offset_minutes) {
  std::vector<Agg> aggs;
  for (const DwellSegment& seg : scan_dwell_segments(points, params)) {
    Agg a;
    a.lat_sum = seg.centroid.lat * double(seg.n_points);
    a.lon_sum = seg.centroid.lon * double(seg.n_points);
    a.n = seg.n_points;
    a.dwell_s = double(seg.end_ms - seg.start_ms) / 1000.0;
    a.overnight_s =
        overnight_overlap_s(seg.start_ms, seg.end_ms, timezone_offset_minutes);

    int target = -1;
    double best = params.merge_distance_m;
    for (size_t i = 0; i < aggs.size(); ++i) {
      const double d = haversine_m(aggs[i].centroid(), a.centroid());
      if (d <= best) {
        best = d;
        target = int(i);
      }
    }
    if (target >= 0) fold(aggs[size_t(target)], a);
    else aggs.push_back(a);
  }

  // Folding moves centroids; cascade until all are separated.
  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t i = 0; i < aggs.size() && !merged; ++i) {
      for (size_t j = i + 1; j < aggs.size() && !merged; ++j) {
        if (haversine_m(aggs[i].centroid(), aggs[j].centroid()) <
            params.merge_distance_m) {
          fold(aggs[i], aggs[j]);
          aggs.erase(aggs.begin() + long(j));
          merged = true;
        }
      }
    }
  }

  std::vector<PlaceCluster> clusters;
  clusters.reserve(aggs.size());
  for (size_t i = 0; i < aggs.size(); ++i) {
    PlaceCluster c;
    c.cluster_id = int(i);
    c.centroid = aggs[i].centroid();
    c.total_dwell_s = aggs[i].dwell_s;
    c.overnight_dwell_s = aggs[i].overnight_s;
    c.n_points = aggs[i].n;
    clusters.push_back(c);
  }
  return clusters;
}

int nearest_cluster(const std::vector<PlaceCluster>& clusters, const Coord& c,
                    double* distance_m) {
  int best = -1;
  double best_d = 0.0;
  for (size_t i = 0; i < clusters.size(); ++i) {
    const double d = haversine_m(clusters[i].centroid, c);
    if (best < 0 || d < best_d) {
      best = int(i);
      best_d = d;
    }
  }
  if (distance_m) *distance_m = best_d;
  return best;
}

std::optional<int> detect_home(const std::vector<PlaceCluster>& clusters) {
  const PlaceCluster* home = nullptr;
  for (const PlaceCluster& c : clusters) {
    if (c.overnight_dwell_s <= 0.0) continue;
    if (!home || c.overnight_dwell_s > home->overnight_dwell_s ||
        (c.overnight_dwell_s == home->overnight_dwell_s &&
         (c.total_dwell_s > home->total_dwell_s ||
          (c.total_dwell_s == home->total_dwell_s &&
           c.cluster_id < home->cluster_id))))
      home = &c;
  }
  if (!home) return std::nullopt;
  return home->cluster_id;
}

}  // namespace mobkit
