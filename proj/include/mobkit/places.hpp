#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mobkit/types.hpp"

namespace mobkit {

struct ClusterParams {
  double d_thresh_m = 200.0;        // join radius of the running centroid
  double t_thresh_s = 600.0;        // minimum dwell span to count as a place
  double merge_distance_m = 200.0;  // centroid distance that merges clusters
};

// A maximal run of points that stayed within d_thresh of its running
// centroid for at least t_thresh.
struct DwellSegment {
  Coord centroid;
  int64_t start_ms = 0;
  int64_t end_ms = 0;
  size_t n_points = 0;
};

struct PlaceCluster {
  int cluster_id = 0;
  Coord centroid;
  double total_dwell_s = 0.0;
  double overnight_dwell_s = 0.0;  // dwell with local time in [00:00, 06:00)
  size_t n_points = 0;
};

// Time-ordered scan: a point within d_thresh of the running candidate
// centroid joins it (incremental mean); a farther point closes the
// candidate, which is kept iff its time span reaches t_thresh.
std::vector<DwellSegment> scan_dwell_segments(std::span<const GpsPoint> points,
                                              const ClusterParams& params);

// Dwell segments agglomerated into significant places: segments whose
// centroid lands within merge_distance of an existing cluster fold into it
// (point-count weighted), merges cascade until all centroids are separated.
std::vector<PlaceCluster> cluster_places(std::span<const GpsPoint> points,
                                         const ClusterParams& params,
                                         int timezone_offset_minutes);

// Index into `clusters` of the nearest centroid, -1 when empty.
int nearest_cluster(const std::vector<PlaceCluster>& clusters, const Coord& c,
                    double* distance_m = nullptr);

// The cluster with the greatest overnight dwell; ties broken by larger total
// dwell, then smaller id. nullopt when no cluster has overnight dwell.
std::optional<int> detect_home(const std::vector<PlaceCluster>& clusters);

// Seconds of [start_ms, end_ms] spent inside local [00:00, 06:00) windows.
double overnight_overlap_s(int64_t start_ms, int64_t end_ms,
                           int timezone_offset_minutes);

}  // namespace mobkit
