#pragma once

#include <cmath>

namespace mobkit {

// Mean Earth radius, meters.
inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kPi = 3.14159265358979323846;

struct Coord {
  double lat = 0.0;
  double lon = 0.0;
};

inline double deg2rad(double deg) { return deg * kPi / 180.0; }

inline bool coord_in_bounds(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

// Great-circle distance on the mean-radius sphere, meters.
inline double haversine_m(const Coord& a, const Coord& b) {
  const double dlat = deg2rad(b.lat - a.lat);
  const double dlon = deg2rad(b.lon - a.lon);
  const double slat = std::sin(dlat / 2.0);
  const double slon = std::sin(dlon / 2.0);
  double h = slat * slat +
             std::cos(deg2rad(a.lat)) * std::cos(deg2rad(b.lat)) * slon * slon;
  if (h > 1.0) h = 1.0;
  if (h < 0.0) h = 0.0;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

// Unit direction vector on the sphere. Squared chord distances between these
// vectors order point pairs the same way great-circle distances do, which
// makes max-distance scans cheap.
struct Vec3 {
  double x, y, z;
};

inline Vec3 to_unit_vec(const Coord& c) {
  const double lat = deg2rad(c.lat);
  const double lon = deg2rad(c.lon);
  const double cl = std::cos(lat);
  return {cl * std::cos(lon), cl * std::sin(lon), std::sin(lat)};
}

inline double chord_sq(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double chord_sq_to_arc_m(double c2) {
  double half = std::sqrt(c2) / 2.0;
  if (half > 1.0) half = 1.0;
  return 2.0 * kEarthRadiusM * std::asin(half);
}

// Local planar projection (equirectangular) about a fixed origin; adequate at
// campus scale where curvature effects are far below GPS noise.
struct LocalProjection {
  explicit LocalProjection(const Coord& origin)
      : origin_(origin), cos_lat_(std::cos(deg2rad(origin.lat))) {}

  void to_xy(const Coord& c, double& x, double& y) const {
    x = deg2rad(c.lon - origin_.lon) * cos_lat_ * kEarthRadiusM;
    y = deg2rad(c.lat - origin_.lat) * kEarthRadiusM;
  }

  Coord from_xy(double x, double y) const {
    Coord c;
    c.lat = origin_.lat + (y / kEarthRadiusM) * 180.0 / kPi;
    c.lon = origin_.lon + (x / (kEarthRadiusM * cos_lat_)) * 180.0 / kPi;
    return c;
  }

 private:
  Coord origin_;
  double cos_lat_;
};

}  // namespace mobkit
