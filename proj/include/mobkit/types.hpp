#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mobkit/dates.hpp"
#include "mobkit/geo.hpp"

namespace mobkit {

enum class Group { pre, post };

inline const char* group_name(Group g) { return g == Group::pre ? "PRE" : "POST"; }

inline std::optional<Group> parse_group(std::string_view s) {
  if (s == "PRE") return Group::pre;
  if (s == "POST") return Group::post;
  return std::nullopt;
}

struct GpsPoint {
  int64_t timestamp_ms = 0;
  double latitude = 0.0;
  double longitude = 0.0;
  std::optional<double> accuracy_m;

  Coord coord() const { return {latitude, longitude}; }
};

// A participant's full trace: points sorted by timestamp, duplicate
// timestamps collapsed to their coordinate mean at parse time.
struct Trace {
  std::string participant_id;
  Group group = Group::pre;
  int timezone_offset_minutes = 0;
  std::vector<GpsPoint> points;
};

// One participant-local calendar day of points (half-open [00:00, 24:00)).
struct DayTrace {
  std::string participant_id;
  LocalDate date = 0;
  std::vector<GpsPoint> points;
  double coverage_fraction = 0.0;  // share of the 48 half-hour bins observed
};

}  // namespace mobkit
