#include "mobkit/ingest.hpp"

#include <algorithm>
#include <set>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"

namespace mobkit {

namespace {

bool header_matches(std::string_view line) {
  std::vector<std::string_view> f;
  split_csv_line(line, f);
  if (f.size() != 3 && f.size() != 4) return false;
  if (f[0] != "timestamp_ms" || f[1] != "latitude" || f[2] != "longitude")
    return false;
  return f.size() == 3 || f[3] == "accuracy_m";
}

// Collapse runs of equal timestamps to a single point at the coordinate mean.
void collapse_duplicates(std::vector<GpsPoint>& pts) {
  if (pts.empty()) return;
  std::vector<GpsPoint> out;
  out.reserve(pts.size());
  size_t i = 0;
  while (i < pts.size()) {
    size_t j = i + 1;
    while (j < pts.size() && pts[j].timestamp_ms == pts[i].timestamp_ms) ++j;
    if (j == i + 1) {
      out.push_back(pts[i]);
    } else {
      GpsPoint p;
      p.timestamp_ms = pts[i].timestamp_ms;
      double lat = 0.0, lon = 0.0, acc = 0.0;
      size_t n_acc = 0;
      for (size_t k = i; k < j; ++k) {
        lat += pts[k].latitude;
        lon += pts[k].longitude;
        if (pts[k].accuracy_m) {
          acc += *pts[k].accuracy_m;
          ++n_acc;
        }
      }
      const double n = double(j - i);
      p.latitude = lat / n;
      p.longitude = lon / n;
      if (n_acc > 0) p.accuracy_m = acc / double(n_acc);
      out.push_back(p);
    }
    i = j;
  }
  pts = std::move(out);
}

}  // namespace

Trace parse_trace(std::string_view csv, std::string participant_id, Group group,
                  int timezone_offset_minutes, RejectionReport* report) {
  RejectionReport local;
  RejectionReport& rep = report ? *report : local;

  Trace trace;
  trace.participant_id = std::move(participant_id);
  trace.group = group;
  trace.timezone_offset_minutes = timezone_offset_minutes;

  bool saw_header = false;
  std::vector<std::string_view> fields;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      if (!header_matches(line))
        throw Error(errc::malformed_header,
                    "expected header timestamp_ms,latitude,longitude[,accuracy_m]");
      saw_header = true;
      return;
    }
    if (line.empty() || line == "\r") return;
    ++rep.rows_read;
    split_csv_line(line, fields);
    if (fields.size() != 3 && fields.size() != 4) {
      ++rep.rows_rejected;
      ++rep.bad_field;
      return;
    }
    auto ts = parse_i64(fields[0]);
    auto lat = parse_f64(fields[1]);
    auto lon = parse_f64(fields[2]);
    if (!ts || !lat || !lon) {
      ++rep.rows_rejected;
      if (!ts && !fields[0].empty()) ++rep.bad_timestamp;
      else ++rep.bad_field;
      return;
    }
    if (*ts <= 0) {
      ++rep.rows_rejected;
      ++rep.bad_timestamp;
      return;
    }
    if (!coord_in_bounds(*lat, *lon)) {
      ++rep.rows_rejected;
      ++rep.bad_coordinate;
      return;
    }
    GpsPoint p;
    p.timestamp_ms = *ts;
    p.latitude = *lat;
    p.longitude = *lon;
    if (fields.size() == 4 && !fields[3].empty()) {
      auto acc = parse_f64(fields[3]);
      if (!acc || *acc < 0.0) {
        ++rep.rows_rejected;
        ++rep.bad_field;
        return;
      }
      p.accuracy_m = *acc;
    }
    trace.points.push_back(p);
  });

  if (!saw_header)
    throw Error(errc::malformed_header, "empty input, no header line");
  if (trace.points.empty())
    throw Error(errc::empty_trace,
                "no valid rows for participant " + trace.participant_id);

  std::stable_sort(trace.points.begin(), trace.points.end(),
                   [](const GpsPoint& a, const GpsPoint& b) {
                     return a.timestamp_ms < b.timestamp_ms;
                   });
  collapse_duplicates(trace.points);
  return trace;
}

std::vector<DayTrace> segment_days(const Trace& trace) {
  if (trace.points.empty())
    throw Error(errc::empty_trace, "segment_days on empty trace");

  std::vector<DayTrace> days;
  const int tz = trace.timezone_offset_minutes;
  for (const GpsPoint& p : trace.points) {
    const LocalDate d = local_date_of(p.timestamp_ms, tz);
    if (days.empty() || days.back().date != d) {
      DayTrace day;
      day.participant_id = trace.participant_id;
      day.date = d;
      days.push_back(std::move(day));
    }
    days.back().points.push_back(p);
  }
  for (DayTrace& day : days) {
    bool bin_seen[48] = {};
    for (const GpsPoint& p : day.points)
      bin_seen[ms_of_local_day(p.timestamp_ms, tz) / kMsPerBin] = true;
    int n = 0;
    for (bool b : bin_seen) n += b ? 1 : 0;
    day.coverage_fraction = double(n) / 48.0;
  }
  return days;
}

std::string trace_to_canonical_csv(const Trace& trace) {
  std::string out = "timestamp_ms,latitude,longitude,accuracy_m\n";
  for (const GpsPoint& p : trace.points) {
    out += std::to_string(p.timestamp_ms);
    out += ',';
    out += fmt_fixed(p.latitude, 7);
    out += ',';
    out += fmt_fixed(p.longitude, 7);
    out += ',';
    if (p.accuracy_m) out += fmt_fixed(*p.accuracy_m, 3);
    out += '\n';
  }
  return out;
}

std::vector<RosterEntry> parse_roster(std::string_view csv) {
  std::vector<RosterEntry> roster;
  std::set<std::string, std::less<>> seen;
  bool saw_header = false;
  std::vector<std::string_view> f;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      split_csv_line(line, f);
      if (f.size() != 3 || f[0] != "participant_id" || f[1] != "group" ||
          f[2] != "timezone_offset_minutes")
        throw Error(errc::config_invalid,
                    "roster header must be participant_id,group,timezone_offset_minutes");
      saw_header = true;
      return;
    }
    if (line.empty() || line == "\r") return;
    split_csv_line(line, f);
    if (f.size() != 3)
      throw Error(errc::config_invalid, "bad roster row: " + std::string(line));
    auto g = parse_group(f[1]);
    auto tz = parse_i64(f[2]);
    if (f[0].empty() || !g || !tz || *tz < -14 * 60 || *tz > 14 * 60)
      throw Error(errc::config_invalid, "bad roster row: " + std::string(line));
    if (!seen.insert(std::string(f[0])).second)
      throw Error(errc::config_invalid,
                  "duplicate participant in roster: " + std::string(f[0]));
    roster.push_back({std::string(f[0]), *g, int(*tz)});
  });
  if (!saw_header) throw Error(errc::config_invalid, "empty roster file");
  return roster;
}

}  // namespace mobkit
