#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mobkit/types.hpp"

namespace mobkit {

struct RejectionReport {
  size_t rows_read = 0;       // data rows seen (header excluded)
  size_t rows_rejected = 0;   // dropped, by reason below
  size_t bad_coordinate = 0;  // latitude/longitude out of range
  size_t bad_timestamp = 0;   // non-positive or unparseable timestamp
  size_t bad_field = 0;       // wrong column count / unparseable numerics
};

// Parses a raw GPS CSV (`timestamp_ms,latitude,longitude,accuracy_m`; the
// accuracy column may be absent per row or from the header entirely).
// Invalid rows are dropped and counted, never fatal. Throws malformed_header
// or empty_trace.
Trace parse_trace(std::string_view csv, std::string participant_id, Group group,
                  int timezone_offset_minutes, RejectionReport* report = nullptr);

// Splits a trace into local calendar days; days with zero points are omitted.
// Throws empty_trace on an empty input.
std::vector<DayTrace> segment_days(const Trace& trace);

// Canonical form: integer timestamps, coordinates at 7 decimal places.
// Re-parsing the output yields an identical trace.
std::string trace_to_canonical_csv(const Trace& trace);

struct RosterEntry {
  std::string participant_id;
  Group group = Group::pre;
  int timezone_offset_minutes = 0;
};

// Roster CSV: `participant_id,group,timezone_offset_minutes`. Throws
// config_invalid on a bad header, bad row, or duplicate participant.
std::vector<RosterEntry> parse_roster(std::string_view csv);

}  // namespace mobkit
