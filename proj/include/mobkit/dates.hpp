#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace mobkit {

// Calendar day in the participant's local clock, as days since 1970-01-01.
using LocalDate = int32_t;

inline constexpr int64_t kMsPerDay = 86'400'000;
inline constexpr int64_t kMsPerBin = 1'800'000;  // 30 minutes

inline int64_t local_ms(int64_t timestamp_ms, int tz_offset_minutes) {
  return timestamp_ms + int64_t(tz_offset_minutes) * 60'000;
}

inline LocalDate local_date_of(int64_t timestamp_ms, int tz_offset_minutes) {
  int64_t lms = local_ms(timestamp_ms, tz_offset_minutes);
  int64_t d = lms / kMsPerDay;
  if (lms < 0 && lms % kMsPerDay != 0) --d;  // floor for pre-epoch times
  return static_cast<LocalDate>(d);
}

// Milliseconds into the local day, in [0, kMsPerDay).
inline int64_t ms_of_local_day(int64_t timestamp_ms, int tz_offset_minutes) {
  int64_t lms = local_ms(timestamp_ms, tz_offset_minutes);
  int64_t m = lms % kMsPerDay;
  if (m < 0) m += kMsPerDay;
  return m;
}

inline std::string date_to_string(LocalDate d) {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{d}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

inline std::optional<LocalDate> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y, m, d;
  if (std::sscanf(std::string(s).c_str(), "%d-%d-%d", &y, &m, &d) != 3)
    return std::nullopt;
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{unsigned(m)}, day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  return static_cast<LocalDate>(sys_days{ymd}.time_since_epoch().count());
}

}  // namespace mobkit
