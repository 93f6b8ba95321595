#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mobkit/types.hpp"

namespace mobkit {

inline constexpr int kBinsPerDay = 48;
inline constexpr int kDdpLength = 47;  // one fewer than the bins, by differencing

// Per-bin mean coordinates of one day. Before imputation, coords are only
// meaningful where observed[i] is true; impute_bins fills the rest while
// leaving the mask untouched.
struct BinnedDay {
  std::string participant_id;
  LocalDate date = 0;
  std::array<Coord, kBinsPerDay> coords{};
  std::array<bool, kBinsPerDay> observed{};
  int observed_count = 0;
};

// 47 half-hour displacement magnitudes for one participant-day.
struct DisplacementProfile {
  std::string participant_id;
  LocalDate date = 0;
  Group group = Group::pre;
  std::array<double, kDdpLength> d{};
};

// Mean coordinate per half-hour bin; empty bins left unobserved.
BinnedDay bin_day(const DayTrace& day, int timezone_offset_minutes);

// Carry-forward imputation: each unobserved bin takes the nearest earlier
// observed coordinate; bins before the first observation take the first
// observed coordinate. Throws all_bins_absent when nothing was observed.
BinnedDay impute_bins(const BinnedDay& binned);

// nullopt when the day's coverage is below min_coverage (the caller records
// the exclusion).
std::optional<DisplacementProfile> build_ddp(const DayTrace& day, Group group,
                                             int timezone_offset_minutes,
                                             double min_coverage);

DisplacementProfile ddp_from_binned(const BinnedDay& imputed, Group group);

// Half-hour bin label: "H06a" is 6:00-6:30am, "H20b" is 8:30-9:00pm.
std::string bin_label(int bin_index);

// Plot-ready long table: participant, date, arrival-bin label, ln(1+meters).
std::string ddp_heatmap_csv(const std::vector<DisplacementProfile>& profiles);

// `participant_id,local_date,group,d00..d46`, meters at 3 decimals.
std::string ddp_to_csv(const std::vector<DisplacementProfile>& profiles);
std::vector<DisplacementProfile> ddp_from_csv(std::string_view csv);

}  // namespace mobkit
