#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobkit/ddp.hpp"
#include "mobkit/places.hpp"
#include "mobkit/types.hpp"

namespace mobkit {

// The seven daily GPS features. Features that cannot be computed for a day
// stay empty; a bad day never aborts the run.
struct DailyPhenotypes {
  std::string participant_id;
  LocalDate date = 0;
  Group group = Group::pre;
  std::optional<double> loc_var;      // meters (sqrt of planar coordinate variance)
  std::optional<int> num_pls;         // study-level places visited this day
  std::optional<double> ent_pls;      // normalized dwell-time entropy, [0,1]
  std::optional<double> perc_home;    // share of imputed bins at home, [0,1]
  std::optional<double> total_dist;   // meters over consecutive raw points
  std::optional<double> max_dist;     // meters over the farthest point pair
  std::optional<double> routine_idx;  // cross-day bin-label agreement, [0,1]
  std::optional<bool> severe_sad;
};

inline constexpr int kMovingLabel = -1;
inline constexpr int kNoPlaceLabel = -2;

// sqrt(var(x) + var(y)) of the day's points projected about their centroid;
// nullopt below 2 points. degrees_mode skips the projection and uses raw
// degrees (replication aid).
std::optional<double> location_variance(std::span<const GpsPoint> points,
                                        bool degrees_mode = false);

// Dwell seconds per visited study cluster: the day's dwell segments, each
// attributed to the nearest study-level place.
std::vector<std::pair<int, double>> day_place_dwells(
    std::span<const GpsPoint> day_points, const std::vector<PlaceCluster>& clusters,
    const ClusterParams& params);

// Normalized entropy of dwell shares; 0 when fewer than two places.
double place_entropy(std::span<const double> dwell_seconds);

// Share of the 48 imputed bins lying within d_thresh of the home centroid.
double percent_home(const BinnedDay& imputed, const Coord& home, double d_thresh_m);

double total_distance(std::span<const GpsPoint> points);
double max_distance(std::span<const GpsPoint> points);

// Bin labels for the routine index: the nearest cluster id, kMovingLabel for
// bins entered with displacement above d_thresh, kNoPlaceLabel when the
// participant has no clusters at all.
std::array<int, kBinsPerDay> routine_labels(const BinnedDay& imputed,
                                            const std::vector<PlaceCluster>& clusters,
                                            double d_thresh_m);

// Mean share of other days carrying the same label per bin; nullopt with
// fewer than 2 days.
std::optional<double> routine_index(
    size_t day_index, const std::vector<std::array<int, kBinsPerDay>>& all_days);

struct SurveyEntry {
  std::string participant_id;
  LocalDate date = 0;
  int sadness_level = 0;  // ordinal 0-4, 3 = "quite a bit"
};

// Survey CSV `participant_id,local_date,sadness_level`; bad rows dropped and
// counted in *rejected.
std::vector<SurveyEntry> parse_survey(std::string_view csv, size_t* rejected = nullptr);

inline bool severe_sadness(int sadness_level) { return sadness_level > 3; }

using SurveyLookup = std::map<std::pair<std::string, LocalDate>, int>;
SurveyLookup survey_lookup(const std::vector<SurveyEntry>& entries);

struct ParticipantPhenotypes {
  std::vector<DailyPhenotypes> days;
  std::vector<PlaceCluster> clusters;
  std::optional<int> home_cluster;
};

// Full per-participant feature computation over the retained days: study
// clustering, home detection, all seven features, survey join.
ParticipantPhenotypes compute_daily_phenotypes(
    const std::string& participant_id, Group group, int timezone_offset_minutes,
    const std::vector<DayTrace>& days, const ClusterParams& params,
    const SurveyLookup& survey, bool loc_var_degrees = false);

// Export CSV with the seven feature columns named
// loc.var,num.pls,ent.pls,perc.home,total.dist,max.dist,routine.idx.
std::string phenotypes_to_csv(const std::vector<DailyPhenotypes>& rows);
std::vector<DailyPhenotypes> phenotypes_from_csv(std::string_view csv);

}  // namespace mobkit
