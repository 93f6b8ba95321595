#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mobkit/types.hpp"

namespace mobkit {

enum class Scenario { pre_like, post_like };

inline const char* scenario_name(Scenario s) {
  return s == Scenario::pre_like ? "PRE_LIKE" : "POST_LIKE";
}

// Place offsets in meters from the participant's home-grid origin.
struct PlaceTemplate {
  std::string name;
  double x_m = 0.0;
  double y_m = 0.0;
};

// One optional daily engagement at a place. Times are scheduled minutes of
// the local day; start/end get independent Gaussian jitter per day.
struct BlockTemplate {
  int place = 0;
  int start_min = 0;
  int end_min = 0;
  double jitter_sd_min = 0.0;
  double presence_prob = 1.0;
};

// Everything that defines how one scenario's participants move and how their
// sadness labels are produced. The label model is a logistic over the true
// daily features (places visited, fraction of the day at home, km traveled),
// which gives the prediction stage a computable ceiling.
struct ScheduleSpec {
  Scenario scenario = Scenario::pre_like;
  std::vector<PlaceTemplate> places;  // index 0 is home
  std::vector<BlockTemplate> blocks;  // in schedule order, non-overlapping
  double move_speed_mps = 1.4;
  double wander_radius_m = 50.0;  // slow stroll around the current place
  int wander_start_min = 9 * 60;
  int wander_end_min = 18 * 60;
  double noise_sd_m = 10.0;
  int duty_on_s = 60;        // GPS scans for one minute...
  int duty_period_s = 600;   // ...every ten minutes
  int sample_interval_s = 20;
  double label_intercept = 0.0;
  std::array<double, 3> label_coef{};  // places, frac_home, dist_km
  double label_participant_sd = 0.4;
};

ScheduleSpec pre_like_spec();
ScheduleSpec post_like_spec();

// Throws invalid_spec on overlapping blocks, bad indices, or places closer
// than twice the default clustering radius.
void validate_spec(const ScheduleSpec& spec);

std::string spec_to_json(const ScheduleSpec& spec);
ScheduleSpec spec_from_json(const std::string& json_text);

// Per-day ground truth recorded while generating.
struct SynthDay {
  LocalDate date = 0;
  int places_visited = 0;   // distinct places dwelt >= 600 s
  double frac_home = 0.0;   // share of the 86400 s spent staying at home
  double dist_m = 0.0;      // scheduled movement, straight-line legs
  double p_severe = 0.0;
  bool severe = false;
  int sadness_level = 0;
};

struct SynthParticipant {
  std::string id;
  Group group = Group::pre;
  Scenario scenario = Scenario::pre_like;
  int timezone_offset_minutes = 0;
  Coord home;
  double label_offset = 0.0;  // participant intercept in the label model
  std::vector<GpsPoint> points;
  std::vector<SynthDay> days;
};

struct SynthOptions {
  uint64_t seed = 1;
  LocalDate start_date = 19724;  // 2024-01-02
  int timezone_offset_minutes = -300;
};

struct Cohort {
  ScheduleSpec spec;
  std::vector<SynthParticipant> participants;
};

// Deterministic for a given seed; participant p draws from the substream
// derive_seed(seed, p). days_per_participant.size() sets the cohort size.
Cohort generate_cohort(const ScheduleSpec& spec, Group group,
                       const std::string& id_prefix,
                       const std::vector<int>& days_per_participant,
                       const SynthOptions& opts);

// n participants sharing `total_days` as evenly as possible.
std::vector<int> spread_days(size_t n_participants, size_t total_days);

// Writes the ingest-format data directory: gps/<id>.csv, roster.csv,
// survey.csv, ground-truth tables and the schedule specs as JSON.
void write_study(const std::string& dir, const std::vector<Cohort>& cohorts,
                 const SynthOptions& opts);

}  // namespace mobkit
