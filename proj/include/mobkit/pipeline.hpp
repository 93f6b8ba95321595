#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobkit/analysis.hpp"
#include "mobkit/circadian.hpp"
#include "mobkit/ddp.hpp"
#include "mobkit/ingest.hpp"
#include "mobkit/pca.hpp"
#include "mobkit/phenotypes.hpp"
#include "mobkit/predict.hpp"
#include "mobkit/types.hpp"

namespace mobkit {

// Every knob of a run. Echoed into run_metadata.json so identical configs
// and inputs always reproduce identical outputs.
struct RunConfig {
  std::string data_dir;  // roster.csv, gps/<id>.csv, optional survey.csv
  std::string out_dir;
  double min_coverage = 0.5;
  double d_thresh_m = 200.0;
  double t_thresh_s = 600.0;
  double merge_distance_m = 200.0;
  double lambda = 1.0;
  int forest_trees = 200;
  int forest_mtry = 0;  // 0 = floor(sqrt(features))
  int forest_min_leaf = 1;
  uint64_t seed = 1;
  int jobs = 0;  // 0 = hardware concurrency
  int pca_components = 10;
  bool pca_on_log = false;     // fit PCA on ln(1+d) instead of raw meters
  bool pad_activity = false;   // prepend a zero bin for circadian windows
  bool loc_var_degrees = false;

  ClusterParams cluster_params() const {
    return {d_thresh_m, t_thresh_s, merge_distance_m};
  }
};

RunConfig config_from_json(const std::string& json_text);
std::string config_to_json(const RunConfig& cfg);
// Throws config_invalid when paths or ranges are unusable.
void validate_config(const RunConfig& cfg, bool needs_data_dir);

struct ParticipantData {
  std::string id;
  Group group = Group::pre;
  int timezone_offset_minutes = 0;
  std::vector<DayTrace> retained;  // coverage >= min_coverage
  size_t days_total = 0;
  size_t days_excluded = 0;
  RejectionReport rejects;
};

struct CohortData {
  std::vector<ParticipantData> participants;  // sorted by id
};

// Parses roster + per-participant GPS files, segments days, applies the
// coverage filter. gps files are read from `gps_dir` (raw data or the
// canonical artifacts of a previous ingest run).
CohortData load_cohort(const RunConfig& cfg, const std::string& gps_dir);

struct IvDailyRow {
  std::string participant_id;
  LocalDate date = 0;
  Group group = Group::pre;
  double iv = 0.0;
};

std::vector<DisplacementProfile> stage_ddp(const CohortData& cohort,
                                           const RunConfig& cfg);

struct CircadianStage {
  std::vector<CircadianMetrics> metrics;
  std::vector<IvDailyRow> iv_daily;
};
CircadianStage stage_circadian(const CohortData& cohort,
                               const std::vector<DisplacementProfile>& profiles,
                               const RunConfig& cfg);

struct PhenotypeStage {
  std::vector<DailyPhenotypes> rows;
  // participant_id,cluster_id,lat,lon,total_dwell_s,overnight_dwell_s,is_home
  std::string places_csv;
  size_t survey_rows_rejected = 0;
};
PhenotypeStage stage_phenotypes(const CohortData& cohort, const RunConfig& cfg,
                                const SurveyLookup& survey);

PcaModel stage_pca(const std::vector<DisplacementProfile>& profiles,
                   const RunConfig& cfg);

struct ScoreRow {
  std::string participant_id;
  LocalDate date = 0;
  Group group = Group::pre;
  std::vector<double> pc;
};

std::vector<ComparisonRow> stage_compare(
    const std::vector<ScoreRow>& scores,
    const std::vector<CircadianMetrics>& circadian,
    const std::vector<IvDailyRow>& iv_daily,
    const std::vector<DailyPhenotypes>& phenotypes);

struct PredictStage {
  std::vector<ModelInput> inputs;  // one per group present
  std::vector<PredictionResult> results;
  std::vector<std::pair<PredictionResult, PredictionResult>> pre_post;  // per method
  std::vector<WelchResult> comparisons;
  CohortCounts counts_pre, counts_post;
  bool ran = false;
  std::string skip_reason;
};
PredictStage stage_predict(const std::vector<DailyPhenotypes>& phenotypes,
                           const RunConfig& cfg);

std::string iv_daily_to_csv(const std::vector<IvDailyRow>& rows);
std::vector<IvDailyRow> iv_daily_from_csv(std::string_view csv);
std::vector<ScoreRow> scores_from_csv(std::string_view csv);

struct PipelineResult {
  std::vector<std::pair<std::string, double>> stage_seconds;
  double total_seconds = 0.0;
  double predict_seconds = 0.0;
  size_t n_participants = 0;
  size_t n_days_retained = 0;
};

// The full chain, in memory, writing every artifact into cfg.out_dir.
PipelineResult run_pipeline(const RunConfig& cfg);

// Individual commands; each reads its upstream artifacts and writes its own.
void cmd_ingest(const RunConfig& cfg);
void cmd_ddp(const RunConfig& cfg);
void cmd_circadian(const RunConfig& cfg);
void cmd_pca(const RunConfig& cfg);
void cmd_phenotypes(const RunConfig& cfg);
void cmd_compare(const RunConfig& cfg);
void cmd_predict(const RunConfig& cfg);

}  // namespace mobkit
