#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobkit/forest.hpp"
#include "mobkit/logistic.hpp"
#include "mobkit/phenotypes.hpp"
#include "mobkit/stats.hpp"

namespace mobkit {

inline constexpr size_t kNumFeatures = 7;
inline constexpr const char* kFeatureNames[kNumFeatures] = {
    "loc.var", "num.pls", "ent.pls", "perc.home",
    "total.dist", "max.dist", "routine.idx"};

// Labeled feature rows for one group. Rows with any missing feature or
// missing label are dropped at construction and counted.
struct ModelInput {
  Group group = Group::pre;
  size_t n_rows = 0;
  std::vector<double> x;  // n_rows x kNumFeatures, feature order as above
  std::vector<uint8_t> y;
  std::vector<int> participant_index;        // into participant_ids
  std::vector<std::string> participant_ids;  // sorted, fold order
  std::vector<LocalDate> dates;              // per row, for joins
  size_t dropped_rows = 0;
};

struct CohortCounts {
  size_t participants_total = 0;
  size_t participants_retained = 0;
};

// Keeps participants reporting severe sadness on at least two days.
// Labeled days of other participants are dropped. Counts are echoed for
// comparison against the study-scale retention numbers.
ModelInput filter_cohort(const std::vector<DailyPhenotypes>& rows, Group group,
                         CohortCounts* counts = nullptr);

enum class Method { logistic, forest };

inline const char* method_name(Method m) {
  return m == Method::logistic ? "logistic" : "forest";
}

struct PredictionResult {
  Group group = Group::pre;
  Method method = Method::logistic;
  std::vector<std::pair<std::string, double>> per_participant_auc;
  double mean_auc = 0.0;
  double sd_auc = 0.0;  // sample sd over participants
  std::vector<std::string> skipped;  // single-class test sets
};

struct PredictOptions {
  LogisticOptions logistic;
  ForestParams forest;
  uint64_t seed = 1;
  int jobs = 1;
};

// Leave-one-participant-out: per fold, fit on every other participant's rows
// (standardization inside the fit sees only those rows) and score the held-out
// participant; AUC by the pairwise formulation. Throws all_skipped when no
// participant yields a two-class test set.
PredictionResult loocv_auc(const ModelInput& data, Method method,
                           const PredictOptions& opts);

// Welch test between the two sets of per-participant AUCs (pre first).
WelchResult compare_group_auc(const PredictionResult& pre,
                              const PredictionResult& post);

// Per-participant report rows: method,participant_id,group,n_days,n_severe,auc
std::string predictions_csv(const std::vector<PredictionResult>& results,
                            const std::vector<ModelInput>& inputs);
// method,auc_mean_pre,auc_sd_pre,auc_mean_post,auc_sd_post,p
std::string auc_summary_csv(
    const std::vector<std::pair<PredictionResult, PredictionResult>>& pre_post,
    const std::vector<WelchResult>& comparisons);

}  // namespace mobkit
