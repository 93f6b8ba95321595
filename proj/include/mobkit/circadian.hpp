#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mobkit/ddp.hpp"
#include "mobkit/types.hpp"

namespace mobkit {

// The five nonparametric rest-activity metrics for one participant. IS, M10,
// L5 and RA are participant-level; IV is the mean of per-day values. Fields
// are empty when degenerate (e.g. RA with M10 = L5 = 0).
struct CircadianMetrics {
  std::string participant_id;
  Group group = Group::pre;
  std::optional<double> IS;
  std::optional<double> IV;
  std::optional<double> M10;
  std::optional<double> L5;
  std::optional<double> RA;
  int n_days = 0;
};

// Ratio of between-day rhythm variance to total variance, in [0, 1].
// days: one activity series per day, equal lengths. Throws insufficient_days
// (< 2 days) or degenerate_variance (all values equal).
double interdaily_stability(const std::vector<std::vector<double>>& days);

// Normalized mean squared successive difference of one day's series;
// nullopt when the day is constant (zero variance).
std::optional<double> iv_series(std::span<const double> xs);

// Mean of the defined per-day IV values; throws degenerate_variance when
// every day is constant, insufficient_days when empty.
double intradaily_variability(const std::vector<std::vector<double>>& days);

// Window means over the participant's average day: M10 = best 10 consecutive
// hours (20 bins), L5 = quietest 5 consecutive hours (10 bins). Windows do
// not wrap past midnight. pad_leading_zero prepends a zero bin so the series
// spans the full 24 h grid.
std::pair<double, double> m10_l5(const std::vector<std::vector<double>>& days,
                                 bool pad_leading_zero = false);

// (M10 - L5) / (M10 + L5); nullopt when both are zero.
std::optional<double> relative_amplitude(double m10, double l5);

CircadianMetrics circadian_metrics(const std::string& participant_id, Group group,
                                   const std::vector<std::vector<double>>& days,
                                   bool pad_leading_zero = false);

// `participant_id,group,IS,IV,M10,L5,RA,n_days`; missing values empty.
std::string circadian_to_csv(const std::vector<CircadianMetrics>& rows);
std::vector<CircadianMetrics> circadian_from_csv(std::string_view csv);

}  // namespace mobkit
