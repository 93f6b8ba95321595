#pragma once

#include <string>
#include <vector>

#include "mobkit/stats.hpp"
#include "mobkit/types.hpp"

namespace mobkit {

// One value of a named metric, tagged with its group. Granularity states
// what a value is (one participant-day or one participant).
struct MetricSample {
  double value = 0.0;
  Group group = Group::pre;
};

struct ComparisonRow {
  std::string metric;
  std::string granularity;  // "day" or "participant"
  WelchResult welch;        // mean_a = POST, mean_b = PRE
};

// Welch comparison of a metric between POST and PRE samples. Throws
// missing_artifact when either group has fewer than 2 values.
ComparisonRow group_compare(const std::string& metric, const std::string& granularity,
                            const std::vector<MetricSample>& samples);

// `metric,granularity,mean_post,mean_pre,t,df,p` with a footer note; group
// means echoed post-first.
std::string comparison_report_csv(const std::vector<ComparisonRow>& rows);

}  // namespace mobkit
