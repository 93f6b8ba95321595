#include "mobkit/analysis.hpp"

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"

namespace mobkit {

ComparisonRow group_compare(const std::string& metric, const std::string& granularity,
                            const std::vector<MetricSample>& samples) {
  std::vector<double> post, pre;
  for (const MetricSample& s : samples) {
    (s.group == Group::post ? post : pre).push_back(s.value);
  }
  if (post.size() < 2 || pre.size() < 2)
    throw Error(errc::missing_artifact,
                "metric " + metric + " missing for a group");
  ComparisonRow row;
  row.metric = metric;
  row.granularity = granularity;
  row.welch = welch_t(post, pre);
  return row;
}

std::string comparison_report_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "metric,granularity,mean_post,mean_pre,t,df,p\n";
  for (const ComparisonRow& r : rows) {
    out += r.metric;
    out += ',';
    out += r.granularity;
    out += ',';
    out += fmt_sig(r.welch.mean_a, 9);
    out += ',';
    out += fmt_sig(r.welch.mean_b, 9);
    out += ',';
    out += fmt_sig(r.welch.t_statistic, 9);
    out += ',';
    out += fmt_sig(r.welch.degrees_freedom, 9);
    out += ',';
    out += fmt_sig(r.welch.p_value, 9);
    out += '\n';
  }
  out +=
      "# note: day-granularity tests pool participant-days and ignore "
      "within-participant dependence\n";
  return out;
}

}  // namespace mobkit
