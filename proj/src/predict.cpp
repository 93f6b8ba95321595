#include "mobkit/predict.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"
#include "mobkit/parallel.hpp"

namespace mobkit {

namespace {

std::optional<std::array<double, kNumFeatures>> feature_vector(
    const DailyPhenotypes& r) {
  if (!r.loc_var || !r.num_pls || !r.ent_pls || !r.perc_home || !r.total_dist ||
      !r.max_dist || !r.routine_idx)
    return std::nullopt;
  return std::array<double, kNumFeatures>{
      *r.loc_var,   double(*r.num_pls), *r.ent_pls, *r.perc_home,
      *r.total_dist, *r.max_dist,        *r.routine_idx};
}

}  // namespace

ModelInput filter_cohort(const std::vector<DailyPhenotypes>& rows, Group group,
                         CohortCounts* counts) {
  std::map<std::string, size_t> severe_days;
  std::set<std::string> all_participants;
  for (const auto& r : rows) {
    if (r.group != group) continue;
    all_participants.insert(r.participant_id);
    if (r.severe_sad && *r.severe_sad) ++severe_days[r.participant_id];
  }
  std::set<std::string> eligible;
  for (const auto& [id, n] : severe_days)
    if (n >= 2) eligible.insert(id);

  if (counts) {
    counts->participants_total = all_participants.size();
    counts->participants_retained = eligible.size();
  }

  ModelInput input;
  input.group = group;
  input.participant_ids.assign(eligible.begin(), eligible.end());
  std::map<std::string, int> index;
  for (size_t i = 0; i < input.participant_ids.size(); ++i)
    index[input.participant_ids[i]] = int(i);

  for (const auto& r : rows) {
    if (r.group != group || !eligible.count(r.participant_id)) continue;
    if (!r.severe_sad) {
      ++input.dropped_rows;
      continue;
    }
    auto fv = feature_vector(r);
    if (!fv) {
      ++input.dropped_rows;
      continue;
    }
    input.x.insert(input.x.end(), fv->begin(), fv->end());
    input.y.push_back(*r.severe_sad ? 1 : 0);
    input.participant_index.push_back(index[r.participant_id]);
    input.dates.push_back(r.date);
    ++input.n_rows;
  }
  return input;
}

PredictionResult loocv_auc(const ModelInput& data, Method method,
                           const PredictOptions& opts) {
  const size_t n_p = data.participant_ids.size();
  if (n_p < 2)
    throw Error(errc::all_skipped, "need at least 2 eligible participants");

  PredictionResult result;
  result.group = data.group;
  result.method = method;

  struct FoldOutcome {
    std::optional<double> auc;
  };
  std::vector<FoldOutcome> outcomes(n_p);

  parallel_for(n_p, opts.jobs, [&](size_t fold) {
    // training = all rows of other participants, reindexed densely
    std::vector<double> xt;
    std::vector<uint8_t> yt;
    std::vector<int> pt;
    std::vector<size_t> test_rows;
    std::vector<int> dense(n_p, -1);
    int next = 0;
    for (size_t i = 0; i < data.n_rows; ++i) {
      if (size_t(data.participant_index[i]) == fold) {
        test_rows.push_back(i);
        continue;
      }
      const int p = data.participant_index[i];
      if (dense[size_t(p)] < 0) dense[size_t(p)] = next++;
      xt.insert(xt.end(), data.x.begin() + long(i * kNumFeatures),
                data.x.begin() + long((i + 1) * kNumFeatures));
      yt.push_back(data.y[i]);
      pt.push_back(dense[size_t(p)]);
    }

    bool pos = false, neg = false;
    for (size_t i : test_rows) (data.y[i] ? pos : neg) = true;
    if (!pos || !neg || yt.empty()) return;  // skipped: single-class test set

    std::vector<double> scores(test_rows.size());
    const uint64_t fold_seed = derive_seed(opts.seed, fold);
    if (method == Method::logistic) {
      const LogisticModel m = fit_logistic(xt, yt.size(), kNumFeatures, yt, pt,
                                           size_t(next), opts.logistic);
      for (size_t j = 0; j < test_rows.size(); ++j)
        scores[j] = m.predict(std::span<const double>(
            &data.x[test_rows[j] * kNumFeatures], kNumFeatures));
    } else {
      const RandomForest m =
          fit_forest(xt, yt.size(), kNumFeatures, yt, opts.forest, fold_seed);
      for (size_t j = 0; j < test_rows.size(); ++j)
        scores[j] = m.predict(std::span<const double>(
            &data.x[test_rows[j] * kNumFeatures], kNumFeatures));
    }

    std::vector<uint8_t> labels(test_rows.size());
    for (size_t j = 0; j < test_rows.size(); ++j) labels[j] = data.y[test_rows[j]];
    outcomes[fold].auc = auc_pairwise(scores, labels);
  });

  std::vector<double> aucs;
  for (size_t p = 0; p < n_p; ++p) {
    if (outcomes[p].auc) {
      result.per_participant_auc.emplace_back(data.participant_ids[p],
                                              *outcomes[p].auc);
      aucs.push_back(*outcomes[p].auc);
    } else {
      result.skipped.push_back(data.participant_ids[p]);
    }
  }
  if (aucs.empty())
    throw Error(errc::all_skipped, "every participant had a single-class test set");
  result.mean_auc = mean(aucs);
  result.sd_auc = aucs.size() > 1 ? std::sqrt(variance_sample(aucs)) : 0.0;
  return result;
}

WelchResult compare_group_auc(const PredictionResult& pre,
                              const PredictionResult& post) {
  std::vector<double> a, b;
  for (const auto& [id, auc] : pre.per_participant_auc) a.push_back(auc);
  for (const auto& [id, auc] : post.per_participant_auc) b.push_back(auc);
  return welch_t(a, b);
}

std::string predictions_csv(const std::vector<PredictionResult>& results,
                            const std::vector<ModelInput>& inputs) {
  std::string out = "method,participant_id,group,n_days,n_severe,auc\n";
  for (const auto& res : results) {
    const ModelInput* input = nullptr;
    for (const auto& in : inputs)
      if (in.group == res.group) input = &in;
    for (const auto& [id, auc] : res.per_participant_auc) {
      size_t n_days = 0, n_severe = 0;
      if (input) {
        for (size_t i = 0; i < input->n_rows; ++i) {
          if (input->participant_ids[size_t(input->participant_index[i])] != id)
            continue;
          ++n_days;
          n_severe += input->y[i];
        }
      }
      out += method_name(res.method);
      out += ',';
      out += id;
      out += ',';
      out += group_name(res.group);
      out += ',';
      out += std::to_string(n_days);
      out += ',';
      out += std::to_string(n_severe);
      out += ',';
      out += fmt_sig(auc, 9);
      out += '\n';
    }
    out += method_name(res.method);
    out += ",__summary__,";
    out += group_name(res.group);
    out += ",,,";
    out += fmt_sig(res.mean_auc, 9);
    out += '\n';
  }
  return out;
}

std::string auc_summary_csv(
    const std::vector<std::pair<PredictionResult, PredictionResult>>& pre_post,
    const std::vector<WelchResult>& comparisons) {
  std::string out = "method,auc_mean_pre,auc_sd_pre,auc_mean_post,auc_sd_post,p\n";
  for (size_t i = 0; i < pre_post.size(); ++i) {
    const auto& [pre, post] = pre_post[i];
    out += method_name(pre.method);
    out += ',';
    out += fmt_sig(pre.mean_auc, 9);
    out += ',';
    out += fmt_sig(pre.sd_auc, 9);
    out += ',';
    out += fmt_sig(post.mean_auc, 9);
    out += ',';
    out += fmt_sig(post.sd_auc, 9);
    out += ',';
    out += fmt_sig(comparisons[i].p_value, 9);
    out += '\n';
  }
  return out;
}

}  // namespace mobkit
