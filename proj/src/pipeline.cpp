#include "mobkit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"
#include "mobkit/parallel.hpp"
#include "mobkit/version.hpp"

namespace mobkit {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

json config_json(const RunConfig& c) {
  json j;
  j["data_dir"] = c.data_dir;
  j["out_dir"] = c.out_dir;
  j["min_coverage"] = c.min_coverage;
  j["d_thresh_m"] = c.d_thresh_m;
  j["t_thresh_s"] = c.t_thresh_s;
  j["merge_distance_m"] = c.merge_distance_m;
  j["lambda"] = c.lambda;
  j["forest_trees"] = c.forest_trees;
  j["forest_mtry"] = c.forest_mtry;
  j["forest_min_leaf"] = c.forest_min_leaf;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["pca_components"] = c.pca_components;
  j["pca_on_log"] = c.pca_on_log;
  j["pad_activity"] = c.pad_activity;
  j["loc_var_degrees"] = c.loc_var_degrees;
  return j;
}

// Read-modify-write of the shared run metadata; nlohmann objects serialize
// with sorted keys, so the file is byte-stable for identical content.
void update_metadata(const RunConfig& cfg, const std::string& section,
                     const json& fragment) {
  const std::string path = cfg.out_dir + "/run_metadata.json";
  json meta;
  if (file_exists(path)) {
    try {
      meta = json::parse(read_file(path));
    } catch (const json::exception&) {
      meta = json::object();
    }
  }
  meta["tool"] = {{"name", "mobkit"},
                  {"version", kVersion},
                  {"format_version", kFormatVersion}};
  meta["config"] = config_json(cfg);
  meta[section] = fragment;
  write_file(path, meta.dump(2) + "\n");
}

void require_artifact(const std::string& path) {
  if (!file_exists(path))
    throw Error(errc::missing_artifact, "missing upstream artifact: " + path);
}

}  // namespace

RunConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(errc::config_invalid, std::string("bad config json: ") + e.what());
  }
  RunConfig c;
  try {
    if (j.contains("data_dir")) c.data_dir = j["data_dir"];
    if (j.contains("out_dir")) c.out_dir = j["out_dir"];
    if (j.contains("min_coverage")) c.min_coverage = j["min_coverage"];
    if (j.contains("d_thresh_m")) c.d_thresh_m = j["d_thresh_m"];
    if (j.contains("t_thresh_s")) c.t_thresh_s = j["t_thresh_s"];
    if (j.contains("merge_distance_m")) c.merge_distance_m = j["merge_distance_m"];
    if (j.contains("lambda")) c.lambda = j["lambda"];
    if (j.contains("forest_trees")) c.forest_trees = j["forest_trees"];
    if (j.contains("forest_mtry")) c.forest_mtry = j["forest_mtry"];
    if (j.contains("forest_min_leaf")) c.forest_min_leaf = j["forest_min_leaf"];
    if (j.contains("seed")) c.seed = j["seed"];
    if (j.contains("jobs")) c.jobs = j["jobs"];
    if (j.contains("pca_components")) c.pca_components = j["pca_components"];
    if (j.contains("pca_on_log")) c.pca_on_log = j["pca_on_log"];
    if (j.contains("pad_activity")) c.pad_activity = j["pad_activity"];
    if (j.contains("loc_var_degrees")) c.loc_var_degrees = j["loc_var_degrees"];
  } catch (const json::exception& e) {
    throw Error(errc::config_invalid, std::string("bad config value: ") + e.what());
  }
  return c;
}

std::string config_to_json(const RunConfig& cfg) {
  return config_json(cfg).dump(2) + "\n";
}

void validate_config(const RunConfig& cfg, bool needs_data_dir) {
  auto fail = [](const std::string& why) { throw Error(errc::config_invalid, why); };
  if (cfg.out_dir.empty()) fail("out_dir is required");
  if (needs_data_dir) {
    if (cfg.data_dir.empty()) fail("data_dir is required");
    if (!file_exists(cfg.data_dir + "/roster.csv"))
      fail("roster file not found: " + cfg.data_dir + "/roster.csv");
  }
  if (cfg.min_coverage < 0.0 || cfg.min_coverage > 1.0)
    fail("min_coverage must be in [0,1]");
  if (cfg.d_thresh_m <= 0.0 || cfg.t_thresh_s <= 0.0 || cfg.merge_distance_m <= 0.0)
    fail("clustering thresholds must be positive");
  if (cfg.lambda < 0.0) fail("lambda must be non-negative");
  if (cfg.forest_trees < 1 || cfg.forest_min_leaf < 1) fail("bad forest params");
  if (cfg.pca_components < 1 || cfg.pca_components > kDdpLength)
    fail("pca_components must be in [1,47]");
}

CohortData load_cohort(const RunConfig& cfg, const std::string& gps_dir) {
  const std::string roster_path = cfg.data_dir + "/roster.csv";
  if (!file_exists(roster_path))
    throw Error(errc::config_invalid, "roster file not found: " + roster_path);
  std::vector<RosterEntry> roster = parse_roster(read_file(roster_path));
  std::sort(roster.begin(), roster.end(),
            [](const RosterEntry& a, const RosterEntry& b) {
              return a.participant_id < b.participant_id;
            });

  CohortData cohort;
  cohort.participants.resize(roster.size());
  std::vector<std::string> errors(roster.size());
  parallel_for(roster.size(), cfg.jobs, [&](size_t i) {
    const RosterEntry& entry = roster[i];
    ParticipantData& pd = cohort.participants[i];
    pd.id = entry.participant_id;
    pd.group = entry.group;
    pd.timezone_offset_minutes = entry.timezone_offset_minutes;
    const std::string path = gps_dir + "/" + entry.participant_id + ".csv";
    try {
      if (!file_exists(path))
        throw Error(errc::missing_artifact, "no GPS file: " + path);
      const Trace trace = parse_trace(read_file(path), entry.participant_id,
                                      entry.group, entry.timezone_offset_minutes,
                                      &pd.rejects);
      for (DayTrace& day : segment_days(trace)) {
        ++pd.days_total;
        if (day.coverage_fraction >= cfg.min_coverage)
          pd.retained.push_back(std::move(day));
        else
          ++pd.days_excluded;
      }
    } catch (const Error& e) {
      errors[i] = std::string(errc_name(e.code())) + ": " + e.what();
    }
  });
  for (size_t i = 0; i < roster.size(); ++i)
    if (!errors[i].empty())
      throw Error(errc::empty_trace,
                  "participant " + roster[i].participant_id + ": " + errors[i]);
  return cohort;
}

std::vector<DisplacementProfile> stage_ddp(const CohortData& cohort,
                                           const RunConfig& cfg) {
  std::vector<std::vector<DisplacementProfile>> per(cohort.participants.size());
  parallel_for(cohort.participants.size(), cfg.jobs, [&](size_t i) {
    const ParticipantData& pd = cohort.participants[i];
    for (const DayTrace& day : pd.retained) {
      auto ddp = build_ddp(day, pd.group, pd.timezone_offset_minutes,
                           cfg.min_coverage);
      if (ddp) per[i].push_back(std::move(*ddp));
    }
  });
  std::vector<DisplacementProfile> all;
  for (auto& v : per)
    for (auto& p : v) all.push_back(std::move(p));
  return all;
}

CircadianStage stage_circadian(const CohortData& cohort,
                               const std::vector<DisplacementProfile>& profiles,
                               const RunConfig& cfg) {
  std::map<std::string, std::vector<const DisplacementProfile*>> by_id;
  for (const auto& p : profiles) by_id[p.participant_id].push_back(&p);

  CircadianStage out;
  for (const ParticipantData& pd : cohort.participants) {
    auto it = by_id.find(pd.id);
    if (it == by_id.end()) continue;
    std::vector<std::vector<double>> days;
    days.reserve(it->second.size());
    for (const DisplacementProfile* p : it->second) {
      std::vector<double> series(p->d.begin(), p->d.end());
      days.push_back(std::move(series));
      if (auto iv = iv_series(days.back()))
        out.iv_daily.push_back({pd.id, p->date, pd.group, *iv});
    }
    out.metrics.push_back(
        circadian_metrics(pd.id, pd.group, days, cfg.pad_activity));
  }
  return out;
}

PhenotypeStage stage_phenotypes(const CohortData& cohort, const RunConfig& cfg,
                                const SurveyLookup& survey) {
  PhenotypeStage out;
  const ClusterParams params = cfg.cluster_params();
  std::vector<ParticipantPhenotypes> per(cohort.participants.size());
  parallel_for(cohort.participants.size(), cfg.jobs, [&](size_t i) {
    const ParticipantData& pd = cohort.participants[i];
    per[i] = compute_daily_phenotypes(pd.id, pd.group, pd.timezone_offset_minutes,
                                      pd.retained, params, survey,
                                      cfg.loc_var_degrees);
  });

  std::string places =
      "participant_id,cluster_id,latitude,longitude,total_dwell_s,"
      "overnight_dwell_s,is_home\n";
  for (size_t i = 0; i < per.size(); ++i) {
    for (auto& row : per[i].days) out.rows.push_back(std::move(row));
    for (const PlaceCluster& c : per[i].clusters) {
      places += cohort.participants[i].id;
      places += ',';
      places += std::to_string(c.cluster_id);
      places += ',';
      places += fmt_fixed(c.centroid.lat, 7);
      places += ',';
      places += fmt_fixed(c.centroid.lon, 7);
      places += ',';
      places += fmt_fixed(c.total_dwell_s, 1);
      places += ',';
      places += fmt_fixed(c.overnight_dwell_s, 1);
      places += ',';
      places += (per[i].home_cluster && *per[i].home_cluster == c.cluster_id)
                    ? '1'
                    : '0';
      places += '\n';
    }
  }
  out.places_csv = std::move(places);
  return out;
}

PcaModel stage_pca(const std::vector<DisplacementProfile>& profiles,
                   const RunConfig& cfg) {
  if (profiles.size() < 2)
    throw Error(errc::insufficient_days, "PCA needs at least 2 profiles");
  std::vector<double> matrix(profiles.size() * kDdpLength);
  for (size_t r = 0; r < profiles.size(); ++r)
    for (int c = 0; c < kDdpLength; ++c)
      matrix[r * kDdpLength + size_t(c)] =
          cfg.pca_on_log ? std::log1p(profiles[r].d[size_t(c)])
                         : profiles[r].d[size_t(c)];
  return pca_fit(matrix, profiles.size(), kDdpLength, cfg.pca_components);
}

std::vector<ComparisonRow> stage_compare(
    const std::vector<ScoreRow>& scores,
    const std::vector<CircadianMetrics>& circadian,
    const std::vector<IvDailyRow>& iv_daily,
    const std::vector<DailyPhenotypes>& phenotypes) {
  std::vector<ComparisonRow> rows;
  auto add = [&](const std::string& metric, const std::string& granularity,
                 const std::vector<MetricSample>& samples) {
    try {
      rows.push_back(group_compare(metric, granularity, samples));
    } catch (const Error&) {
      // metric missing for a group; leave it out of the report
    }
  };

  const size_t n_pcs = scores.empty() ? 0 : scores.front().pc.size();
  for (size_t j = 0; j < n_pcs; ++j) {
    std::vector<MetricSample> samples;
    samples.reserve(scores.size());
    for (const ScoreRow& s : scores) samples.push_back({s.pc[j], s.group});
    add("PC" + std::to_string(j + 1), "day", samples);
  }

  auto circ_metric = [&](const std::string& name, auto getter) {
    std::vector<MetricSample> samples;
    for (const CircadianMetrics& m : circadian)
      if (auto v = getter(m)) samples.push_back({*v, m.group});
    add(name, "participant", samples);
  };
  circ_metric("IS", [](const CircadianMetrics& m) { return m.IS; });
  {
    std::vector<MetricSample> samples;
    for (const IvDailyRow& r : iv_daily) samples.push_back({r.iv, r.group});
    add("IV", "day", samples);
  }
  circ_metric("IV.participant", [](const CircadianMetrics& m) { return m.IV; });
  circ_metric("M10", [](const CircadianMetrics& m) { return m.M10; });
  circ_metric("L5", [](const CircadianMetrics& m) { return m.L5; });
  circ_metric("RA", [](const CircadianMetrics& m) { return m.RA; });

  auto pheno_metric = [&](const std::string& name, auto getter) {
    std::vector<MetricSample> samples;
    for (const DailyPhenotypes& r : phenotypes)
      if (auto v = getter(r)) samples.push_back({*v, r.group});
    add(name, "day", samples);
  };
  pheno_metric("loc.var", [](const DailyPhenotypes& r) { return r.loc_var; });
  pheno_metric("num.pls", [](const DailyPhenotypes& r) {
    return r.num_pls ? std::optional<double>(double(*r.num_pls)) : std::nullopt;
  });
  pheno_metric("ent.pls", [](const DailyPhenotypes& r) { return r.ent_pls; });
  pheno_metric("perc.home", [](const DailyPhenotypes& r) { return r.perc_home; });
  pheno_metric("total.dist", [](const DailyPhenotypes& r) { return r.total_dist; });
  pheno_metric("max.dist", [](const DailyPhenotypes& r) { return r.max_dist; });
  pheno_metric("routine.idx", [](const DailyPhenotypes& r) { return r.routine_idx; });
  return rows;
}

PredictStage stage_predict(const std::vector<DailyPhenotypes>& phenotypes,
                           const RunConfig& cfg) {
  PredictStage out;
  bool any_label = false;
  for (const auto& r : phenotypes)
    if (r.severe_sad) any_label = true;
  if (!any_label) {
    out.skip_reason = "no sadness labels joined (survey absent or empty)";
    return out;
  }

  ModelInput pre = filter_cohort(phenotypes, Group::pre, &out.counts_pre);
  ModelInput post = filter_cohort(phenotypes, Group::post, &out.counts_post);

  PredictOptions opts;
  opts.logistic.lambda = cfg.lambda;
  opts.forest.n_trees = cfg.forest_trees;
  opts.forest.mtry = cfg.forest_mtry;
  opts.forest.min_leaf = cfg.forest_min_leaf;
  opts.seed = cfg.seed;
  opts.jobs = cfg.jobs;

  for (Method method : {Method::logistic, Method::forest}) {
    PredictionResult rp = loocv_auc(pre, method, opts);
    PredictionResult rq = loocv_auc(post, method, opts);
    out.comparisons.push_back(compare_group_auc(rp, rq));
    out.pre_post.emplace_back(rp, rq);
    out.results.push_back(std::move(rp));
    out.results.push_back(std::move(rq));
  }
  out.inputs.push_back(std::move(pre));
  out.inputs.push_back(std::move(post));
  out.ran = true;
  return out;
}

std::string iv_daily_to_csv(const std::vector<IvDailyRow>& rows) {
  std::string out = "participant_id,local_date,group,IV\n";
  for (const auto& r : rows) {
    out += r.participant_id;
    out += ',';
    out += date_to_string(r.date);
    out += ',';
    out += group_name(r.group);
    out += ',';
    out += fmt_sig(r.iv, 9);
    out += '\n';
  }
  return out;
}

std::vector<IvDailyRow> iv_daily_from_csv(std::string_view csv) {
  std::vector<IvDailyRow> out;
  bool saw_header = false;
  std::vector<std::string_view> f;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      saw_header = true;
      return;
    }
    if (line.empty()) return;
    split_csv_line(line, f);
    if (f.size() != 4) throw Error(errc::malformed_header, "bad IV row");
    auto date = parse_date(f[1]);
    auto g = parse_group(f[2]);
    auto v = parse_f64(f[3]);
    if (!date || !g || !v) throw Error(errc::malformed_header, "bad IV row");
    out.push_back({std::string(f[0]), *date, *g, *v});
  });
  return out;
}

std::vector<ScoreRow> scores_from_csv(std::string_view csv) {
  std::vector<ScoreRow> out;
  bool saw_header = false;
  size_t n_pcs = 0;
  std::vector<std::string_view> f;
  for_each_line(csv, [&](std::string_view line) {
    if (!saw_header) {
      split_csv_line(line, f);
      if (f.size() < 4) throw Error(errc::malformed_header, "bad scores header");
      n_pcs = f.size() - 3;
      saw_header = true;
      return;
    }
    if (line.empty()) return;
    split_csv_line(line, f);
    if (f.size() != 3 + n_pcs)
      throw Error(errc::malformed_header, "bad scores row");
    ScoreRow r;
    r.participant_id = std::string(f[0]);
    auto date = parse_date(f[1]);
    auto g = parse_group(f[2]);
    if (!date || !g) throw Error(errc::malformed_header, "bad scores row");
    r.date = *date;
    r.group = *g;
    for (size_t j = 0; j < n_pcs; ++j) {
      auto v = parse_f64(f[3 + j]);
      if (!v) throw Error(errc::malformed_header, "bad score value");
      r.pc.push_back(*v);
    }
    out.push_back(std::move(r));
  });
  return out;
}

// --- shared stage writers --------------------------------------------------

namespace {

std::string ingest_report_csv(const CohortData& cohort) {
  std::string out =
      "participant_id,rows_read,rows_rejected,days_total,days_retained,"
      "days_excluded\n";
  for (const ParticipantData& pd : cohort.participants) {
    out += pd.id;
    out += ',';
    out += std::to_string(pd.rejects.rows_read);
    out += ',';
    out += std::to_string(pd.rejects.rows_rejected);
    out += ',';
    out += std::to_string(pd.days_total);
    out += ',';
    out += std::to_string(pd.retained.size());
    out += ',';
    out += std::to_string(pd.days_excluded);
    out += '\n';
  }
  return out;
}

json ingest_fragment(const CohortData& cohort) {
  size_t days_total = 0, retained = 0, rejected = 0;
  for (const auto& pd : cohort.participants) {
    days_total += pd.days_total;
    retained += pd.retained.size();
    rejected += pd.rejects.rows_rejected;
  }
  return json{{"participants", cohort.participants.size()},
              {"days_total", days_total},
              {"days_retained", retained},
              {"rows_rejected", rejected}};
}

void write_canonical_traces(const CohortData& cohort, const RunConfig& cfg) {
  ensure_dir(cfg.out_dir + "/canonical");
  parallel_for(cohort.participants.size(), cfg.jobs, [&](size_t i) {
    const ParticipantData& pd = cohort.participants[i];
    Trace trace;
    trace.participant_id = pd.id;
    trace.group = pd.group;
    trace.timezone_offset_minutes = pd.timezone_offset_minutes;
    for (const DayTrace& day : pd.retained)
      trace.points.insert(trace.points.end(), day.points.begin(),
                          day.points.end());
    write_file(cfg.out_dir + "/canonical/" + pd.id + ".csv",
               trace_to_canonical_csv(trace));
  });
}

SurveyLookup load_survey(const RunConfig& cfg, size_t* rejected) {
  const std::string path = cfg.data_dir + "/survey.csv";
  if (!file_exists(path)) return {};
  return survey_lookup(parse_survey(read_file(path), rejected));
}

void write_ddp_outputs(const RunConfig& cfg,
                       const std::vector<DisplacementProfile>& profiles) {
  write_file(cfg.out_dir + "/ddp.csv", ddp_to_csv(profiles));
  write_file(cfg.out_dir + "/heatmap.csv", ddp_heatmap_csv(profiles));
  update_metadata(cfg, "ddp", json{{"profiles", profiles.size()}});
}

void write_circadian_outputs(const RunConfig& cfg, const CircadianStage& st) {
  write_file(cfg.out_dir + "/circadian.csv", circadian_to_csv(st.metrics));
  write_file(cfg.out_dir + "/iv_daily.csv", iv_daily_to_csv(st.iv_daily));
  update_metadata(cfg, "circadian",
                  json{{"participants", st.metrics.size()},
                       {"iv_days", st.iv_daily.size()}});
}

void write_pca_outputs(const RunConfig& cfg, const PcaModel& model,
                       const std::vector<DisplacementProfile>& profiles) {
  write_file(cfg.out_dir + "/pca_loadings.csv", pca_loadings_csv(model));
  write_file(cfg.out_dir + "/pca_summary.csv", pca_summary_csv(model));
  write_file(cfg.out_dir + "/pca_scores.csv", pca_scores_csv(model, profiles));
  update_metadata(
      cfg, "pca",
      json{{"components", model.k},
           {"rows", model.n_rows},
           {"cumulative_ratio_10", model.cumulative_ratio(10)},
           {"cumulative_ratio_20", model.cumulative_ratio(20)},
           {"cumulative_ratio_30", model.cumulative_ratio(30)}});
}

void write_phenotype_outputs(const RunConfig& cfg, const PhenotypeStage& st) {
  write_file(cfg.out_dir + "/phenotypes.csv", phenotypes_to_csv(st.rows));
  write_file(cfg.out_dir + "/places.csv", st.places_csv);
  update_metadata(cfg, "phenotypes",
                  json{{"rows", st.rows.size()},
                       {"survey_rows_rejected", st.survey_rows_rejected}});
}

void write_compare_outputs(const RunConfig& cfg,
                           const std::vector<ComparisonRow>& rows) {
  write_file(cfg.out_dir + "/compare.csv", comparison_report_csv(rows));
  update_metadata(cfg, "compare", json{{"rows", rows.size()}});
}

void write_predict_outputs(const RunConfig& cfg, const PredictStage& st) {
  if (!st.ran) {
    update_metadata(cfg, "predict", json{{"skipped", st.skip_reason}});
    return;
  }
  write_file(cfg.out_dir + "/predictions.csv",
             predictions_csv(st.results, st.inputs));
  write_file(cfg.out_dir + "/auc_summary.csv",
             auc_summary_csv(st.pre_post, st.comparisons));
  json frag{{"eligible_pre", st.counts_pre.participants_retained},
            {"total_pre", st.counts_pre.participants_total},
            {"eligible_post", st.counts_post.participants_retained},
            {"total_post", st.counts_post.participants_total},
            {"seed", cfg.seed},
            {"lambda", cfg.lambda},
            {"forest_trees", cfg.forest_trees},
            {"forest_mtry", cfg.forest_mtry},
            {"forest_min_leaf", cfg.forest_min_leaf}};
  update_metadata(cfg, "predict", frag);
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
  validate_config(cfg, true);
  ensure_dir(cfg.out_dir);
  PipelineResult result;
  const auto t_start = std::chrono::steady_clock::now();
  auto t0 = t_start;
  auto lap = [&](const char* stage) {
    result.stage_seconds.emplace_back(stage, seconds_since(t0));
    t0 = std::chrono::steady_clock::now();
  };

  const CohortData cohort = load_cohort(cfg, cfg.data_dir + "/gps");
  write_canonical_traces(cohort, cfg);
  write_file(cfg.out_dir + "/ingest_report.csv", ingest_report_csv(cohort));
  update_metadata(cfg, "ingest", ingest_fragment(cohort));
  result.n_participants = cohort.participants.size();
  for (const auto& pd : cohort.participants)
    result.n_days_retained += pd.retained.size();
  lap("ingest");

  const std::vector<DisplacementProfile> profiles = stage_ddp(cohort, cfg);
  write_ddp_outputs(cfg, profiles);
  lap("ddp");

  const CircadianStage circ = stage_circadian(cohort, profiles, cfg);
  write_circadian_outputs(cfg, circ);
  lap("circadian");

  const PcaModel model = stage_pca(profiles, cfg);
  write_pca_outputs(cfg, model, profiles);
  lap("pca");

  size_t survey_rejected = 0;
  const SurveyLookup survey = load_survey(cfg, &survey_rejected);
  PhenotypeStage pheno = stage_phenotypes(cohort, cfg, survey);
  pheno.survey_rows_rejected = survey_rejected;
  write_phenotype_outputs(cfg, pheno);
  lap("phenotypes");

  std::vector<ScoreRow> scores;
  scores.reserve(profiles.size());
  for (size_t r = 0; r < profiles.size(); ++r) {
    ScoreRow row;
    row.participant_id = profiles[r].participant_id;
    row.date = profiles[r].date;
    row.group = profiles[r].group;
    for (int j = 0; j < model.k; ++j) row.pc.push_back(model.score(r, j));
    scores.push_back(std::move(row));
  }
  write_compare_outputs(
      cfg, stage_compare(scores, circ.metrics, circ.iv_daily, pheno.rows));
  lap("compare");

  const PredictStage pred = stage_predict(pheno.rows, cfg);
  write_predict_outputs(cfg, pred);
  lap("predict");
  result.predict_seconds = result.stage_seconds.back().second;

  result.total_seconds = seconds_since(t_start);
  return result;
}

void cmd_ingest(const RunConfig& cfg) {
  validate_config(cfg, true);
  ensure_dir(cfg.out_dir);
  const CohortData cohort = load_cohort(cfg, cfg.data_dir + "/gps");
  write_canonical_traces(cohort, cfg);
  write_file(cfg.out_dir + "/ingest_report.csv", ingest_report_csv(cohort));
  update_metadata(cfg, "ingest", ingest_fragment(cohort));
}

void cmd_ddp(const RunConfig& cfg) {
  validate_config(cfg, true);
  ensure_dir(cfg.out_dir);
  require_artifact(cfg.out_dir + "/canonical");
  const CohortData cohort = load_cohort(cfg, cfg.out_dir + "/canonical");
  write_ddp_outputs(cfg, stage_ddp(cohort, cfg));
}

void cmd_circadian(const RunConfig& cfg) {
  validate_config(cfg, false);
  ensure_dir(cfg.out_dir);
  require_artifact(cfg.out_dir + "/ddp.csv");
  const auto profiles = ddp_from_csv(read_file(cfg.out_dir + "/ddp.csv"));

  // group ddp rows back into a cohort-shaped view
  CohortData cohort;
  std::map<std::string, size_t> index;
  for (const auto& p : profiles) {
    if (!index.count(p.participant_id)) {
      index[p.participant_id] = cohort.participants.size();
      ParticipantData pd;
      pd.id = p.participant_id;
      pd.group = p.group;
      cohort.participants.push_back(std::move(pd));
    }
  }
  write_circadian_outputs(cfg, stage_circadian(cohort, profiles, cfg));
}

void cmd_pca(const RunConfig& cfg) {
  validate_config(cfg, false);
  ensure_dir(cfg.out_dir);
  require_artifact(cfg.out_dir + "/ddp.csv");
  const auto profiles = ddp_from_csv(read_file(cfg.out_dir + "/ddp.csv"));
  write_pca_outputs(cfg, stage_pca(profiles, cfg), profiles);
}

void cmd_phenotypes(const RunConfig& cfg) {
  validate_config(cfg, true);
  ensure_dir(cfg.out_dir);
  require_artifact(cfg.out_dir + "/canonical");
  const CohortData cohort = load_cohort(cfg, cfg.out_dir + "/canonical");
  size_t survey_rejected = 0;
  const SurveyLookup survey = load_survey(cfg, &survey_rejected);
  PhenotypeStage st = stage_phenotypes(cohort, cfg, survey);
  st.survey_rows_rejected = survey_rejected;
  write_phenotype_outputs(cfg, st);
}

void cmd_compare(const RunConfig& cfg) {
  validate_config(cfg, false);
  ensure_dir(cfg.out_dir);
  require_artifact(cfg.out_dir + "/pca_scores.csv");
  require_artifact(cfg.out_dir + "/circadian.csv");
  require_artifact(cfg.out_dir + "/iv_daily.csv");
  require_artifact(cfg.out_dir + "/phenotypes.csv");
  const auto scores = scores_from_csv(read_file(cfg.out_dir + "/pca_scores.csv"));
  const auto circadian =
      circadian_from_csv(read_file(cfg.out_dir + "/circadian.csv"));
  const auto iv_daily = iv_daily_from_csv(read_file(cfg.out_dir + "/iv_daily.csv"));
  const auto phenotypes =
      phenotypes_from_csv(read_file(cfg.out_dir + "/phenotypes.csv"));
  write_compare_outputs(cfg,
                        stage_compare(scores, circadian, iv_daily, phenotypes));
}

void cmd_predict(const RunConfig& cfg) {
  validate_config(cfg, false);
  ensure_dir(cfg.out_dir);
  require_artifact(cfg.out_dir + "/phenotypes.csv");
  const auto phenotypes =
      phenotypes_from_csv(read_file(cfg.out_dir + "/phenotypes.csv"));
  write_predict_outputs(cfg, stage_predict(phenotypes, cfg));
}

}  // namespace mobkit
