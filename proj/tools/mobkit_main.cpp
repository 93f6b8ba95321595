#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"
#include "mobkit/pipeline.hpp"
#include "mobkit/synth.hpp"
#include "mobkit/version.hpp"

namespace {

using mobkit::RunConfig;

// Flags override config-file values; only flags the user actually passed win.
void add_config_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--data", cfg.data_dir, "input data directory");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--min-coverage", cfg.min_coverage,
                  "minimum fraction of observed half-hour bins per day");
  cmd->add_option("--d-thresh", cfg.d_thresh_m, "place join radius, meters");
  cmd->add_option("--t-thresh", cfg.t_thresh_s, "minimum dwell, seconds");
  cmd->add_option("--merge-distance", cfg.merge_distance_m,
                  "cluster merge distance, meters");
  cmd->add_option("--lambda", cfg.lambda, "logistic ridge strength");
  cmd->add_option("--forest-trees", cfg.forest_trees, "trees per forest");
  cmd->add_option("--forest-mtry", cfg.forest_mtry,
                  "features per split (0 = sqrt)");
  cmd->add_option("--forest-min-leaf", cfg.forest_min_leaf, "minimum leaf size");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--jobs", cfg.jobs, "worker threads (0 = hardware)");
  cmd->add_option("--pca-components", cfg.pca_components,
                  "principal components to retain");
  cmd->add_flag("--pca-on-log", cfg.pca_on_log, "fit PCA on ln(1+displacement)");
  cmd->add_flag("--pad-activity", cfg.pad_activity,
                "prepend a zero bin to each day's activity series");
  cmd->add_flag("--loc-var-degrees", cfg.loc_var_degrees,
                "location variance in raw degrees instead of meters");
}

int exit_code_for(mobkit::errc code) {
  switch (code) {
    case mobkit::errc::config_invalid:
    case mobkit::errc::invalid_spec:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GPS mobility analysis toolkit"};
  app.set_version_flag(
      "--version", std::string("mobkit ") + mobkit::kVersion + " (format v" +
                       std::to_string(mobkit::kFormatVersion) + ")");
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file")
      ->envname("MOBKIT_CONFIG");

  RunConfig cfg;

  // synth-specific options
  std::string synth_out = "synth_data";
  std::string synth_scenario = "both";
  std::string synth_spec_path;
  size_t synth_pre_n = 50, synth_post_n = 50;
  size_t synth_days = 60;
  uint64_t synth_seed = 1;

  auto* c_ingest = app.add_subcommand("ingest", "parse and validate raw traces");
  auto* c_ddp = app.add_subcommand("ddp", "build daily displacement profiles");
  auto* c_pca = app.add_subcommand("pca", "principal component analysis of DDPs");
  auto* c_circ = app.add_subcommand("circadian", "rest-activity rhythm metrics");
  auto* c_pheno = app.add_subcommand("phenotypes", "daily GPS features");
  auto* c_compare = app.add_subcommand("compare", "group comparison report");
  auto* c_predict = app.add_subcommand("predict", "severe-sadness prediction");
  auto* c_pipeline = app.add_subcommand("pipeline", "run every stage");
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic cohort");

  for (CLI::App* cmd : {c_ingest, c_ddp, c_pca, c_circ, c_pheno, c_compare,
                        c_predict, c_pipeline})
    add_config_flags(cmd, cfg);

  c_synth->add_option("--out", synth_out, "data directory to create");
  c_synth->add_option("--scenario", synth_scenario,
                      "pre_like, post_like, or both");
  c_synth->add_option("--spec", synth_spec_path,
                      "schedule spec JSON (overrides --scenario)");
  c_synth->add_option("--pre-participants", synth_pre_n, "PRE cohort size");
  c_synth->add_option("--post-participants", synth_post_n, "POST cohort size");
  c_synth->add_option("--days", synth_days, "days per participant");
  c_synth->add_option("--seed", synth_seed, "RNG seed");

  // Parse config file before flags so flags win.
  try {
    argv = app.ensure_utf8(argv);
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      RunConfig file_cfg = mobkit::config_from_json(mobkit::read_file(config_path));
      // re-apply flag overrides on top of the file values
      RunConfig merged = file_cfg;
      for (CLI::App* cmd : {c_ingest, c_ddp, c_pca, c_circ, c_pheno, c_compare,
                            c_predict, c_pipeline}) {
        if (!cmd->parsed()) continue;
        auto keep = [&](const char* flag) { return cmd->count(flag) > 0; };
        if (keep("--data")) merged.data_dir = cfg.data_dir;
        if (keep("--out")) merged.out_dir = cfg.out_dir;
        if (keep("--min-coverage")) merged.min_coverage = cfg.min_coverage;
        if (keep("--d-thresh")) merged.d_thresh_m = cfg.d_thresh_m;
        if (keep("--t-thresh")) merged.t_thresh_s = cfg.t_thresh_s;
        if (keep("--merge-distance")) merged.merge_distance_m = cfg.merge_distance_m;
        if (keep("--lambda")) merged.lambda = cfg.lambda;
        if (keep("--forest-trees")) merged.forest_trees = cfg.forest_trees;
        if (keep("--forest-mtry")) merged.forest_mtry = cfg.forest_mtry;
        if (keep("--forest-min-leaf")) merged.forest_min_leaf = cfg.forest_min_leaf;
        if (keep("--seed")) merged.seed = cfg.seed;
        if (keep("--jobs")) merged.jobs = cfg.jobs;
        if (keep("--pca-components")) merged.pca_components = cfg.pca_components;
        if (keep("--pca-on-log")) merged.pca_on_log = cfg.pca_on_log;
        if (keep("--pad-activity")) merged.pad_activity = cfg.pad_activity;
        if (keep("--loc-var-degrees")) merged.loc_var_degrees = cfg.loc_var_degrees;
      }
      cfg = merged;
    }

    if (c_synth->parsed()) {
      using namespace mobkit;
      SynthOptions opts;
      opts.seed = synth_seed;
      std::vector<Cohort> cohorts;
      const auto days = std::vector<int>();
      if (!synth_spec_path.empty()) {
        const ScheduleSpec spec = spec_from_json(read_file(synth_spec_path));
        const Group g = spec.scenario == Scenario::pre_like ? Group::pre : Group::post;
        const char* prefix = g == Group::pre ? "pre" : "post";
        cohorts.push_back(generate_cohort(
            spec, g, prefix, std::vector<int>(synth_pre_n, int(synth_days)), opts));
      } else if (synth_scenario == "pre_like") {
        cohorts.push_back(generate_cohort(
            pre_like_spec(), Group::pre, "pre",
            std::vector<int>(synth_pre_n, int(synth_days)), opts));
      } else if (synth_scenario == "post_like") {
        cohorts.push_back(generate_cohort(
            post_like_spec(), Group::post, "post",
            std::vector<int>(synth_post_n, int(synth_days)), opts));
      } else if (synth_scenario == "both") {
        cohorts.push_back(generate_cohort(
            pre_like_spec(), Group::pre, "pre",
            std::vector<int>(synth_pre_n, int(synth_days)), opts));
        cohorts.push_back(generate_cohort(
            post_like_spec(), Group::post, "post",
            std::vector<int>(synth_post_n, int(synth_days)), opts));
      } else {
        throw Error(errc::config_invalid,
                    "unknown scenario: " + synth_scenario);
      }
      write_study(synth_out, cohorts, opts);
      size_t days_total = 0;
      for (const auto& c : cohorts)
        for (const auto& p : c.participants) days_total += p.days.size();
      std::printf("wrote %s: %zu cohort(s), %zu participant-days\n",
                  synth_out.c_str(), cohorts.size(), days_total);
      return 0;
    }

    if (c_pipeline->parsed()) {
      const mobkit::PipelineResult r = mobkit::run_pipeline(cfg);
      std::printf("pipeline done: %zu participants, %zu retained days\n",
                  r.n_participants, r.n_days_retained);
      for (const auto& [stage, secs] : r.stage_seconds)
        std::fprintf(stderr, "  %-10s %.2fs\n", stage.c_str(), secs);
      std::fprintf(stderr, "  total      %.2fs\n", r.total_seconds);
      return 0;
    }

    if (c_ingest->parsed()) mobkit::cmd_ingest(cfg);
    else if (c_ddp->parsed()) mobkit::cmd_ddp(cfg);
    else if (c_pca->parsed()) mobkit::cmd_pca(cfg);
    else if (c_circ->parsed()) mobkit::cmd_circadian(cfg);
    else if (c_pheno->parsed()) mobkit::cmd_phenotypes(cfg);
    else if (c_compare->parsed()) mobkit::cmd_compare(cfg);
    else if (c_predict->parsed()) mobkit::cmd_predict(cfg);
    return 0;
  } catch (const mobkit::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", mobkit::errc_name(e.code()),
                 e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
