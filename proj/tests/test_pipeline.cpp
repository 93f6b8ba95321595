#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "mobkit/error.hpp"
#include "mobkit/io.hpp"
#include "mobkit/pipeline.hpp"
#include "mobkit/sha256.hpp"
#include "mobkit/synth.hpp"

using namespace mobkit;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
  const std::string d = (fs::temp_directory_path() / name).string();
  fs::remove_all(d);
  return d;
}

void make_small_study(const std::string& dir, uint64_t seed = 3) {
  SynthOptions opts;
  opts.seed = seed;
  const Cohort pre = generate_cohort(pre_like_spec(), Group::pre, "pre",
                                     std::vector<int>(6, 25), opts);
  const Cohort post = generate_cohort(post_like_spec(), Group::post, "post",
                                      std::vector<int>(6, 25), opts);
  write_study(dir, {pre, post}, opts);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MOBKIT_CLI_PATH) + " " + args;
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

const char* const kArtifacts[] = {
    "ingest_report.csv", "ddp.csv",       "heatmap.csv",   "circadian.csv",
    "iv_daily.csv",      "pca_loadings.csv", "pca_scores.csv", "pca_summary.csv",
    "phenotypes.csv",    "places.csv",    "compare.csv",   "predictions.csv",
    "auc_summary.csv",   "run_metadata.json"};

}  // namespace

TEST_CASE("config json round trip and validation") {
  RunConfig cfg;
  cfg.data_dir = "/nonexistent";
  cfg.out_dir = "/tmp/x";
  cfg.min_coverage = 0.4;
  cfg.seed = 77;
  cfg.pca_on_log = true;
  const RunConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.data_dir == cfg.data_dir);
  CHECK(back.min_coverage == 0.4);
  CHECK(back.seed == 77);
  CHECK(back.pca_on_log);

  RunConfig bad = cfg;
  bad.min_coverage = 1.5;
  CHECK_THROWS_AS(validate_config(bad, false), Error);
  try {
    validate_config(cfg, true);  // roster missing
    FAIL("expected config_invalid");
  } catch (const Error& e) {
    CHECK(e.code() == errc::config_invalid);
  }
}

TEST_CASE("full pipeline writes every artifact and is byte-deterministic") {
  const std::string data = temp_dir("mobkit_pipe_data");
  make_small_study(data);

  RunConfig cfg;
  cfg.data_dir = data;
  cfg.out_dir = temp_dir("mobkit_pipe_out1");
  cfg.forest_trees = 30;  // keep the smoke test quick
  cfg.jobs = 2;
  const PipelineResult r1 = run_pipeline(cfg);
  CHECK(r1.n_participants == 12);
  CHECK(r1.n_days_retained == 12 * 25);

  for (const char* f : kArtifacts) CHECK(file_exists(cfg.out_dir + "/" + f));

  RunConfig cfg2 = cfg;
  cfg2.out_dir = temp_dir("mobkit_pipe_out2");
  cfg2.jobs = 1;  // thread count must not affect bytes
  run_pipeline(cfg2);
  for (const char* f : kArtifacts) {
    const std::string a = sha256_file_hex(cfg.out_dir + "/" + f);
    const std::string b = sha256_file_hex(cfg2.out_dir + "/" + f);
    INFO(f);
    CHECK(a == b);
  }
  fs::remove_all(data);
  fs::remove_all(cfg.out_dir);
  fs::remove_all(cfg2.out_dir);
}

TEST_CASE("chained individual commands reproduce the pipeline artifacts") {
  const std::string data = temp_dir("mobkit_chain_data");
  make_small_study(data, 5);

  RunConfig cfg;
  cfg.data_dir = data;
  cfg.out_dir = temp_dir("mobkit_chain_out");
  cfg.forest_trees = 30;
  cmd_ingest(cfg);
  cmd_ddp(cfg);
  cmd_circadian(cfg);
  cmd_pca(cfg);
  cmd_phenotypes(cfg);
  cmd_compare(cfg);
  cmd_predict(cfg);
  for (const char* f : kArtifacts) CHECK(file_exists(cfg.out_dir + "/" + f));

  // canonical traces re-parse identically (round-trip property)
  const std::string canon = cfg.out_dir + "/canonical/pre001.csv";
  REQUIRE(file_exists(canon));
  const std::string text = read_file(canon);
  const Trace t = parse_trace(text, "pre001", Group::pre, -300);
  CHECK(trace_to_canonical_csv(t) == text);

  fs::remove_all(data);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("missing upstream artifact raises missing_artifact") {
  RunConfig cfg;
  cfg.out_dir = temp_dir("mobkit_missing_out");
  ensure_dir(cfg.out_dir);
  try {
    cmd_circadian(cfg);
    FAIL("expected missing_artifact");
  } catch (const Error& e) {
    CHECK(e.code() == errc::missing_artifact);
  }
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("cli: pipeline exits 0, missing roster exits 2, version prints") {
  const std::string data = temp_dir("mobkit_cli_data");
  make_small_study(data, 7);
  const std::string out = temp_dir("mobkit_cli_out");

  CHECK(run_cli("pipeline --data " + data + " --out " + out +
                " --forest-trees 25 > /dev/null 2>&1") == 0);
  CHECK(file_exists(out + "/compare.csv"));

  // ConfigInvalid: roster missing
  CHECK(run_cli("pipeline --data /nonexistent_dir --out " + out +
                " > /dev/null 2>&1") == 2);
  // missing artifact is a data error
  const std::string out2 = temp_dir("mobkit_cli_out2");
  CHECK(run_cli("circadian --out " + out2 + " > /dev/null 2>&1") == 1);
  CHECK(run_cli("--version > /dev/null 2>&1") == 0);
  // unknown flag is a config error
  CHECK(run_cli("pipeline --no-such-flag > /dev/null 2>&1") == 2);

  fs::remove_all(data);
  fs::remove_all(out);
  fs::remove_all(out2);
}

TEST_CASE("cli: config file with flag override") {
  const std::string data = temp_dir("mobkit_cfg_data");
  make_small_study(data, 9);
  const std::string out = temp_dir("mobkit_cfg_out");

  RunConfig base;
  base.data_dir = data;
  base.out_dir = "/tmp/should_be_overridden";
  base.forest_trees = 25;
  const std::string cfg_path = data + "/config.json";
  write_file(cfg_path, config_to_json(base));

  CHECK(run_cli("pipeline --config " + cfg_path + " --out " + out +
                " > /dev/null 2>&1") == 0);
  CHECK(file_exists(out + "/ddp.csv"));
  CHECK(!file_exists("/tmp/should_be_overridden/ddp.csv"));

  fs::remove_all(data);
  fs::remove_all(out);
}

TEST_CASE("synth cli writes a loadable study") {
  const std::string dir = temp_dir("mobkit_cli_synth");
  CHECK(run_cli("synth --out " + dir +
                " --pre-participants 2 --post-participants 2 --days 4 "
                "--seed 11 > /dev/null 2>&1") == 0);
  CHECK(file_exists(dir + "/roster.csv"));
  CHECK(file_exists(dir + "/gps/post001.csv"));
  fs::remove_all(dir);
}
