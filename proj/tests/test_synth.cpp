#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mobkit/error.hpp"
#include "mobkit/ingest.hpp"
#include "mobkit/io.hpp"
#include "mobkit/phenotypes.hpp"
#include "mobkit/synth.hpp"

using namespace mobkit;

TEST_CASE("generation is deterministic for a fixed seed") {
  SynthOptions opts;
  opts.seed = 99;
  const Cohort a = generate_cohort(pre_like_spec(), Group::pre, "pre",
                                   std::vector<int>(3, 5), opts);
  const Cohort b = generate_cohort(pre_like_spec(), Group::pre, "pre",
                                   std::vector<int>(3, 5), opts);
  REQUIRE(a.participants.size() == b.participants.size());
  for (size_t p = 0; p < a.participants.size(); ++p) {
    const auto& pa = a.participants[p];
    const auto& pb = b.participants[p];
    REQUIRE(pa.points.size() == pb.points.size());
    for (size_t i = 0; i < pa.points.size(); ++i) {
      CHECK(pa.points[i].timestamp_ms == pb.points[i].timestamp_ms);
      CHECK(pa.points[i].latitude == pb.points[i].latitude);
      CHECK(pa.points[i].longitude == pb.points[i].longitude);
    }
    for (size_t d = 0; d < pa.days.size(); ++d) {
      CHECK(pa.days[d].severe == pb.days[d].severe);
      CHECK(pa.days[d].p_severe == pb.days[d].p_severe);
    }
  }
  // a different seed produces different noise
  SynthOptions other = opts;
  other.seed = 100;
  const Cohort c = generate_cohort(pre_like_spec(), Group::pre, "pre",
                                   std::vector<int>(3, 5), other);
  CHECK(c.participants[0].points[0].latitude != a.participants[0].points[0].latitude);
}

TEST_CASE("duty cycle shapes the sample count") {
  SynthOptions opts;
  const Cohort c = generate_cohort(post_like_spec(), Group::post, "post",
                                   std::vector<int>(1, 2), opts);
  const auto& p = c.participants[0];
  // 144 windows/day * 3 samples/window * 2 days
  CHECK(p.points.size() == 144 * 3 * 2);
  // timestamps strictly increasing
  for (size_t i = 1; i < p.points.size(); ++i)
    CHECK(p.points[i].timestamp_ms > p.points[i - 1].timestamp_ms);
}

TEST_CASE("true places per day match the scenario ranges") {
  SynthOptions opts;
  opts.seed = 7;
  const Cohort pre = generate_cohort(pre_like_spec(), Group::pre, "pre",
                                     std::vector<int>(20, 30), opts);
  double mean_places = 0.0;
  size_t n = 0;
  for (const auto& p : pre.participants)
    for (const auto& d : p.days) {
      CHECK(d.places_visited >= 2);
      CHECK(d.places_visited <= 4);
      mean_places += d.places_visited;
      ++n;
    }
  mean_places /= double(n);
  // generator bookkeeping: 2 fixed + 0.45 + 0.6 optional
  CHECK(std::fabs(mean_places - 3.05) < 0.15);

  const Cohort post = generate_cohort(post_like_spec(), Group::post, "post",
                                      std::vector<int>(20, 30), opts);
  double post_places = 0.0;
  size_t m = 0;
  for (const auto& p : post.participants)
    for (const auto& d : p.days) {
      CHECK(d.places_visited >= 1);
      CHECK(d.places_visited <= 2);
      post_places += d.places_visited;
      ++m;
    }
  post_places /= double(m);
  CHECK(std::fabs(post_places - 1.55) < 0.15);
}

TEST_CASE("zero-noise always-on cohort recovers num_pls exactly") {
  ScheduleSpec spec = pre_like_spec();
  spec.noise_sd_m = 0.0;
  spec.wander_radius_m = 0.0;
  spec.duty_on_s = 600;  // always on
  spec.duty_period_s = 600;
  SynthOptions opts;
  opts.seed = 21;
  const Cohort cohort = generate_cohort(spec, Group::pre, "pre",
                                        std::vector<int>(4, 8), opts);
  for (const auto& p : cohort.participants) {
    Trace trace;
    trace.participant_id = p.id;
    trace.group = p.group;
    trace.timezone_offset_minutes = p.timezone_offset_minutes;
    trace.points = p.points;
    const auto days = segment_days(trace);
    REQUIRE(days.size() == p.days.size());
    const auto result = compute_daily_phenotypes(
        p.id, p.group, p.timezone_offset_minutes, days, {}, {});
    REQUIRE(result.days.size() == p.days.size());
    for (size_t d = 0; d < days.size(); ++d)
      CHECK(*result.days[d].num_pls == p.days[d].places_visited);
  }
}

TEST_CASE("home detection matches the true home under mild noise") {
  SynthOptions opts;
  opts.seed = 33;
  const Cohort cohort = generate_cohort(post_like_spec(), Group::post, "post",
                                        std::vector<int>(20, 15), opts);
  size_t matched = 0;
  for (const auto& p : cohort.participants) {
    Trace trace;
    trace.participant_id = p.id;
    trace.group = p.group;
    trace.timezone_offset_minutes = p.timezone_offset_minutes;
    trace.points = p.points;
    const auto result = compute_daily_phenotypes(
        p.id, p.group, p.timezone_offset_minutes, segment_days(trace), {}, {});
    if (!result.home_cluster) continue;
    const Coord detected = result.clusters[size_t(*result.home_cluster)].centroid;
    if (haversine_m(detected, p.home) < 100.0) ++matched;
  }
  CHECK(double(matched) / 20.0 >= 0.95);
}

TEST_CASE("sadness prevalence supports the two-severe-day filter") {
  SynthOptions opts;
  opts.seed = 41;
  for (const auto& spec : {pre_like_spec(), post_like_spec()}) {
    const Cohort cohort = generate_cohort(
        spec, spec.scenario == Scenario::pre_like ? Group::pre : Group::post,
        "x", std::vector<int>(30, 60), opts);
    size_t eligible = 0;
    double prevalence = 0.0;
    size_t n = 0;
    for (const auto& p : cohort.participants) {
      size_t severe = 0;
      for (const auto& d : p.days) {
        severe += d.severe;
        prevalence += d.severe;
        ++n;
      }
      if (severe >= 2) ++eligible;
    }
    prevalence /= double(n);
    CHECK(prevalence > 0.05);
    CHECK(prevalence < 0.6);
    CHECK(eligible >= 27);  // nearly everyone has two severe days in 60
  }
}

TEST_CASE("spread_days distributes a total exactly") {
  const auto days = spread_days(126, 6442);
  CHECK(days.size() == 126);
  int total = 0;
  for (int d : days) total += d;
  CHECK(total == 6442);
  CHECK(days.front() - days.back() <= 1);
}

TEST_CASE("spec json round trip and validation") {
  const ScheduleSpec spec = pre_like_spec();
  const ScheduleSpec back = spec_from_json(spec_to_json(spec));
  CHECK(back.scenario == spec.scenario);
  CHECK(back.places.size() == spec.places.size());
  CHECK(back.blocks.size() == spec.blocks.size());
  CHECK(back.move_speed_mps == spec.move_speed_mps);
  CHECK(back.label_coef == spec.label_coef);

  ScheduleSpec bad = spec;
  bad.places[1] = {"tooclose", 100.0, 100.0};
  CHECK_THROWS_AS(validate_spec(bad), Error);

  ScheduleSpec overlap = spec;
  overlap.blocks[1].start_min = overlap.blocks[0].start_min + 1;
  CHECK_THROWS_AS(validate_spec(overlap), Error);
}

TEST_CASE("write_study produces the ingest layout, byte-stable") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "mobkit_synth_test").string();
  fs::remove_all(dir);
  SynthOptions opts;
  opts.seed = 55;
  const Cohort pre = generate_cohort(pre_like_spec(), Group::pre, "pre",
                                     std::vector<int>(2, 3), opts);
  const Cohort post = generate_cohort(post_like_spec(), Group::post, "post",
                                      std::vector<int>(2, 3), opts);
  write_study(dir, {pre, post}, opts);

  for (const char* f :
       {"roster.csv", "survey.csv", "ground_truth_days.csv",
        "ground_truth_participants.csv", "ground_truth_model.csv",
        "schedule_spec.json", "gps/pre001.csv", "gps/post002.csv"})
    CHECK(file_exists(dir + "/" + f));

  const auto roster = parse_roster(read_file(dir + "/roster.csv"));
  CHECK(roster.size() == 4);

  // the emitted traces parse cleanly
  RejectionReport rep;
  const Trace t = parse_trace(read_file(dir + "/gps/pre001.csv"), "pre001",
                              Group::pre, opts.timezone_offset_minutes, &rep);
  CHECK(rep.rows_rejected == 0);
  CHECK(t.points.size() == 144 * 3 * 3);

  const std::string first = read_file(dir + "/gps/pre001.csv");
  write_study(dir, {pre, post}, opts);
  CHECK(read_file(dir + "/gps/pre001.csv") == first);
  fs::remove_all(dir);
}
