#include "mobkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "mobkit/error.hpp"
#include "mobkit/ingest.hpp"
#include "mobkit/io.hpp"
#include "mobkit/stats.hpp"

namespace mobkit {

namespace {

// Synthetic campus anchor; participants get grid origins around it.
constexpr double kBaseLat = 30.0;
constexpr double kBaseLon = -97.0;
constexpr double kGridSpacingM = 4000.0;
constexpr int kGridCols = 16;
constexpr double kHomeGapS = 5400.0;  // schedule gap that sends people home

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

ScheduleSpec pre_like_spec() {
  ScheduleSpec s;
  s.scenario = Scenario::pre_like;
  s.places = {
      {"home", 0.0, 0.0},
      {"campus", 1500.0, 600.0},
      {"food", 1900.0, 700.0},
      {"social", 800.0, 1400.0},
  };
  // Sharp morning commute, class blocks, optional lunch out, optional
  // evening outing: 2-4 places a day with transitions near 8-10 and 19-21.
  s.blocks = {
      {1, 8 * 60 + 40, 12 * 60 + 5, 20.0, 1.0},
      {2, 12 * 60 + 15, 12 * 60 + 55, 10.0, 0.45},
      {1, 13 * 60 + 5, 18 * 60 + 30, 20.0, 1.0},
      {3, 19 * 60 + 30, 21 * 60 + 40, 25.0, 0.6},
  };
  s.move_speed_mps = 1.5;
  s.wander_radius_m = 40.0;
  s.wander_start_min = 9 * 60;
  s.wander_end_min = 18 * 60;
  s.noise_sd_m = 10.0;
  s.label_intercept = 0.85;
  s.label_coef = {-0.55, 2.2, -0.18};
  s.label_participant_sd = 0.4;
  return s;
}

ScheduleSpec post_like_spec() {
  ScheduleSpec s;
  s.scenario = Scenario::post_like;
  s.places = {
      {"home", 0.0, 0.0},
      {"errand", 1850.0, -1850.0},
  };
  // Home-dominant days with a slow diffuse midday errand on some of them.
  s.blocks = {
      {1, 12 * 60 + 30, 13 * 60 + 20, 40.0, 0.55},
  };
  s.move_speed_mps = 0.8;
  s.wander_radius_m = 90.0;
  s.wander_start_min = 9 * 60 + 30;
  s.wander_end_min = 16 * 60 + 30;
  s.noise_sd_m = 10.0;
  s.label_intercept = -2.5;
  s.label_coef = {-0.55, 2.2, -0.18};
  s.label_participant_sd = 0.4;
  return s;
}

void validate_spec(const ScheduleSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(errc::invalid_spec, why); };
  if (spec.places.empty()) fail("no places");
  for (size_t i = 0; i < spec.places.size(); ++i)
    for (size_t j = i + 1; j < spec.places.size(); ++j) {
      const double dx = spec.places[i].x_m - spec.places[j].x_m;
      const double dy = spec.places[i].y_m - spec.places[j].y_m;
      if (std::hypot(dx, dy) < 400.0)
        fail("places " + spec.places[i].name + " and " + spec.places[j].name +
             " closer than 400 m");
    }
  int prev_end = 0;
  for (const BlockTemplate& b : spec.blocks) {
    if (b.place < 0 || size_t(b.place) >= spec.places.size()) fail("bad place index");
    if (b.start_min < 0 || b.end_min > 24 * 60 || b.start_min + 10 > b.end_min)
      fail("bad block times");
    if (b.start_min < prev_end) fail("overlapping blocks");
    if (b.presence_prob < 0.0 || b.presence_prob > 1.0) fail("bad presence_prob");
    if (b.jitter_sd_min < 0.0) fail("negative jitter");
    prev_end = b.end_min;
  }
  if (spec.move_speed_mps <= 0.0) fail("non-positive speed");
  if (spec.noise_sd_m < 0.0) fail("negative noise");
  if (spec.wander_radius_m < 0.0 || spec.wander_radius_m > 140.0)
    fail("wander radius must stay within the place join radius");
  if (spec.duty_on_s <= 0 || spec.duty_period_s < spec.duty_on_s)
    fail("bad duty cycle");
  if (spec.sample_interval_s <= 0 || spec.sample_interval_s > spec.duty_on_s)
    fail("bad sample interval");
}

std::string spec_to_json(const ScheduleSpec& spec) {
  nlohmann::json j;
  j["scenario"] = scenario_name(spec.scenario);
  for (const auto& p : spec.places)
    j["places"].push_back({{"name", p.name}, {"x_m", p.x_m}, {"y_m", p.y_m}});
  for (const auto& b : spec.blocks)
    j["blocks"].push_back({{"place", b.place},
                           {"start_min", b.start_min},
                           {"end_min", b.end_min},
                           {"jitter_sd_min", b.jitter_sd_min},
                           {"presence_prob", b.presence_prob}});
  j["move_speed_mps"] = spec.move_speed_mps;
  j["wander_radius_m"] = spec.wander_radius_m;
  j["wander_start_min"] = spec.wander_start_min;
  j["wander_end_min"] = spec.wander_end_min;
  j["noise_sd_m"] = spec.noise_sd_m;
  j["duty_on_s"] = spec.duty_on_s;
  j["duty_period_s"] = spec.duty_period_s;
  j["sample_interval_s"] = spec.sample_interval_s;
  j["label_intercept"] = spec.label_intercept;
  j["label_coef"] = spec.label_coef;
  j["label_participant_sd"] = spec.label_participant_sd;
  return j.dump(2);
}

ScheduleSpec spec_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::invalid_spec, std::string("bad spec json: ") + e.what());
  }
  ScheduleSpec s;
  try {
    const std::string sc = j.at("scenario");
    if (sc == "PRE_LIKE") s.scenario = Scenario::pre_like;
    else if (sc == "POST_LIKE") s.scenario = Scenario::post_like;
    else throw Error(errc::invalid_spec, "unknown scenario " + sc);
    for (const auto& p : j.at("places"))
      s.places.push_back({p.at("name"), p.at("x_m"), p.at("y_m")});
    if (j.contains("blocks"))
      for (const auto& b : j.at("blocks"))
        s.blocks.push_back({b.at("place"), b.at("start_min"), b.at("end_min"),
                            b.at("jitter_sd_min"), b.at("presence_prob")});
    s.move_speed_mps = j.at("move_speed_mps");
    s.wander_radius_m = j.at("wander_radius_m");
    s.wander_start_min = j.at("wander_start_min");
    s.wander_end_min = j.at("wander_end_min");
    s.noise_sd_m = j.at("noise_sd_m");
    s.duty_on_s = j.at("duty_on_s");
    s.duty_period_s = j.at("duty_period_s");
    s.sample_interval_s = j.at("sample_interval_s");
    s.label_intercept = j.at("label_intercept");
    s.label_coef = j.at("label_coef");
    s.label_participant_sd = j.at("label_participant_sd");
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::invalid_spec, std::string("bad spec json: ") + e.what());
  }
  validate_spec(s);
  return s;
}

namespace {

struct Segment {
  bool moving = false;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  double t0 = 0.0, t1 = 0.0;  // seconds of local day
  int place = 0;

  void pos(double t, double& x, double& y) const {
    if (!moving || t1 <= t0) {
      x = x0;
      y = y0;
      return;
    }
    const double f = (t - t0) / (t1 - t0);
    x = x0 + f * (x1 - x0);
    y = y0 + f * (y1 - y0);
  }
};

struct DayPlan {
  std::vector<Segment> segments;
  int places_visited = 0;
  double frac_home = 0.0;
  double dist_m = 0.0;
};

struct SampledBlock {
  int place;
  double start_s;
  double end_s;
};

DayPlan build_day_plan(const ScheduleSpec& spec,
                       const std::vector<SampledBlock>& blocks) {
  auto px = [&](int p) { return spec.places[size_t(p)].x_m; };
  auto py = [&](int p) { return spec.places[size_t(p)].y_m; };

  struct Stop {
    int place;
    double depart_s;
  };
  std::vector<Stop> stops;
  if (blocks.empty()) {
    stops.push_back({0, 86400.0});
  } else {
    stops.push_back({0, blocks.front().start_s});
    for (size_t i = 0; i < blocks.size(); ++i) {
      const SampledBlock& b = blocks[i];
      if (stops.back().place != b.place) stops.push_back({b.place, 0.0});
      const bool last = i + 1 == blocks.size();
      if (last) {
        stops.back().depart_s = b.end_s;
      } else if (blocks[i + 1].start_s - b.end_s >= kHomeGapS && b.place != 0) {
        stops.back().depart_s = b.end_s;
        stops.push_back({0, blocks[i + 1].start_s});
      } else {
        stops.back().depart_s = blocks[i + 1].start_s;
      }
    }
    if (stops.back().place != 0) stops.push_back({0, 86400.0});
    else stops.back().depart_s = 86400.0;
  }

  DayPlan plan;
  std::set<int> visited;
  double cur_t = 0.0;
  for (size_t k = 0; k < stops.size(); ++k) {
    const int place = stops[k].place;
    double depart = std::min(std::max(stops[k].depart_s, cur_t), 86400.0);
    Segment stay;
    stay.moving = false;
    stay.place = place;
    stay.x0 = stay.x1 = px(place);
    stay.y0 = stay.y1 = py(place);
    stay.t0 = cur_t;
    stay.t1 = depart;
    plan.segments.push_back(stay);
    if (depart - cur_t >= 600.0) visited.insert(place);
    if (place == 0) plan.frac_home += depart - cur_t;
    cur_t = depart;
    if (k + 1 < stops.size()) {
      const int nxt = stops[k + 1].place;
      const double dist = std::hypot(px(nxt) - px(place), py(nxt) - py(place));
      const double travel = dist / spec.move_speed_mps;
      Segment move;
      move.moving = true;
      move.place = -1;
      move.x0 = px(place);
      move.y0 = py(place);
      move.x1 = px(nxt);
      move.y1 = py(nxt);
      move.t0 = cur_t;
      move.t1 = std::min(cur_t + travel, 86400.0);
      plan.segments.push_back(move);
      plan.dist_m += dist;
      cur_t = move.t1;
      if (cur_t >= 86400.0) break;
    }
  }
  if (!plan.segments.empty() && plan.segments.back().t1 < 86400.0) {
    Segment tail = plan.segments.back();
    tail.moving = false;
    tail.x0 = tail.x1;
    tail.y0 = tail.y1;
    tail.t0 = plan.segments.back().t1;
    tail.t1 = 86400.0;
    plan.segments.push_back(tail);
  }
  plan.frac_home /= 86400.0;
  plan.places_visited = int(visited.size());
  return plan;
}

}  // namespace

std::vector<int> spread_days(size_t n_participants, size_t total_days) {
  std::vector<int> days(n_participants, int(total_days / n_participants));
  const size_t extra = total_days % n_participants;
  for (size_t i = 0; i < extra; ++i) ++days[i];
  return days;
}

Cohort generate_cohort(const ScheduleSpec& spec, Group group,
                       const std::string& id_prefix,
                       const std::vector<int>& days_per_participant,
                       const SynthOptions& opts) {
  validate_spec(spec);
  Cohort cohort;
  cohort.spec = spec;

  const LocalProjection base_proj({kBaseLat, kBaseLon});
  const int64_t tz_shift_ms = -int64_t(opts.timezone_offset_minutes) * 60'000;

  for (size_t p = 0; p < days_per_participant.size(); ++p) {
    std::mt19937_64 rng(derive_seed(opts.seed, p));
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SynthParticipant sp;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "%s%03zu", id_prefix.c_str(), p + 1);
    sp.id = idbuf;
    sp.group = group;
    sp.scenario = spec.scenario;
    sp.timezone_offset_minutes = opts.timezone_offset_minutes;

    const int col = int(p) % kGridCols;
    const int row = int(p) / kGridCols + (group == Group::post ? 32 : 0);
    const Coord origin =
        base_proj.from_xy(col * kGridSpacingM, row * kGridSpacingM);
    const LocalProjection proj(origin);
    sp.home = origin;
    sp.label_offset = unit_normal(rng) * spec.label_participant_sd;

    for (int day = 0; day < days_per_participant[p]; ++day) {
      const LocalDate date = opts.start_date + day;

      std::vector<SampledBlock> blocks;
      double prev_end = 300.0;  // earliest departure 00:05
      for (const BlockTemplate& b : spec.blocks) {
        if (unif(rng) > b.presence_prob) continue;
        double start = (double(b.start_min) + unit_normal(rng) * b.jitter_sd_min) * 60.0;
        double end = (double(b.end_min) + unit_normal(rng) * b.jitter_sd_min) * 60.0;
        start = std::max(start, prev_end + 300.0);
        end = std::max(end, start + 600.0);
        if (end > 86100.0) continue;  // jittered off the day's end
        blocks.push_back({b.place, start, end});
        prev_end = end;
      }

      const DayPlan plan = build_day_plan(spec, blocks);

      const double wander_amp =
          spec.wander_radius_m * (0.25 + 0.75 * unif(rng));
      const double phase1 = unif(rng) * 2.0 * kPi;
      const double phase2 = unif(rng) * 2.0 * kPi;
      const double wander_lo = double(spec.wander_start_min) * 60.0;
      const double wander_hi = double(spec.wander_end_min) * 60.0;

      size_t seg_idx = 0;
      for (int win = 0; win * spec.duty_period_s < 86400; ++win) {
        const int win_start = win * spec.duty_period_s;
        for (int s = win_start;
             s < win_start + spec.duty_on_s && s < 86400;
             s += spec.sample_interval_s) {
          const double t = double(s);
          while (seg_idx + 1 < plan.segments.size() &&
                 plan.segments[seg_idx].t1 <= t)
            ++seg_idx;
          const Segment& seg = plan.segments[seg_idx];
          double x, y;
          seg.pos(t, x, y);
          if (!seg.moving && wander_amp > 0.0 && t >= wander_lo && t < wander_hi) {
            x += wander_amp * std::sin(2.0 * kPi * t / 6600.0 + phase1);
            y += wander_amp * std::cos(2.0 * kPi * t / 4380.0 + phase2);
          }
          if (spec.noise_sd_m > 0.0) {
            x += unit_normal(rng) * spec.noise_sd_m;
            y += unit_normal(rng) * spec.noise_sd_m;
          }
          GpsPoint pt;
          pt.timestamp_ms = int64_t(date) * kMsPerDay + int64_t(s) * 1000 + tz_shift_ms;
          const Coord c = proj.from_xy(x, y);
          pt.latitude = c.lat;
          pt.longitude = c.lon;
          pt.accuracy_m = spec.noise_sd_m > 0.0 ? std::optional<double>(spec.noise_sd_m)
                                                : std::nullopt;
          sp.points.push_back(pt);
        }
      }

      SynthDay truth;
      truth.date = date;
      truth.places_visited = plan.places_visited;
      truth.frac_home = plan.frac_home;
      truth.dist_m = plan.dist_m;
      const double eta = spec.label_intercept + sp.label_offset +
                         spec.label_coef[0] * double(plan.places_visited) +
                         spec.label_coef[1] * plan.frac_home +
                         spec.label_coef[2] * plan.dist_m / 1000.0;
      truth.p_severe = sigmoid(eta);
      truth.severe = unif(rng) < truth.p_severe;
      if (truth.severe) {
        truth.sadness_level = 4;
      } else if (unif(rng) < truth.p_severe * 0.5) {
        truth.sadness_level = 3;
      } else {
        truth.sadness_level = int(unif(rng) * 3.0);
      }
      sp.days.push_back(truth);
    }
    cohort.participants.push_back(std::move(sp));
  }
  return cohort;
}

void write_study(const std::string& dir, const std::vector<Cohort>& cohorts,
                 const SynthOptions& opts) {
  ensure_dir(dir);
  ensure_dir(dir + "/gps");

  std::vector<const SynthParticipant*> all;
  for (const Cohort& c : cohorts)
    for (const SynthParticipant& p : c.participants) all.push_back(&p);
  std::sort(all.begin(), all.end(),
            [](const SynthParticipant* a, const SynthParticipant* b) {
              return a->id < b->id;
            });

  std::string roster = "participant_id,group,timezone_offset_minutes\n";
  std::string survey = "participant_id,local_date,sadness_level\n";
  std::string days_csv =
      "participant_id,local_date,scenario,true_places_visited,true_frac_home,"
      "true_dist_m,eta_probability,severe\n";
  std::string parts_csv =
      "participant_id,scenario,group,home_lat,home_lon,label_offset\n";

  for (const SynthParticipant* p : all) {
    Trace trace;
    trace.participant_id = p->id;
    trace.group = p->group;
    trace.timezone_offset_minutes = p->timezone_offset_minutes;
    trace.points = p->points;
    write_file(dir + "/gps/" + p->id + ".csv", trace_to_canonical_csv(trace));

    roster += p->id;
    roster += ',';
    roster += group_name(p->group);
    roster += ',';
    roster += std::to_string(p->timezone_offset_minutes);
    roster += '\n';

    parts_csv += p->id;
    parts_csv += ',';
    parts_csv += scenario_name(p->scenario);
    parts_csv += ',';
    parts_csv += group_name(p->group);
    parts_csv += ',';
    parts_csv += fmt_fixed(p->home.lat, 7);
    parts_csv += ',';
    parts_csv += fmt_fixed(p->home.lon, 7);
    parts_csv += ',';
    parts_csv += fmt_sig(p->label_offset, 9);
    parts_csv += '\n';

    for (const SynthDay& d : p->days) {
      survey += p->id;
      survey += ',';
      survey += date_to_string(d.date);
      survey += ',';
      survey += std::to_string(d.sadness_level);
      survey += '\n';

      days_csv += p->id;
      days_csv += ',';
      days_csv += date_to_string(d.date);
      days_csv += ',';
      days_csv += scenario_name(p->scenario);
      days_csv += ',';
      days_csv += std::to_string(d.places_visited);
      days_csv += ',';
      days_csv += fmt_sig(d.frac_home, 9);
      days_csv += ',';
      days_csv += fmt_fixed(d.dist_m, 3);
      days_csv += ',';
      days_csv += fmt_sig(d.p_severe, 9);
      days_csv += ',';
      days_csv += d.severe ? '1' : '0';
      days_csv += '\n';
    }
  }

  std::string model_csv = "scenario,coefficient,value\n";
  for (const Cohort& c : cohorts) {
    const char* sc = scenario_name(c.spec.scenario);
    auto row = [&](const char* name, double v) {
      model_csv += sc;
      model_csv += ',';
      model_csv += name;
      model_csv += ',';
      model_csv += fmt_sig(v, 9);
      model_csv += '\n';
    };
    row("intercept", c.spec.label_intercept);
    row("places_visited", c.spec.label_coef[0]);
    row("frac_home", c.spec.label_coef[1]);
    row("dist_km", c.spec.label_coef[2]);
    row("participant_sd", c.spec.label_participant_sd);
  }

  write_file(dir + "/roster.csv", roster);
  write_file(dir + "/survey.csv", survey);
  write_file(dir + "/ground_truth_days.csv", days_csv);
  write_file(dir + "/ground_truth_participants.csv", parts_csv);
  write_file(dir + "/ground_truth_model.csv", model_csv);

  nlohmann::json meta;
  meta["seed"] = opts.seed;
  meta["start_date"] = date_to_string(opts.start_date);
  meta["timezone_offset_minutes"] = opts.timezone_offset_minutes;
  nlohmann::json scenarios = nlohmann::json::array();
  for (const Cohort& c : cohorts)
    scenarios.push_back(nlohmann::json::parse(spec_to_json(c.spec)));
  meta["scenarios"] = scenarios;
  write_file(dir + "/schedule_spec.json", meta.dump(2) + "\n");
}

}  // namespace mobkit
