#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mobkit/phenotypes.hpp"

using namespace mobkit;

namespace {

constexpr int64_t kDay = 86'400'000;
constexpr int64_t kBase = 19724LL * kDay;

double lat_step(double meters) { return meters / kEarthRadiusM * 180.0 / kPi; }
double lon_step(double meters, double lat) {
  return meters / (kEarthRadiusM * std::cos(deg2rad(lat))) * 180.0 / kPi;
}

GpsPoint at(int64_t second, double lat, double lon) {
  GpsPoint p;
  p.timestamp_ms = kBase + second * 1000;
  p.latitude = lat;
  p.longitude = lon;
  return p;
}

DayTrace make_day(std::vector<GpsPoint> pts, LocalDate date = 19724) {
  DayTrace d;
  d.participant_id = "p1";
  d.date = date;
  d.points = std::move(pts);
  d.coverage_fraction = 1.0;
  return d;
}

}  // namespace

TEST_CASE("location variance frozen example: two points 100 m apart") {
  // sample variance: sum of squared deviations / (n-1) = 2*50^2
  const double dl = lon_step(100.0, 0.0);
  const std::vector<GpsPoint> pts = {at(0, 0.0, 0.0), at(600, 0.0, dl)};
  const auto lv = location_variance(pts);
  REQUIRE(lv.has_value());
  CHECK(std::fabs(*lv - 70.71) < 0.05);
}

TEST_CASE("location variance: identical points give zero, lone point missing") {
  const std::vector<GpsPoint> same = {at(0, 30.0, -97.0), at(600, 30.0, -97.0)};
  CHECK(*location_variance(same) == 0.0);
  const std::vector<GpsPoint> one = {at(0, 30.0, -97.0)};
  CHECK(!location_variance(one).has_value());
}

TEST_CASE("location variance is rotation invariant about the centroid") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  // at the equator the projection is an exact linear bijection, so rotation
  // is a true rigid motion of the point set
  const LocalProjection proj({0.0, -97.0});
  std::vector<GpsPoint> pts, rotated;
  for (int i = 0; i < 40; ++i) {
    const double x = u(rng), y = u(rng);
    const Coord c = proj.from_xy(x, y);
    pts.push_back(at(i * 600, c.lat, c.lon));
    const Coord r = proj.from_xy(-y, x);  // 90 degrees about the origin
    rotated.push_back(at(i * 600, r.lat, r.lon));
  }
  CHECK(*location_variance(pts) ==
        doctest::Approx(*location_variance(rotated)).epsilon(1e-6));
}

TEST_CASE("place entropy: frozen values") {
  CHECK(place_entropy(std::vector<double>{100.0}) == 0.0);
  CHECK(place_entropy(std::vector<double>{50.0, 50.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // shares (0.5, 0.25, 0.25)
  const std::vector<double> shares{2.0, 1.0, 1.0};
  CHECK(std::fabs(place_entropy(shares) - 0.94639) < 1e-4);
  CHECK(place_entropy({}) == 0.0);
}

TEST_CASE("entropy is 1 only for equal shares") {
  CHECK(place_entropy(std::vector<double>{30.0, 30.0, 30.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(place_entropy(std::vector<double>{40.0, 30.0, 30.0}) < 1.0);
}

TEST_CASE("total and max distance on an out-and-back") {
  const double step = lat_step(1000.0);
  std::vector<GpsPoint> pts;
  pts.push_back(at(0, 30.0, -97.0));
  pts.push_back(at(600, 30.0 + step / 2, -97.0));
  pts.push_back(at(1200, 30.0 + step, -97.0));
  pts.push_back(at(1800, 30.0 + step / 2, -97.0));
  pts.push_back(at(2400, 30.0, -97.0));
  CHECK(total_distance(pts) == doctest::Approx(2000.0).epsilon(1e-6));
  CHECK(max_distance(pts) == doctest::Approx(1000.0).epsilon(1e-6));

  const std::vector<GpsPoint> still = {at(0, 30.0, -97.0), at(600, 30.0, -97.0)};
  CHECK(total_distance(still) == 0.0);
  CHECK(max_distance(still) == 0.0);
}

TEST_CASE("max_dist <= total_dist over random traces") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<GpsPoint> pts;
    const int n = 2 + int(rng() % 12);
    for (int i = 0; i < n; ++i) pts.push_back(at(i * 600, 30.0 + u(rng), -97.0 + u(rng)));
    // relative slack: max and total take different float paths to the
    // same great-circle arithmetic
    const double total = total_distance(pts);
    CHECK(max_distance(pts) <= total * (1.0 + 1e-12) + 1e-9);
  }
}

TEST_CASE("max distance via convex hull matches the exact scan") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-0.03, 0.03);
  std::vector<GpsPoint> big;
  for (int i = 0; i < 6000; ++i)  // above the exact-scan cutoff
    big.push_back(at(i * 10, 30.0 + u(rng), -97.0 + u(rng)));
  const std::vector<GpsPoint> small(big.begin(), big.begin() + 4000);
  const double exact_small = max_distance(small);
  // oracle: brute force on the same 4000 points
  double brute = 0.0;
  for (size_t i = 0; i < small.size(); ++i)
    for (size_t j = i + 1; j < small.size(); ++j)
      brute = std::max(brute, haversine_m(small[i].coord(), small[j].coord()));
  CHECK(exact_small == doctest::Approx(brute).epsilon(1e-9));

  double brute_big = 0.0;
  for (size_t i = 0; i < big.size(); ++i)
    for (size_t j = i + 1; j < big.size(); ++j)
      brute_big = std::max(brute_big, haversine_m(big[i].coord(), big[j].coord()));
  CHECK(max_distance(big) == doctest::Approx(brute_big).epsilon(1e-6));
}

TEST_CASE("routine index frozen cases") {
  using Labels = std::array<int, kBinsPerDay>;
  Labels a{};
  a.fill(1);
  Labels b{};
  b.fill(2);

  // all days identical
  CHECK(*routine_index(0, {a, a, a}) == 1.0);
  // a day matching no other day anywhere
  CHECK(*routine_index(0, {a, b, b}) == 0.0);
  // 2 of 4 other days agree at every bin
  CHECK(*routine_index(0, {a, a, a, b, b}) == 0.5);
  // single day has no index
  CHECK(!routine_index(0, {a}).has_value());
}

TEST_CASE("routine index is symmetric under permutation of other days") {
  std::mt19937_64 rng(73);
  using Labels = std::array<int, kBinsPerDay>;
  std::vector<Labels> days(5);
  for (auto& d : days)
    for (int b = 0; b < kBinsPerDay; ++b) d[size_t(b)] = int(rng() % 3);
  const double base = *routine_index(0, days);
  std::vector<Labels> shuffled = {days[0], days[3], days[1], days[4], days[2]};
  CHECK(*routine_index(0, shuffled) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("survey parsing and severe threshold") {
  size_t rejected = 0;
  const auto entries = parse_survey(
      "participant_id,local_date,sadness_level\n"
      "p1,2024-01-02,4\n"
      "p1,2024-01-03,3\n"
      "p2,2024-01-02,9\n"      // out of range -> rejected
      "p2,bad-date,1\n",       // bad date -> rejected
      &rejected);
  REQUIRE(entries.size() == 2);
  CHECK(rejected == 2);
  CHECK(severe_sadness(entries[0].sadness_level));
  CHECK(!severe_sadness(entries[1].sadness_level));  // "quite a bit" is not severe
}

TEST_CASE("stationary participant: the full phenotype row") {
  // always-on at home for three days
  std::vector<DayTrace> days;
  for (int day = 0; day < 3; ++day) {
    std::vector<GpsPoint> pts;
    for (int s = 0; s < 86400; s += 600)
      pts.push_back(at(int64_t(day) * 86400 + s, 30.0, -97.0));
    days.push_back(make_day(std::move(pts), LocalDate(19724 + day)));
  }
  SurveyLookup survey;
  survey[{"p1", 19724}] = 4;
  survey[{"p1", 19725}] = 1;
  const auto result =
      compute_daily_phenotypes("p1", Group::pre, 0, days, {}, survey);

  REQUIRE(result.days.size() == 3);
  REQUIRE(result.home_cluster.has_value());
  const auto& r0 = result.days[0];
  CHECK(*r0.num_pls == 1);
  CHECK(*r0.ent_pls == 0.0);
  CHECK(*r0.perc_home == 1.0);
  CHECK(*r0.total_dist == 0.0);
  CHECK(*r0.max_dist == 0.0);
  CHECK(*r0.loc_var == 0.0);
  CHECK(*r0.routine_idx == 1.0);
  CHECK(r0.severe_sad.has_value());
  CHECK(*r0.severe_sad);
  CHECK(!*result.days[1].severe_sad);
  CHECK(!result.days[2].severe_sad.has_value());  // no survey row that day
}

TEST_CASE("two-place commuter: num_pls 2 and perc_home tracks the split") {
  const double far = lat_step(3000.0);
  std::vector<DayTrace> days;
  for (int day = 0; day < 2; ++day) {
    std::vector<GpsPoint> pts;
    // home 00:00-09:00 and 17:00-24:00, campus 09:10-16:50
    for (int s = 0; s < 9 * 3600; s += 600)
      pts.push_back(at(int64_t(day) * 86400 + s, 30.0, -97.0));
    for (int s = 9 * 3600 + 600; s < 17 * 3600 - 600; s += 600)
      pts.push_back(at(int64_t(day) * 86400 + s, 30.0 + far, -97.0));
    for (int s = 17 * 3600; s < 24 * 3600; s += 600)
      pts.push_back(at(int64_t(day) * 86400 + s, 30.0, -97.0));
    days.push_back(make_day(std::move(pts), LocalDate(19724 + day)));
  }
  const auto result = compute_daily_phenotypes("p1", Group::pre, 0, days, {}, {});
  REQUIRE(result.days.size() == 2);
  CHECK(result.clusters.size() == 2);
  CHECK(*result.days[0].num_pls == 2);
  CHECK(*result.days[0].ent_pls > 0.0);
  REQUIRE(result.home_cluster.has_value());
  // 16 of 48 bins away from home
  CHECK(*result.days[0].perc_home == doctest::Approx(32.0 / 48.0).epsilon(0.05));
  // perc_home + share away = 1 by construction
  CHECK(*result.days[0].perc_home <= 1.0);
}

TEST_CASE("no overnight data leaves home undefined and perc_home missing") {
  std::vector<DayTrace> days;
  std::vector<GpsPoint> pts;
  for (int s = 10 * 3600; s < 16 * 3600; s += 600) pts.push_back(at(s, 30.0, -97.0));
  days.push_back(make_day(std::move(pts)));
  const auto result = compute_daily_phenotypes("p1", Group::pre, 0, days, {}, {});
  CHECK(!result.home_cluster.has_value());
  CHECK(!result.days[0].perc_home.has_value());
  CHECK(*result.days[0].num_pls == 1);
}

TEST_CASE("num_pls is invariant to whole-day time translation") {
  const double far = lat_step(2000.0);
  std::vector<GpsPoint> pts;
  for (int s = 0; s < 8 * 3600; s += 600) pts.push_back(at(s, 30.0, -97.0));
  for (int s = 9 * 3600; s < 12 * 3600; s += 600) pts.push_back(at(s, 30.0 + far, -97.0));
  const auto base = compute_daily_phenotypes(
      "p1", Group::pre, 0, {make_day(pts)}, {}, {});

  std::vector<GpsPoint> moved = pts;
  for (auto& p : moved) p.timestamp_ms += 3 * kDay;
  DayTrace d2 = make_day(std::move(moved), 19727);
  const auto shifted = compute_daily_phenotypes("p1", Group::pre, 0, {d2}, {}, {});
  CHECK(*base.days[0].num_pls == *shifted.days[0].num_pls);
}

TEST_CASE("phenotype csv round trip with missing fields") {
  DailyPhenotypes a;
  a.participant_id = "p1";
  a.date = 19724;
  a.group = Group::pre;
  a.loc_var = 12.5;
  a.num_pls = 3;
  a.ent_pls = 0.75;
  a.perc_home = 0.5;
  a.total_dist = 1234.5;
  a.max_dist = 600.0;
  a.routine_idx = 0.25;
  a.severe_sad = true;
  DailyPhenotypes b;
  b.participant_id = "p2";
  b.date = 19725;
  b.group = Group::post;
  b.num_pls = 0;
  b.ent_pls = 0.0;
  b.total_dist = 0.0;
  b.max_dist = 0.0;
  const std::string csv = phenotypes_to_csv({a, b});
  CHECK(csv.find("loc.var,num.pls,ent.pls,perc.home,total.dist,max.dist,routine.idx") !=
        std::string::npos);
  const auto parsed = phenotypes_from_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(*parsed[0].severe_sad);
  CHECK(*parsed[0].num_pls == 3);
  CHECK(!parsed[1].loc_var.has_value());
  CHECK(!parsed[1].severe_sad.has_value());
  CHECK(!parsed[1].perc_home.has_value());
}
