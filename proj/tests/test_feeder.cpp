#include <doctest.h>

#include <cmath>

#include "rampcap/feeder.hpp"

using namespace rampcap;

namespace {

// 24-hour aggregated feeder profile used across the project's fixtures.
FeederProfile day_profile() {
  FeederProfile p;
  p.customer_load = {13.50, 12.50, 11.80, 11.70, 12.10, 12.50, 12.80, 14.00,
                     14.60, 15.20, 16.00, 17.00, 18.50, 18.00, 17.00, 16.70,
                     17.00, 18.00, 20.25, 20.65, 19.00, 17.00, 14.50, 13.80};
  p.customer_solar = {0.00, 0.00, 0.00,  0.00,  0.00,  0.00, 0.00, 0.00,
                      1.00, 4.00, 8.00,  11.50, 14.00, 14.20, 14.00, 12.40,
                      11.00, 6.00, 2.75, 0.85,  0.00,  0.00, 0.00, 0.00};
  return p;
}

const double kExpectedNet[24] = {
    13.50, 12.50, 11.80, 11.70, 12.10, 12.50, 12.80, 14.00,
    13.60, 11.20, 8.00,  5.50,  4.50,  3.80,  3.00,  4.30,
    6.00,  12.00, 17.50, 19.80, 19.00, 17.00, 14.50, 13.80};

} // namespace

TEST_SUITE("feeder") {

TEST_CASE("net load is customer load minus solar") {
  const auto net = feeder::aggregate_net_load(day_profile());
  REQUIRE(net.size() == 24);
  for (int t = 0; t < 24; ++t)
    CHECK(net[t] == doctest::Approx(kExpectedNet[t]).epsilon(1e-12));
}

TEST_CASE("mismatched profile lengths are rejected") {
  FeederProfile p = day_profile();
  p.customer_solar.pop_back();
  CHECK_THROWS(feeder::aggregate_net_load(p));
}

TEST_CASE("worst one-hour and three-hour ramps of the day profile") {
  const auto net = feeder::aggregate_net_load(day_profile());
  const auto stats = feeder::ramp_stats(net, {2, 3});
  // Evening pickup: 6.00 -> 12.00 between hours 17 and 18.
  CHECK(stats.max_1h_ramp == doctest::Approx(6.00).epsilon(1e-9));
  CHECK(stats.argmax_1h_hour == 18);
  // (19.80 - 6.00) / 3 over hours 17..20.
  REQUIRE(stats.kh_ramps.size() == 2);
  CHECK(stats.kh_ramps[1].k == 3);
  CHECK(stats.kh_ramps[1].value == doctest::Approx(4.60).epsilon(1e-9));
  CHECK(stats.kh_ramps[1].argmax_hour == 17);
}

TEST_CASE("ramp bounds translate the utility limit hour by hour") {
  const auto net = feeder::aggregate_net_load(day_profile());
  const auto policy = feeder::ramp_bounds(net, 2.0);
  CHECK(policy.enabled());
  REQUIRE(policy.lower_bounds.size() == 24);
  // Hour 1 has no predecessor: unbounded without an initial utility power.
  CHECK(!std::isfinite(policy.lower_bounds[0]));
  CHECK(!std::isfinite(policy.upper_bounds[0]));
  // Hour 18 (index 17): net climbs by 6.00, so the exchange change must sit
  // in [-8, -4] to keep the utility ramp within 2.
  CHECK(policy.lower_bounds[17] == doctest::Approx(-8.0));
  CHECK(policy.upper_bounds[17] == doctest::Approx(-4.0));
  // Hour 19 (index 18): net climbs by 5.50.
  CHECK(policy.lower_bounds[18] == doctest::Approx(-7.5));
  CHECK(policy.upper_bounds[18] == doctest::Approx(-3.5));
  // Sanity across all hours: upper - lower == 2 * delta.
  for (int t = 1; t < 24; ++t)
    CHECK(policy.upper_bounds[t] - policy.lower_bounds[t] ==
          doctest::Approx(4.0));
}

TEST_CASE("infinite delta disables capping") {
  const auto net = feeder::aggregate_net_load(day_profile());
  const auto policy =
      feeder::ramp_bounds(net, std::numeric_limits<double>::infinity());
  CHECK(!policy.enabled());
  for (int t = 0; t < 24; ++t) {
    CHECK(policy.lower_bounds[t] == -std::numeric_limits<double>::infinity());
    CHECK(policy.upper_bounds[t] == std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("initial utility power bounds the first hour") {
  std::vector<double> net = {10.0, 11.0, 12.0};
  const auto policy = feeder::ramp_bounds(net, 2.0, 9.5);
  // |(P^M_1 + 10.0) - 9.5| <= 2  =>  P^M_1 in [-2.5, 1.5].
  CHECK(policy.lower_bounds[0] == doctest::Approx(-2.5));
  CHECK(policy.upper_bounds[0] == doctest::Approx(1.5));
}

TEST_CASE("invalid delta is rejected") {
  std::vector<double> net = {1.0, 2.0};
  CHECK_THROWS(feeder::ramp_bounds(net, 0.0));
  CHECK_THROWS(feeder::ramp_bounds(net, -1.0));
  CHECK_THROWS(feeder::ramp_bounds({1.0}, 2.0));
}

TEST_CASE("utility power recombines exchange and net load") {
  std::vector<double> net = {10.0, 12.0};
  std::vector<double> exch = {-1.0, 2.5};
  const auto pu = feeder::utility_power(exch, net);
  CHECK(pu[0] == doctest::Approx(9.0));
  CHECK(pu[1] == doctest::Approx(14.5));
}

} // TEST_SUITE
