// Tests for the independent schedule auditor and the Monte Carlo re-dispatch
// harness. Every expected violation magnitude below is computed by hand from
// the fixture numbers, so a wrong audit cannot certify itself.
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rampcap/benders/loop.hpp"
#include "rampcap/feeder.hpp"
#include "rampcap/milp/solve.hpp"
#include "rampcap/oracle/check.hpp"
#include "rampcap/oracle/monte_carlo.hpp"
#include "rampcap/sched/build.hpp"
#include "support/microgrid_fixtures.hpp"

using namespace rampcap;
using testsupport::load_only_uncertainty;
using testsupport::no_policy;
using testsupport::reference_config;
using testsupport::reference_feeder;
using testsupport::reference_price;
using testsupport::ToyMicrogrid;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const oracle::ViolationReport& rep) {
  std::ostringstream out;
  out << rep.entries.size() << " violation(s):";
  for (const auto& e : rep.entries)
    out << " [" << e.tag << " " << e.entity << " h" << e.hour << " lhs="
        << e.lhs << " bound=" << e.bound << " mag=" << e.magnitude << "]";
  return out.str();
}

// One battery serving a 2 MW town for a single hour.
MicrogridConfig battery_config() {
  MicrogridConfig cfg;
  cfg.time_grid.horizon_hours = 1;
  cfg.line_capacity = 5.0;
  StorageUnit b;
  b.id = "b1";
  b.p_ch_max = 2.0;
  b.p_dch_max = 3.0;
  b.c_min = 0.0;
  b.c_max = 12.0;
  b.c_initial = 10.0;
  b.efficiency = 0.9;
  b.min_charge_time = 1;
  b.min_discharge_time = 1;
  cfg.storage_units.push_back(b);
  FixedProfile town;
  town.id = "town";
  town.kind = ProfileKind::FixedLoad;
  town.values = {2.0};
  cfg.fixed_profiles.push_back(town);
  return cfg;
}

Schedule battery_schedule(double stated_energy) {
  Schedule s;
  StorageSchedule b;
  b.id = "b1";
  b.power = {2.0};
  b.discharging = {1};
  b.charging = {0};
  b.energy = {stated_energy};
  s.storage.push_back(b);
  s.grid_exchange = {0.0};
  return s;
}

// A load-only pass-through grid: everything comes over the line.
MicrogridConfig wire_config(std::vector<double> town_load) {
  MicrogridConfig cfg;
  cfg.time_grid.horizon_hours = (int)town_load.size();
  cfg.line_capacity = 10.0;
  FixedProfile town;
  town.id = "town";
  town.kind = ProfileKind::FixedLoad;
  town.values = std::move(town_load);
  cfg.fixed_profiles.push_back(town);
  return cfg;
}

PriceSeries flat_price(int horizon, double value = 30.0) {
  return {std::vector<double>((size_t)horizon, value)};
}

// One unit exporting everything it makes (no local demand), so any on/power
// pattern balances with grid_exchange = -power.
MicrogridConfig unit_config(int horizon, const DispatchableUnit& g) {
  MicrogridConfig cfg;
  cfg.time_grid.horizon_hours = horizon;
  cfg.line_capacity = 10.0;
  cfg.dispatchable_units.push_back(g);
  return cfg;
}

Schedule unit_schedule(const std::string& id, std::vector<int> on,
                       std::vector<double> power) {
  Schedule s;
  UnitSchedule u;
  u.id = id;
  u.on = std::move(on);
  u.power = std::move(power);
  s.grid_exchange.reserve(u.power.size());
  for (double p : u.power) s.grid_exchange.push_back(-p);
  s.units.push_back(u);
  return s;
}

DispatchableUnit base_unit() {
  DispatchableUnit g;
  g.id = "u1";
  g.p_min = 1.0;
  g.p_max = 5.0;
  g.ramp_up = 10.0;
  g.ramp_down = 10.0;
  g.min_up = 1;
  g.min_down = 1;
  g.initial_off_hours = 24;  // parked long ago; free to start at hour 1
  return g;
}

// One deferrable load fed entirely over the line: grid_exchange = load power.
MicrogridConfig flex_config() {
  MicrogridConfig cfg;
  cfg.time_grid.horizon_hours = 4;
  cfg.line_capacity = 10.0;
  AdjustableLoad d;
  d.id = "f1";
  d.d_min = {0.0, 0.5, 0.5, 0.0};
  d.d_max = {0.0, 2.0, 2.0, 0.0};
  d.min_on = 2;
  d.energy_required = 2.0;
  d.window_start = 2;
  d.window_end = 3;
  cfg.adjustable_loads.push_back(d);
  return cfg;
}

Schedule flex_schedule(std::vector<int> on, std::vector<double> power) {
  Schedule s;
  LoadSchedule l;
  l.id = "f1";
  l.on = std::move(on);
  l.power = std::move(power);
  s.grid_exchange = l.power;
  s.loads.push_back(l);
  return s;
}

UncertaintySpec no_uncertainty() {
  UncertaintySpec u;
  u.budget_hours = 0;
  return u;
}

// Commitment-dependent costs for the identity check below.
ToyMicrogrid costly_toy() {
  ToyMicrogrid toy;
  auto& g = toy.cfg.dispatchable_units[0];
  g.cost_noload = 3.0;
  g.cost_startup = 7.0;
  g.cost_shutdown = 2.0;
  return toy;
}

std::vector<double> apply_deviation(const std::vector<double>& values,
                                    const std::vector<double>& dev) {
  std::vector<double> out = values;
  for (size_t t = 0; t < out.size() && t < dev.size(); ++t)
    out[t] *= 1.0 + dev[t];
  return out;
}

std::vector<double> round_binaries(const sched::BuiltProblem& prob,
                                   const MicrogridConfig& cfg,
                                   const std::vector<double>& x) {
  std::vector<double> bins;
  for (const auto& key : sched::binary_schedule_keys(cfg))
    bins.push_back(std::round(x[(size_t)prob.vars.id(key.entity, key.sym,
                                                     key.hour)]));
  return bins;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("storage energy recursion is recomputed from scratch") {
  const auto cfg = battery_config();
  const auto price = flat_price(1);

  // Discharging 2 MW for one hour at 90% efficiency drains 2/0.9 MWh:
  // 10 - 2/0.9 = 7.7778 MWh (and nothing else in the hour is off).
  const double drained = 10.0 - 2.0 / 0.9;
  CHECK(drained == doctest::Approx(7.7778).epsilon(1e-4));

  const auto good = oracle::check_schedule(battery_schedule(drained), cfg,
                                           price, no_policy());
  CHECK_MESSAGE(good.ok(), describe(good));
  CHECK(good.recomputed_cost == doctest::Approx(0.0).epsilon(1e-9));

  // Stating 8.2 MWh overstates the remaining energy by 8.2 - 7.7778.
  const auto bad = oracle::check_schedule(battery_schedule(8.2), cfg, price,
                                          no_policy());
  REQUIRE(bad.entries.size() == 1);
  CHECK(bad.entries[0].tag == "eq14");
  CHECK(bad.entries[0].entity == "b1");
  CHECK(bad.entries[0].hour == 1);
  CHECK(bad.entries[0].lhs == doctest::Approx(8.2));
  CHECK(bad.entries[0].bound == doctest::Approx(drained));
  CHECK(bad.entries[0].magnitude == doctest::Approx(0.4222).epsilon(1e-3));
  CHECK(bad.worst_by_tag.at("eq14") ==
        doctest::Approx(0.4222).epsilon(1e-3));
  CHECK_FALSE(bad.ok());
}

TEST_CASE("simultaneous charge and discharge flags are caught") {
  const auto cfg = battery_config();
  Schedule s = battery_schedule(10.0);
  s.storage[0].power = {0.0};
  s.storage[0].discharging = {1};
  s.storage[0].charging = {1};
  s.grid_exchange = {2.0};  // the town draws everything over the line

  const auto rep =
      oracle::check_schedule(s, cfg, flat_price(1), no_policy());
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].tag == "eq13");
  CHECK(rep.entries[0].entity == "b1");
  CHECK(rep.entries[0].hour == 1);
  CHECK(rep.entries[0].lhs == doctest::Approx(2.0));
  CHECK(rep.entries[0].bound == doctest::Approx(1.0));
  CHECK(rep.entries[0].magnitude == doctest::Approx(1.0));
}

TEST_CASE("exchange change caps are audited against the handed bounds") {
  const auto cfg = wire_config({0.0, 1.5});
  const auto price = flat_price(2);
  RampPolicy pol;
  pol.delta = 1.0;
  pol.lower_bounds = {-kInf, -1.0};
  pol.upper_bounds = {kInf, 1.0};

  // Import jumps 0 -> 1.5 MW while the hour-2 change window is [-1, 1].
  Schedule up;
  up.grid_exchange = {0.0, 1.5};
  const auto rep_up = oracle::check_schedule(up, cfg, price, pol);
  REQUIRE(rep_up.entries.size() == 1);
  CHECK(rep_up.entries[0].tag == "eq21");
  CHECK(rep_up.entries[0].entity == "");
  CHECK(rep_up.entries[0].hour == 2);
  CHECK(rep_up.entries[0].lhs == doctest::Approx(1.5));
  CHECK(rep_up.entries[0].bound == doctest::Approx(1.0));
  CHECK(rep_up.entries[0].magnitude == doctest::Approx(0.5));
  CHECK(rep_up.worst_by_tag.at("eq21") == doctest::Approx(0.5));

  // Mirror move: 0 -> -1.5 MW breaks the lower bound by the same margin,
  // but then the hour-2 balance is off by 3 MW (load still 1.5).
  Schedule down;
  down.grid_exchange = {0.0, -1.5};
  const auto rep_down = oracle::check_schedule(down, cfg, price, pol);
  REQUIRE(rep_down.entries.size() == 2);
  CHECK(rep_down.worst_by_tag.at("eq21") == doctest::Approx(0.5));
  CHECK(rep_down.worst_by_tag.at("eq4") == doctest::Approx(3.0));

  // The same move passes when capping is disabled.
  CHECK(oracle::check_schedule(up, cfg, price, no_policy()).ok());
}

TEST_CASE("power balance and line limits are localized per hour") {
  const auto cfg = wire_config({0.0, 1.5});
  Schedule s;
  s.grid_exchange = {0.0, 2.0};  // half a megawatt of phantom import
  const auto rep =
      oracle::check_schedule(s, cfg, flat_price(2), no_policy());
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].tag == "eq4");
  CHECK(rep.entries[0].hour == 2);
  CHECK(rep.entries[0].lhs == doctest::Approx(2.0));
  CHECK(rep.entries[0].bound == doctest::Approx(1.5));
  CHECK(rep.entries[0].magnitude == doctest::Approx(0.5));

  const auto big = wire_config({0.0, 20.0});
  Schedule huge;
  huge.grid_exchange = {0.0, 20.0};  // balanced but over the 10 MW line
  const auto rep2 =
      oracle::check_schedule(huge, big, flat_price(2), no_policy());
  REQUIRE(rep2.entries.size() == 1);
  CHECK(rep2.entries[0].tag == "eq5");
  CHECK(rep2.entries[0].hour == 2);
  CHECK(rep2.entries[0].magnitude == doctest::Approx(10.0));
}

TEST_CASE("unit output windows and ramp rates") {
  const auto g = base_unit();
  const auto cfg = unit_config(2, g);
  const auto price = flat_price(2);

  // 0.5 MW is below the 1 MW floor; 6 MW is above the 5 MW ceiling.
  const auto windows = oracle::check_schedule(
      unit_schedule("u1", {1, 1}, {0.5, 6.0}), cfg, price, no_policy());
  REQUIRE(windows.entries.size() == 2);
  CHECK(windows.entries[0].tag == "eq6");
  CHECK(windows.entries[0].hour == 1);
  CHECK(windows.entries[0].magnitude == doctest::Approx(0.5));
  CHECK(windows.entries[1].tag == "eq6");
  CHECK(windows.entries[1].hour == 2);
  CHECK(windows.entries[1].magnitude == doctest::Approx(1.0));

  // While committed the output may sit anywhere in [1, 5].
  const auto inside = oracle::check_schedule(
      unit_schedule("u1", {1, 1}, {1.0, 5.0}), cfg, price, no_policy());
  CHECK_MESSAGE(inside.ok(), describe(inside));

  auto slow = g;
  slow.ramp_up = 2.0;
  slow.ramp_down = 2.0;
  const auto scfg = unit_config(2, slow);

  // 1 -> 4 MW climbs 3 MW against a 2 MW/h limit.
  const auto climb = oracle::check_schedule(
      unit_schedule("u1", {1, 1}, {1.0, 4.0}), scfg, price, no_policy());
  REQUIRE(climb.entries.size() == 1);
  CHECK(climb.entries[0].tag == "eq7");
  CHECK(climb.entries[0].hour == 2);
  CHECK(climb.entries[0].magnitude == doctest::Approx(1.0));

  // 4 -> 1 MW drops 3 MW against the same limit downward.
  const auto drop = oracle::check_schedule(
      unit_schedule("u1", {1, 1}, {4.0, 1.0}), scfg, price, no_policy());
  REQUIRE(drop.entries.size() == 1);
  CHECK(drop.entries[0].tag == "eq8");
  CHECK(drop.entries[0].hour == 2);
  CHECK(drop.entries[0].magnitude == doctest::Approx(1.0));
}

TEST_CASE("minimum up and down time accounting") {
  auto g = base_unit();
  g.min_up = 3;
  g.min_down = 2;
  g.initial_on = true;
  g.initial_on_hours = 2;
  const auto cfg = unit_config(4, g);
  const auto price = flat_price(4);

  // Two pre-horizon hours plus hours 1-2 make a 4 hour run: long enough.
  // The shutdown at hour 3 runs to the edge of the plan, so its length is
  // not yet decided and must not be flagged.
  const auto good = oracle::check_schedule(
      unit_schedule("u1", {1, 1, 0, 0}, {1.0, 1.0, 0.0, 0.0}), cfg, price,
      no_policy());
  CHECK_MESSAGE(good.ok(), describe(good));

  // The single off hour between two runs violates the 2 hour minimum down
  // time; everything else about the pattern is legal.
  const auto blip = oracle::check_schedule(
      unit_schedule("u1", {1, 0, 1, 1}, {1.0, 0.0, 1.0, 1.0}), cfg, price,
      no_policy());
  REQUIRE(blip.entries.size() == 1);
  CHECK(blip.entries[0].tag == "eq10");
  CHECK(blip.entries[0].hour == 2);
  CHECK(blip.entries[0].lhs == doctest::Approx(1.0));
  CHECK(blip.entries[0].bound == doctest::Approx(2.0));

  // Switching off at hour 1 cuts a 2 hour old run short of its 3 hour
  // minimum even though no in-horizon on-run exists.
  const auto cut = oracle::check_schedule(
      unit_schedule("u1", {0, 0, 0, 0}, {0.0, 0.0, 0.0, 0.0}), cfg, price,
      no_policy());
  REQUIRE(cut.entries.size() == 1);
  CHECK(cut.entries[0].tag == "eq9");
  CHECK(cut.entries[0].hour == 1);
  CHECK(cut.entries[0].lhs == doctest::Approx(2.0));
  CHECK(cut.entries[0].bound == doctest::Approx(3.0));

  // Symmetric pre-horizon case: off one hour, needs two, turns on at once.
  auto h = base_unit();
  h.min_down = 2;
  h.initial_on = false;
  h.initial_off_hours = 1;
  const auto hcfg = unit_config(4, h);
  const auto early = oracle::check_schedule(
      unit_schedule("u1", {1, 1, 1, 1}, {1.0, 1.0, 1.0, 1.0}), hcfg, price,
      no_policy());
  REQUIRE(early.entries.size() == 1);
  CHECK(early.entries[0].tag == "eq10");
  CHECK(early.entries[0].hour == 1);
  CHECK(early.entries[0].lhs == doctest::Approx(1.0));
  CHECK(early.entries[0].bound == doctest::Approx(2.0));
}

TEST_CASE("adjustable load window, run length and energy audits") {
  const auto cfg = flex_config();
  const auto price = flat_price(4);

  // Runs hours 2-3 at 1 MW each: window kept, 2 h >= 2 h, energy 2 MWh.
  const auto good = oracle::check_schedule(
      flex_schedule({0, 1, 1, 0}, {0.0, 1.0, 1.0, 0.0}), cfg, price,
      no_policy());
  CHECK_MESSAGE(good.ok(), describe(good));

  // A single running hour inside a window that closes before the horizon
  // is a real run-length violation (the window cannot extend it later).
  const auto one_hour = oracle::check_schedule(
      flex_schedule({0, 0, 1, 0}, {0.0, 0.0, 2.0, 0.0}), cfg, price,
      no_policy());
  REQUIRE(one_hour.entries.size() == 1);
  CHECK(one_hour.entries[0].tag == "eq19");
  CHECK(one_hour.entries[0].hour == 3);
  CHECK(one_hour.entries[0].lhs == doctest::Approx(1.0));
  CHECK(one_hour.entries[0].bound == doctest::Approx(2.0));

  // Only 1.5 of the 2 MWh obligation is served.
  const auto short_energy = oracle::check_schedule(
      flex_schedule({0, 1, 1, 0}, {0.0, 0.5, 1.0, 0.0}), cfg, price,
      no_policy());
  REQUIRE(short_energy.entries.size() == 1);
  CHECK(short_energy.entries[0].tag == "eq20");
  CHECK(short_energy.entries[0].hour == 0);
  CHECK(short_energy.entries[0].lhs == doctest::Approx(1.5));
  CHECK(short_energy.entries[0].bound == doctest::Approx(2.0));
  CHECK(short_energy.entries[0].magnitude == doctest::Approx(0.5));

  // Running before the window opens is flagged twice: the on flag and the
  // nonzero power draw.
  const auto early = oracle::check_schedule(
      flex_schedule({1, 1, 1, 0}, {0.5, 1.0, 1.0, 0.0}), cfg, price,
      no_policy());
  REQUIRE(early.entries.size() == 2);
  CHECK(early.entries[0].tag == "eq18");
  CHECK(early.entries[0].hour == 1);
  CHECK(early.entries[1].tag == "eq18");
  CHECK(early.entries[1].hour == 1);
  CHECK(early.worst_by_tag.at("eq18") == doctest::Approx(1.0));
}

TEST_CASE("malformed schedules are rejected, not scored") {
  const auto cfg = battery_config();
  const auto price = flat_price(1);

  Schedule empty;  // no storage entry, no exchange series
  CHECK_THROWS_AS(oracle::check_schedule(empty, cfg, price, no_policy()),
                  std::invalid_argument);

  auto wrong_id = battery_schedule(10.0 - 2.0 / 0.9);
  wrong_id.storage[0].id = "b2";
  CHECK_THROWS_AS(oracle::check_schedule(wrong_id, cfg, price, no_policy()),
                  std::invalid_argument);

  auto bad_flag = battery_schedule(10.0 - 2.0 / 0.9);
  bad_flag.storage[0].discharging = {2};
  CHECK_THROWS_AS(oracle::check_schedule(bad_flag, cfg, price, no_policy()),
                  std::invalid_argument);

  auto nan_power = battery_schedule(10.0 - 2.0 / 0.9);
  nan_power.storage[0].power = {std::nan("")};
  CHECK_THROWS_AS(oracle::check_schedule(nan_power, cfg, price, no_policy()),
                  std::invalid_argument);

  auto short_series = battery_schedule(10.0 - 2.0 / 0.9);
  short_series.grid_exchange.clear();
  CHECK_THROWS_AS(
      oracle::check_schedule(short_series, cfg, price, no_policy()),
      std::invalid_argument);

  CHECK_THROWS_AS(oracle::check_schedule(battery_schedule(10.0 - 2.0 / 0.9),
                                         cfg, flat_price(3), no_policy()),
                  std::invalid_argument);

  // An extra entity the config does not know is a count mismatch.
  const auto wire = wire_config({0.0});
  auto stray = battery_schedule(10.0 - 2.0 / 0.9);
  CHECK_THROWS_AS(oracle::check_schedule(stray, wire, price, no_policy()),
                  std::invalid_argument);
}

TEST_CASE("solver schedules pass the audit and the cost recomputes") {
  const auto cfg = reference_config();
  const auto price = reference_price();
  const auto net = feeder::aggregate_net_load(reference_feeder());
  const auto ramp = feeder::ramp_bounds(net, 3.0, cfg.initial_utility_power);

  const auto prob = sched::build_monolithic(cfg, price, ramp, 1e4);
  const auto sol = milp::solve_milp(prob.model);
  REQUIRE(sol.status == milp::MipStatus::Optimal);
  REQUIRE(sched::penalty_usage(prob, sol.x) <= 1e-6);

  const auto schedule = sched::extract_schedule(prob, sol.x, sol.objective);
  const auto rep = oracle::check_schedule(schedule, cfg, price, ramp);
  CHECK_MESSAGE(rep.ok(), describe(rep));
  CHECK(rep.recomputed_cost ==
        doctest::Approx(sol.objective).epsilon(1e-6));
}

TEST_CASE("robust schedules audit clean against their worst realization") {
  const ToyMicrogrid toy;
  const auto spec = load_only_uncertainty(0.25, 1);
  const auto res =
      benders::solve_robust(toy.cfg, toy.feeder, toy.price, 1.0, spec);
  REQUIRE(res.converged);
  REQUIRE(res.penalty_used <= 1e-6);

  // Rebuild the exchange-change bounds at the realized feeder profile and
  // audit the final dispatch against the realized price.
  const auto& dev = res.worst_case.realization;
  FeederProfile realized = toy.feeder;
  realized.customer_load =
      apply_deviation(realized.customer_load, dev.load_deviation);
  realized.customer_solar =
      apply_deviation(realized.customer_solar, dev.solar_deviation);
  PriceSeries realized_price{
      apply_deviation(toy.price.values, dev.price_deviation)};
  const auto ramp =
      feeder::ramp_bounds(feeder::aggregate_net_load(realized), 1.0,
                          toy.cfg.initial_utility_power);

  const auto rep =
      oracle::check_schedule(res.schedule, toy.cfg, realized_price, ramp);
  CHECK_MESSAGE(rep.ok(), describe(rep));
  CHECK(rep.recomputed_cost == doctest::Approx(res.objective).epsilon(1e-6));
}

TEST_CASE("re-dispatch at the forecast reproduces the one-shot optimum") {
  const auto toy = costly_toy();
  const auto ramp =
      feeder::ramp_bounds(feeder::aggregate_net_load(toy.feeder), 1.0,
                          toy.cfg.initial_utility_power);
  const auto prob = sched::build_monolithic(toy.cfg, toy.price, ramp, 1e4);
  const auto sol = milp::solve_milp(prob.model);
  REQUIRE(sol.status == milp::MipStatus::Optimal);

  const auto bins = round_binaries(prob, toy.cfg, sol.x);
  const auto sim = oracle::simulate_realization(
      bins, toy.cfg, toy.price, toy.feeder, 1.0, UncertainRealization::zero(3),
      no_uncertainty());
  CHECK(sim.ramp_feasible);
  CHECK(sim.slack_used <= 1e-6);
  CHECK(sim.cost + sched::binary_commitment_cost(toy.cfg, bins) ==
        doctest::Approx(sol.objective).epsilon(1e-6));
}

TEST_CASE("realizations outside the declared set are rejected") {
  const ToyMicrogrid toy;
  const auto spec = load_only_uncertainty(0.1, 1);

  auto too_large = UncertainRealization::zero(3);
  too_large.load_deviation[1] = 0.2;
  CHECK_THROWS_AS(
      oracle::simulate_realization(toy.committed, toy.cfg, toy.price,
                                   toy.feeder, 1.0, too_large, spec),
      std::invalid_argument);

  auto too_many = UncertainRealization::zero(3);
  too_many.load_deviation[0] = 0.05;
  too_many.load_deviation[2] = -0.05;
  CHECK_THROWS_AS(
      oracle::simulate_realization(toy.committed, toy.cfg, toy.price,
                                   toy.feeder, 1.0, too_many, spec),
      std::invalid_argument);

  auto inactive = UncertainRealization::zero(3);
  inactive.solar_deviation[1] = 0.05;
  CHECK_THROWS_AS(
      oracle::simulate_realization(toy.committed, toy.cfg, toy.price,
                                   toy.feeder, 1.0, inactive, spec),
      std::invalid_argument);

  auto fractional = toy.committed;
  fractional[1] = 0.5;
  CHECK_THROWS_AS(
      oracle::simulate_realization(fractional, toy.cfg, toy.price, toy.feeder,
                                   1.0, UncertainRealization::zero(3), spec),
      std::invalid_argument);

  // A deviation sitting exactly on the boundary is inside the set.
  auto edge = UncertainRealization::zero(3);
  edge.load_deviation[1] = 0.1;
  const auto sim = oracle::simulate_realization(
      toy.committed, toy.cfg, toy.price, toy.feeder, 1.0, edge, spec);
  CHECK(std::isfinite(sim.cost));
}

TEST_CASE("zero-budget sampling is deterministic and slack free") {
  const ToyMicrogrid toy;
  const auto spec = load_only_uncertainty(0.25, 0);

  const auto sum = oracle::monte_carlo(toy.committed, toy.cfg, toy.price,
                                       toy.feeder, 1.0, spec, 16, 7);
  CHECK(sum.samples == 16);
  CHECK(sum.feasible_count == 16);
  CHECK(sum.cost_min == sum.cost_max);
  CHECK(sum.cost_mean == doctest::Approx(sum.cost_max).epsilon(1e-12));
  CHECK(sum.slack_max <= 1e-9);

  // With nothing to draw, the seed cannot matter.
  const auto other = oracle::monte_carlo(toy.committed, toy.cfg, toy.price,
                                         toy.feeder, 1.0, spec, 16, 99);
  CHECK(other.cost_max == sum.cost_max);

  CHECK_THROWS_AS(oracle::monte_carlo(toy.committed, toy.cfg, toy.price,
                                      toy.feeder, 1.0, spec, 0, 7),
                  std::invalid_argument);

  auto bad = load_only_uncertainty(0.25, 99);  // budget beyond the horizon
  CHECK_THROWS_AS(oracle::monte_carlo(toy.committed, toy.cfg, toy.price,
                                      toy.feeder, 1.0, bad, 16, 7),
                  std::invalid_argument);
}

TEST_CASE("identical seeds reproduce identical summaries") {
  const ToyMicrogrid toy;
  const auto spec = load_only_uncertainty(0.25, 2);
  const auto a = oracle::monte_carlo(toy.committed, toy.cfg, toy.price,
                                     toy.feeder, 1.0, spec, 40, 42);
  const auto b = oracle::monte_carlo(toy.committed, toy.cfg, toy.price,
                                     toy.feeder, 1.0, spec, 40, 42);
  CHECK(a.cost_min == b.cost_min);
  CHECK(a.cost_mean == b.cost_mean);
  CHECK(a.cost_max == b.cost_max);
  CHECK(a.slack_max == b.slack_max);
  CHECK(a.feasible_count == b.feasible_count);

  const auto c = oracle::monte_carlo(toy.committed, toy.cfg, toy.price,
                                     toy.feeder, 1.0, spec, 40, 43);
  CHECK(c.cost_mean != a.cost_mean);  // different draws, different dispatch
}

TEST_CASE("sampled costs stay under the adversarial worst case") {
  const ToyMicrogrid toy;
  const auto spec = load_only_uncertainty(0.25, 1);
  const auto res =
      benders::solve_robust(toy.cfg, toy.feeder, toy.price, 1.0, spec);
  REQUIRE(res.converged);

  const auto mc = oracle::monte_carlo(res.commitment, toy.cfg, toy.price,
                                      toy.feeder, 1.0, spec, 300, 42);
  CHECK(mc.samples == 300);
  CHECK(mc.feasible_count == 300);
  CHECK(mc.slack_max <= 1e-6);
  CHECK(mc.cost_min <= mc.cost_mean + 1e-9);
  CHECK(mc.cost_mean <= mc.cost_max + 1e-9);
  const double cap = res.worst_case.worst_cost +
                     1e-5 * std::max(1.0, std::fabs(res.worst_case.worst_cost));
  CHECK(mc.cost_max <= cap);
}

}  // TEST_SUITE
