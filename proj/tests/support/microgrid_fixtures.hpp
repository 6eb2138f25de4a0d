#pragma once
// Shared microgrid fixtures for the scheduling, adversary, coordination, and
// validation test suites.

#include <doctest.h>

#include <limits>
#include <vector>

#include "rampcap/domain.hpp"
#include "rampcap/milp/solve.hpp"
#include "rampcap/sched/build.hpp"

namespace testsupport {

// Six-hour microgrid with two units, one storage unit, and two adjustable
// loads; rich enough to exercise every constraint family.
inline rampcap::MicrogridConfig reference_config() {
  using namespace rampcap;
  MicrogridConfig cfg;
  cfg.time_grid.horizon_hours = 6;
  cfg.line_capacity = 10.0;

  DispatchableUnit g1;
  g1.id = "g1";
  g1.p_min = 1.0;
  g1.p_max = 5.0;
  g1.ramp_up = 2.5;
  g1.ramp_down = 2.5;
  g1.min_up = 3;
  g1.min_down = 2;
  g1.cost_marginal = 25.0;
  g1.cost_noload = 4.0;
  g1.cost_startup = 10.0;
  g1.cost_shutdown = 5.0;
  g1.initial_on = true;
  g1.initial_on_hours = 1; // must stay on through hour 2
  cfg.dispatchable_units.push_back(g1);

  DispatchableUnit g2;
  g2.id = "g2";
  g2.p_min = 0.8;
  g2.p_max = 4.0;
  g2.ramp_up = 2.0;
  g2.ramp_down = 2.0;
  g2.min_up = 2;
  g2.min_down = 2;
  g2.cost_marginal = 38.0;
  g2.cost_noload = 2.0;
  g2.cost_startup = 8.0;
  g2.initial_on = false;
  g2.initial_off_hours = 2;
  cfg.dispatchable_units.push_back(g2);

  StorageUnit s;
  s.id = "es1";
  s.p_ch_max = 2.0;
  s.p_dch_max = 2.0;
  s.c_min = 1.0;
  s.c_max = 8.0;
  s.c_initial = 4.0;
  s.efficiency = 0.9;
  s.min_charge_time = 2;
  s.min_discharge_time = 2;
  cfg.storage_units.push_back(s);

  AdjustableLoad l1;
  l1.id = "l1";
  l1.d_min = {0.0, 0.5, 0.5, 0.5, 0.5, 0.0};
  l1.d_max = {0.0, 2.0, 2.0, 2.0, 2.0, 0.0};
  l1.min_on = 2;
  l1.energy_required = 3.0;
  l1.window_start = 2;
  l1.window_end = 5;
  cfg.adjustable_loads.push_back(l1);

  AdjustableLoad l2;
  l2.id = "l2";
  l2.d_min = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  l2.d_max = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  l2.min_on = 1;
  l2.energy_required = 2.0;
  l2.window_start = 1;
  l2.window_end = 6;
  cfg.adjustable_loads.push_back(l2);

  FixedProfile base;
  base.id = "base";
  base.kind = ProfileKind::FixedLoad;
  base.values = {4.0, 4.5, 5.0, 5.5, 5.0, 4.5};
  cfg.fixed_profiles.push_back(base);

  FixedProfile pv;
  pv.id = "pv";
  pv.kind = ProfileKind::NondispatchableGen;
  pv.values = {0.0, 0.5, 1.5, 2.0, 1.5, 0.5};
  cfg.fixed_profiles.push_back(pv);
  return cfg;
}

inline rampcap::PriceSeries reference_price() {
  return {{20.0, 22.0, 30.0, 42.0, 38.0, 24.0}};
}

inline rampcap::FeederProfile reference_feeder() {
  return {{13.5, 12.5, 11.8, 11.7, 12.1, 12.5},
          {0.0, 0.0, 1.0, 4.0, 8.0, 11.5}};
}

inline rampcap::RampPolicy no_policy() {
  rampcap::RampPolicy off;
  off.delta = std::numeric_limits<double>::infinity();
  return off;
}

// Three-hour microgrid whose exchange-change caps react to feeder deviations:
// one cheap unit that wants to run flat out, exporting the surplus.
struct ToyMicrogrid {
  rampcap::MicrogridConfig cfg;
  rampcap::FeederProfile feeder{{10.0, 12.0, 11.0}, {0.0, 0.0, 0.0}};
  rampcap::PriceSeries price{{30.0, 30.0, 30.0}};
  rampcap::RampPolicy ramp; // delta = 1, bounds recomputed per realization
  std::vector<double> committed;

  ToyMicrogrid() {
    using namespace rampcap;
    cfg.time_grid.horizon_hours = 3;
    cfg.line_capacity = 10.0;
    DispatchableUnit g;
    g.id = "g1";
    g.p_min = 1.0;
    g.p_max = 5.0;
    g.ramp_up = 10.0;
    g.ramp_down = 10.0;
    g.min_up = 1;
    g.min_down = 1;
    g.cost_marginal = 10.0;
    g.initial_on = true;
    g.initial_on_hours = 5;
    cfg.dispatchable_units.push_back(g);
    FixedProfile base;
    base.id = "base";
    base.kind = ProfileKind::FixedLoad;
    base.values = {4.0, 5.0, 6.0};
    cfg.fixed_profiles.push_back(base);
    ramp.delta = 1.0;
    committed = {1.0, 1.0, 1.0};
  }

  double dispatch_cost(const rampcap::UncertainRealization& real,
                       const std::vector<double>& commitment) const {
    const auto rec = rampcap::sched::build_recourse_lp(cfg, feeder, price,
                                                       commitment, real, ramp,
                                                       1e4);
    const auto lp = rampcap::milp::solve_lp(rec.model);
    REQUIRE(lp.status == rampcap::milp::LpStatus::Optimal);
    return lp.objective;
  }
  double dispatch_cost(const rampcap::UncertainRealization& real) const {
    return dispatch_cost(real, committed);
  }
};

inline rampcap::UncertaintySpec load_only_uncertainty(double err, int budget) {
  rampcap::UncertaintySpec u;
  u.load_error = err;
  u.budget_hours = budget;
  u.active_categories = {rampcap::Category::Load};
  return u;
}

}  // namespace testsupport
