#pragma once
// Core data model for the microgrid ramp-capping scheduler.
//
// Conventions used across the project:
//   - all per-hour series are std::vector<double> of length horizon, index
//     t = 0..T-1 standing for hour t+1;
//   - adjustable-load windows (window_start/window_end) are 1-based hour
//     numbers as they appear in config files, inclusive on both ends;
//   - grid exchange is positive when the microgrid imports power;
//   - storage power is a single signed value, positive = discharging.

#include <optional>
#include <string>
#include <vector>

namespace rampcap {

struct TimeGrid {
  int horizon_hours = 24;
  double step_hours = 1.0;
};

struct DispatchableUnit {
  std::string id;
  double p_min = 0.0;   // MW
  double p_max = 0.0;   // MW
  double ramp_up = 0.0;   // MW/h
  double ramp_down = 0.0; // MW/h
  int min_up = 1;    // hours
  int min_down = 1;  // hours
  double cost_marginal = 0.0; // $/MWh
  double cost_noload = 0.0;   // $/h while committed
  double cost_startup = 0.0;  // $ per start
  double cost_shutdown = 0.0; // $ per stop
  bool initial_on = false;
  int initial_on_hours = 0;  // consecutive hours already on at t=0
  int initial_off_hours = 0; // consecutive hours already off at t=0
};

struct StorageUnit {
  std::string id;
  double p_ch_min = 0.0;  // MW, charging magnitude
  double p_ch_max = 0.0;  // MW
  double p_dch_min = 0.0; // MW, discharging magnitude
  double p_dch_max = 0.0; // MW
  double c_min = 0.0;     // MWh
  double c_max = 0.0;     // MWh
  double c_initial = 0.0; // MWh at t=0
  double efficiency = 1.0; // discharge efficiency in (0,1]
  int min_charge_time = 1;    // hours
  int min_discharge_time = 1; // hours
};

struct AdjustableLoad {
  std::string id;
  std::vector<double> d_min; // MW per hour while on
  std::vector<double> d_max; // MW per hour while on
  int min_on = 1;            // hours
  double energy_required = 0.0; // MWh over the window
  int window_start = 1; // 1-based hour, inclusive
  int window_end = 1;   // 1-based hour, inclusive
};

enum class ProfileKind { FixedLoad, NondispatchableGen };

struct FixedProfile {
  std::string id;
  ProfileKind kind = ProfileKind::FixedLoad;
  std::vector<double> values; // MW per hour
};

struct MicrogridConfig {
  TimeGrid time_grid;
  std::vector<DispatchableUnit> dispatchable_units;
  std::vector<StorageUnit> storage_units;
  std::vector<AdjustableLoad> adjustable_loads;
  std::vector<FixedProfile> fixed_profiles;
  double line_capacity = 0.0; // MW, symmetric import/export limit
  bool storage_cyclic = false; // require terminal energy >= initial
  // When present, the hour-1 utility power is also ramp-bounded against
  // this pre-horizon value.
  std::optional<double> initial_utility_power;
};

struct FeederProfile {
  std::vector<double> customer_load;  // MW per hour
  std::vector<double> customer_solar; // MW per hour
};

struct PriceSeries {
  std::vector<double> values; // $/MWh per hour; negative prices permitted
};

enum class Category { Load, Solar, Price };

struct UncertaintySpec {
  double load_error = 0.0;  // fraction of forecast, in [0,1)
  double solar_error = 0.0;
  double price_error = 0.0;
  int budget_hours = 0; // per active category
  std::vector<Category> active_categories;

  bool is_active(Category c) const {
    for (Category a : active_categories)
      if (a == c) return true;
    return false;
  }
  double error_of(Category c) const {
    switch (c) {
      case Category::Load: return load_error;
      case Category::Solar: return solar_error;
      default: return price_error;
    }
  }
};

// One concrete outcome of the uncertain inputs: per-hour fractional
// deviations applied multiplicatively to the forecasts (0.10 = +10%).
// Empty vectors mean identically zero for that category.
struct UncertainRealization {
  std::vector<double> load_deviation;
  std::vector<double> solar_deviation;
  std::vector<double> price_deviation;

  static UncertainRealization zero(int horizon) {
    UncertainRealization r;
    r.load_deviation.assign(horizon, 0.0);
    r.solar_deviation.assign(horizon, 0.0);
    r.price_deviation.assign(horizon, 0.0);
    return r;
  }
};

// Per-hour bounds on the change of grid exchange, derived from the utility
// ramp limit and the feeder net-load profile. For t >= 1, entry t bounds
// exchange[t] - exchange[t-1] (0-based series indices). Entry 0 is only
// active when an initial utility power is configured, in which case it
// bounds exchange[0] itself against that pre-horizon value.
struct RampPolicy {
  double delta = 0.0; // MW/h utility limit; infinity disables capping
  std::vector<double> lower_bounds; // MW, -inf where absent
  std::vector<double> upper_bounds; // MW, +inf where absent
  bool enabled() const;
};

struct UnitSchedule {
  std::string id;
  std::vector<int> on;        // commitment per hour
  std::vector<double> power;  // MW per hour
};

struct StorageSchedule {
  std::string id;
  std::vector<double> power;    // MW signed, + discharge
  std::vector<int> charging;    // mode flags
  std::vector<int> discharging;
  std::vector<double> energy;   // MWh at end of hour
};

struct LoadSchedule {
  std::string id;
  std::vector<int> on;
  std::vector<double> power; // MW per hour
};

struct Schedule {
  std::vector<UnitSchedule> units;
  std::vector<StorageSchedule> storage;
  std::vector<LoadSchedule> loads;
  std::vector<double> grid_exchange; // MW, + import
  double objective_cost = 0.0;       // $
};

struct Violation {
  std::string entity;
  std::string field;
  std::string rule;
};

// Checks every structural invariant of the config. Returns an empty list
// iff the config is consumable by all builders. Order-stable.
std::vector<Violation> validate_config(const MicrogridConfig& config);

// Violations for data series tied to a config's horizon.
std::vector<Violation> validate_feeder(const FeederProfile& feeder, int horizon);
std::vector<Violation> validate_price(const PriceSeries& price, int horizon);
std::vector<Violation> validate_uncertainty(const UncertaintySpec& spec, int horizon);

std::string format_violations(const std::vector<Violation>& violations);

}  // namespace rampcap
