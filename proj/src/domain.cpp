#include "rampcap/domain.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace rampcap {

bool RampPolicy::enabled() const { return std::isfinite(delta); }

namespace {

bool finite(double v) { return std::isfinite(v); }

void require(std::vector<Violation>& out, bool ok, const std::string& entity,
             const std::string& field, const std::string& rule) {
  if (!ok) out.push_back({entity, field, rule});
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!finite(x)) return false;
  return true;
}

}  // namespace

std::vector<Violation> validate_config(const MicrogridConfig& config) {
  std::vector<Violation> out;
  const int T = config.time_grid.horizon_hours;
  const double tau = config.time_grid.step_hours;

  require(out, T >= 2, "time_grid", "horizon_hours", "horizon_hours >= 2");
  require(out, tau > 0 && finite(tau), "time_grid", "step_hours", "step_hours > 0");
  require(out, config.line_capacity > 0 && finite(config.line_capacity),
          "config", "line_capacity", "line_capacity > 0");

  std::set<std::string> ids;
  auto check_id = [&](const std::string& id, const char* what) {
    if (id.empty()) out.push_back({id, "id", std::string(what) + " id must be nonempty"});
    if (!ids.insert(id).second)
      out.push_back({id, "id", "ids unique across all entities"});
  };

  for (const auto& u : config.dispatchable_units) {
    check_id(u.id, "unit");
    require(out, u.p_min >= 0 && u.p_min <= u.p_max, u.id, "p_min", "0 <= p_min <= p_max");
    require(out, finite(u.p_max), u.id, "p_max", "p_max finite");
    require(out, u.ramp_up > 0, u.id, "ramp_up", "ramp_up > 0");
    require(out, u.ramp_down > 0, u.id, "ramp_down", "ramp_down > 0");
    require(out, u.min_up >= 1, u.id, "min_up", "min_up >= 1");
    require(out, u.min_down >= 1, u.id, "min_down", "min_down >= 1");
    require(out, u.cost_marginal >= 0, u.id, "cost_marginal", "costs >= 0");
    require(out, u.cost_noload >= 0, u.id, "cost_noload", "costs >= 0");
    require(out, u.cost_startup >= 0, u.id, "cost_startup", "costs >= 0");
    require(out, u.cost_shutdown >= 0, u.id, "cost_shutdown", "costs >= 0");
    require(out, u.initial_on_hours >= 0 && u.initial_off_hours >= 0, u.id,
            "initial_on_hours", "initial counters >= 0");
  }

  for (const auto& s : config.storage_units) {
    check_id(s.id, "storage");
    require(out, s.p_ch_min >= 0 && s.p_ch_min <= s.p_ch_max, s.id, "p_ch_min",
            "0 <= p_ch_min <= p_ch_max");
    require(out, s.p_dch_min >= 0 && s.p_dch_min <= s.p_dch_max, s.id, "p_dch_min",
            "0 <= p_dch_min <= p_dch_max");
    require(out, s.c_min >= 0 && s.c_min <= s.c_initial && s.c_initial <= s.c_max,
            s.id, "c_initial", "0 <= c_min <= c_initial <= c_max");
    require(out, s.efficiency > 0 && s.efficiency <= 1, s.id, "efficiency",
            "0 < efficiency <= 1");
    require(out, s.min_charge_time >= 1, s.id, "min_charge_time", "MC >= 1");
    require(out, s.min_discharge_time >= 1, s.id, "min_discharge_time", "MD >= 1");
  }

  for (const auto& l : config.adjustable_loads) {
    check_id(l.id, "adjustable_load");
    require(out, (int)l.d_min.size() == T, l.id, "d_min", "profile length = horizon");
    require(out, (int)l.d_max.size() == T, l.id, "d_max", "profile length = horizon");
    if ((int)l.d_min.size() == T && (int)l.d_max.size() == T) {
      bool ordered = true, fin = true;
      for (int t = 0; t < T; ++t) {
        if (!(l.d_min[t] >= 0 && l.d_min[t] <= l.d_max[t])) ordered = false;
        if (!finite(l.d_min[t]) || !finite(l.d_max[t])) fin = false;
      }
      require(out, ordered && fin, l.id, "d_min", "0 <= d_min <= d_max per hour");
    }
    require(out, l.min_on >= 1, l.id, "min_on", "min_on >= 1");
    require(out, l.window_start >= 1 && l.window_start <= l.window_end &&
                     l.window_end <= T,
            l.id, "window_start", "1 <= window_start <= window_end <= horizon");
    require(out, l.energy_required >= 0, l.id, "energy_required", "energy >= 0");
    if ((int)l.d_max.size() == T && l.window_start >= 1 && l.window_end <= T &&
        l.window_start <= l.window_end) {
      double cap = 0.0;
      for (int t = l.window_start - 1; t <= l.window_end - 1; ++t)
        cap += l.d_max[t] * tau;
      require(out, cap >= l.energy_required, l.id, "energy_required",
              "window max energy >= energy_required");
    }
  }

  for (const auto& p : config.fixed_profiles) {
    check_id(p.id, "fixed_profile");
    require(out, (int)p.values.size() == T, p.id, "values", "length = horizon");
    require(out, all_finite(p.values), p.id, "values", "values finite");
  }

  if (config.initial_utility_power)
    require(out, finite(*config.initial_utility_power), "config",
            "initial_utility_power", "finite when present");

  return out;
}

std::vector<Violation> validate_feeder(const FeederProfile& feeder, int horizon) {
  std::vector<Violation> out;
  require(out, (int)feeder.customer_load.size() == horizon, "feeder",
          "customer_load", "length = horizon");
  require(out, (int)feeder.customer_solar.size() == horizon, "feeder",
          "customer_solar", "length = horizon");
  for (double v : feeder.customer_load)
    if (!(finite(v) && v >= 0)) {
      out.push_back({"feeder", "customer_load", "load >= 0 and finite"});
      break;
    }
  for (double v : feeder.customer_solar)
    if (!(finite(v) && v >= 0)) {
      out.push_back({"feeder", "customer_solar", "solar >= 0 and finite"});
      break;
    }
  return out;
}

std::vector<Violation> validate_price(const PriceSeries& price, int horizon) {
  std::vector<Violation> out;
  require(out, (int)price.values.size() == horizon, "price", "values",
          "length = horizon");
  require(out, all_finite(price.values), "price", "values", "values finite");
  return out;
}

std::vector<Violation> validate_uncertainty(const UncertaintySpec& spec, int horizon) {
  std::vector<Violation> out;
  auto frac = [&](double e, const char* f) {
    require(out, e >= 0 && e < 1 && finite(e), "uncertainty", f,
            "error fraction in [0,1)");
  };
  frac(spec.load_error, "load_error");
  frac(spec.solar_error, "solar_error");
  frac(spec.price_error, "price_error");
  require(out, spec.budget_hours >= 0 && spec.budget_hours <= horizon,
          "uncertainty", "budget_hours", "0 <= budget <= horizon");
  return out;
}

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations)
    os << v.entity << "." << v.field << ": " << v.rule << "\n";
  return os.str();
}

}  // namespace rampcap
