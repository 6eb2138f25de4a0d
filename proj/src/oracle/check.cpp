// Schedule audit, implemented directly on the domain types. Every check
// re-derives its limit from the config and data series; nothing here calls
// into the model builders, so this file and the builders can only agree by
// both being right.

#include "rampcap/oracle/check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rampcap::oracle {

namespace {

struct Auditor {
  const MicrogridConfig& cfg;
  const PriceSeries& price;
  const RampPolicy& ramp;
  const double tol;
  const int T;
  const double tau;
  ViolationReport report;

  Auditor(const MicrogridConfig& c, const PriceSeries& p, const RampPolicy& r,
          double tolerance)
      : cfg(c),
        price(p),
        ramp(r),
        tol(tolerance),
        T(c.time_grid.horizon_hours),
        tau(c.time_grid.step_hours) {}

  void flag(const char* tag, const std::string& entity, int hour, double lhs,
            double bound, double magnitude) {
    report.entries.push_back({tag, entity, hour, lhs, bound, magnitude});
  }

  // value must be <= bound + tol.
  void check_upper(const char* tag, const std::string& entity, int hour,
                   double value, double bound) {
    if (value > bound + tol) flag(tag, entity, hour, value, bound, value - bound);
  }
  // value must be >= bound - tol.
  void check_lower(const char* tag, const std::string& entity, int hour,
                   double value, double bound) {
    if (value < bound - tol) flag(tag, entity, hour, value, bound, bound - value);
  }

  // ---- shape preconditions ----------------------------------------------

  static void need(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("schedule audit: " + what);
  }

  static void need_series(const std::vector<double>& v, int n,
                          const std::string& what) {
    need((int)v.size() == n, what + " length != horizon");
    for (double x : v)
      need(std::isfinite(x), what + " contains a non-finite value");
  }

  static void need_flags(const std::vector<int>& v, int n,
                         const std::string& what) {
    need((int)v.size() == n, what + " length != horizon");
    for (int f : v) need(f == 0 || f == 1, what + " has a non-binary flag");
  }

  template <typename Entry, typename Specs>
  static const Entry& match(const std::vector<Entry>& entries,
                            const Specs& specs, const std::string& id,
                            const char* kind) {
    need(entries.size() == specs.size(),
         std::string(kind) + " count != config " + kind + " count");
    const Entry* found = nullptr;
    for (const auto& e : entries)
      if (e.id == id) {
        need(!found, "duplicate " + std::string(kind) + " id: " + id);
        found = &e;
      }
    need(found != nullptr, std::string(kind) + " missing from schedule: " + id);
    return *found;
  }

  // ---- run-length arithmetic ---------------------------------------------

  // Each maximal run of `value` in `flags` that is not cut off by the end of
  // the horizon must last at least `need_len` hours; a run starting at hour 1
  // is lengthened by `initial_credit` pre-horizon hours of the same state.
  void check_runs(const char* tag, const std::string& entity,
                  const std::vector<int>& flags, int value, int need_len,
                  int initial_credit) {
    if (need_len <= 1) return;
    int t = 0;
    while (t < T) {
      if (flags[t] != value) {
        ++t;
        continue;
      }
      const int start = t;
      while (t < T && flags[t] == value) ++t;
      if (t == T) break;  // cut off by the horizon end: may continue tomorrow
      int length = t - start;
      if (start == 0) length += initial_credit;
      if (length < need_len)
        flag(tag, entity, start + 1, double(length), double(need_len),
             double(need_len - length));
    }
  }

  // ---- families ----------------------------------------------------------

  void system_rows(const Schedule& s) {
    // Hourly balance: generation + storage + import + nondispatchable
    // generation covers fixed plus adjustable demand.
    for (int t = 0; t < T; ++t) {
      double supply = s.grid_exchange[t];
      for (const auto& u : s.units) supply += u.power[t];
      for (const auto& st : s.storage) supply += st.power[t];
      double demand = 0.0;
      for (const auto& l : s.loads) demand += l.power[t];
      for (const auto& p : cfg.fixed_profiles) {
        if (p.kind == ProfileKind::FixedLoad) demand += p.values[t];
        else supply += p.values[t];
      }
      const double gap = supply - demand;
      if (std::fabs(gap) > tol)
        flag("eq4", "", t + 1, supply, demand, std::fabs(gap));
    }
    for (int t = 0; t < T; ++t) {
      check_upper("eq5", "", t + 1, s.grid_exchange[t], cfg.line_capacity);
      check_lower("eq5", "", t + 1, s.grid_exchange[t], -cfg.line_capacity);
    }
  }

  void unit_rows(const UnitSchedule& s, const DispatchableUnit& g) {
    for (int t = 0; t < T; ++t) {
      check_lower("eq6", g.id, t + 1, s.power[t], g.p_min * s.on[t]);
      check_upper("eq6", g.id, t + 1, s.power[t], g.p_max * s.on[t]);
    }
    for (int t = 1; t < T; ++t) {
      check_upper("eq7", g.id, t + 1, s.power[t] - s.power[t - 1], g.ramp_up);
      check_upper("eq8", g.id, t + 1, s.power[t - 1] - s.power[t],
                  g.ramp_down);
    }
    check_runs("eq9", g.id, s.on, 1, g.min_up,
               g.initial_on ? g.initial_on_hours : 0);
    check_runs("eq10", g.id, s.on, 0, g.min_down,
               g.initial_on ? 0 : g.initial_off_hours);
    // A pre-horizon run cut short at hour 1 has no in-horizon run to blame.
    if (g.initial_on && s.on[0] == 0 && g.initial_on_hours < g.min_up)
      flag("eq9", g.id, 1, double(g.initial_on_hours), double(g.min_up),
           double(g.min_up - g.initial_on_hours));
    if (!g.initial_on && s.on[0] == 1 && g.initial_off_hours < g.min_down)
      flag("eq10", g.id, 1, double(g.initial_off_hours), double(g.min_down),
           double(g.min_down - g.initial_off_hours));
  }

  void storage_rows(const StorageSchedule& s, const StorageUnit& b) {
    for (int t = 0; t < T; ++t) {
      const int u = s.discharging[t];
      const int v = s.charging[t];
      check_upper("eq11", b.id, t + 1, s.power[t],
                  b.p_dch_max * u - b.p_ch_min * v);
      check_lower("eq12", b.id, t + 1, s.power[t],
                  b.p_dch_min * u - b.p_ch_max * v);
      if (u + v > 1)
        flag("eq13", b.id, t + 1, double(u + v), 1.0, double(u + v - 1));
    }
    // Signed-power energy recursion: discharging drains at 1/efficiency,
    // charging stores one-for-one.
    double prev = b.c_initial;
    for (int t = 0; t < T; ++t) {
      const double p = s.power[t];
      const double expected =
          prev - (p > 0.0 ? p / b.efficiency : p) * tau;
      const double err = std::fabs(s.energy[t] - expected);
      if (err > tol) flag("eq14", b.id, t + 1, s.energy[t], expected, err);
      prev = s.energy[t];
      check_lower("eq15", b.id, t + 1, s.energy[t], b.c_min);
      check_upper("eq15", b.id, t + 1, s.energy[t], b.c_max);
    }
    check_runs("eq16", b.id, s.charging, 1, b.min_charge_time, 0);
    check_runs("eq17", b.id, s.discharging, 1, b.min_discharge_time, 0);
    if (cfg.storage_cyclic)
      check_lower("aux", b.id, T, s.energy[T - 1], b.c_initial);
  }

  void load_rows(const LoadSchedule& s, const AdjustableLoad& d) {
    double energy = 0.0;
    for (int t = 0; t < T; ++t) {
      const bool inside = t + 1 >= d.window_start && t + 1 <= d.window_end;
      if (inside) {
        check_lower("eq18", d.id, t + 1, s.power[t], d.d_min[t] * s.on[t]);
        check_upper("eq18", d.id, t + 1, s.power[t], d.d_max[t] * s.on[t]);
        energy += s.power[t] * tau;
      } else {
        // Outside its window the load must be fully off.
        if (s.on[t] != 0) flag("eq18", d.id, t + 1, 1.0, 0.0, 1.0);
        if (std::fabs(s.power[t]) > tol)
          flag("eq18", d.id, t + 1, s.power[t], 0.0, std::fabs(s.power[t]));
      }
    }
    check_runs("eq19", d.id, s.on, 1, d.min_on, 0);
    const double gap = std::fabs(energy - d.energy_required);
    if (gap > tol) flag("eq20", d.id, 0, energy, d.energy_required, gap);
  }

  void exchange_change_rows(const Schedule& s) {
    if (!ramp.enabled()) return;
    const int n = std::min<int>(T, (int)std::min(ramp.lower_bounds.size(),
                                                 ramp.upper_bounds.size()));
    for (int t = 0; t < n; ++t) {
      const double change =
          t == 0 ? s.grid_exchange[0]
                 : s.grid_exchange[t] - s.grid_exchange[t - 1];
      if (std::isfinite(ramp.upper_bounds[t]))
        check_upper("eq21", "", t + 1, change, ramp.upper_bounds[t]);
      if (std::isfinite(ramp.lower_bounds[t]))
        check_lower("eq21", "", t + 1, change, ramp.lower_bounds[t]);
    }
  }

  double dispatch_cost(const Schedule& s) {
    double cost = 0.0;
    for (size_t i = 0; i < cfg.dispatchable_units.size(); ++i) {
      const auto& g = cfg.dispatchable_units[i];
      const auto& us = match(s.units, cfg.dispatchable_units, g.id, "unit");
      int prev = g.initial_on ? 1 : 0;
      for (int t = 0; t < T; ++t) {
        cost += g.cost_marginal * us.power[t] + g.cost_noload * us.on[t];
        if (us.on[t] > prev) cost += g.cost_startup;
        if (us.on[t] < prev) cost += g.cost_shutdown;
        prev = us.on[t];
      }
    }
    for (int t = 0; t < T; ++t)
      cost += price.values[t] * s.grid_exchange[t];
    return cost;
  }
};

}  // namespace

ViolationReport check_schedule(const Schedule& schedule,
                               const MicrogridConfig& config,
                               const PriceSeries& price,
                               const RampPolicy& ramp, double tol) {
  Auditor a(config, price, ramp, tol);
  const int T = a.T;

  // Validate every shape before reading any series.
  Auditor::need(T > 0, "config horizon must be positive");
  Auditor::need((int)price.values.size() == T, "price length != horizon");
  Auditor::need(schedule.units.size() == config.dispatchable_units.size(),
                "unit count != config unit count");
  Auditor::need(schedule.storage.size() == config.storage_units.size(),
                "storage count != config storage count");
  Auditor::need(schedule.loads.size() == config.adjustable_loads.size(),
                "load count != config load count");
  Auditor::need_series(schedule.grid_exchange, T, "grid exchange");
  for (const auto& p : config.fixed_profiles)
    Auditor::need((int)p.values.size() == T,
                  "fixed profile " + p.id + " length != horizon");
  for (const auto& g : config.dispatchable_units) {
    const auto& us =
        Auditor::match(schedule.units, config.dispatchable_units, g.id, "unit");
    Auditor::need_flags(us.on, T, "unit " + g.id + " commitment");
    Auditor::need_series(us.power, T, "unit " + g.id + " power");
  }
  for (const auto& b : config.storage_units) {
    const auto& ss =
        Auditor::match(schedule.storage, config.storage_units, b.id, "storage");
    Auditor::need_flags(ss.charging, T, "storage " + b.id + " charging");
    Auditor::need_flags(ss.discharging, T, "storage " + b.id + " discharging");
    Auditor::need_series(ss.power, T, "storage " + b.id + " power");
    Auditor::need_series(ss.energy, T, "storage " + b.id + " energy");
  }
  for (const auto& d : config.adjustable_loads) {
    const auto& ls = Auditor::match(schedule.loads, config.adjustable_loads,
                                    d.id, "load");
    Auditor::need_flags(ls.on, T, "load " + d.id + " on flags");
    Auditor::need_series(ls.power, T, "load " + d.id + " power");
    Auditor::need((int)d.d_min.size() == T && (int)d.d_max.size() == T,
                  "load " + d.id + " demand bounds length != horizon");
  }

  a.system_rows(schedule);
  for (const auto& g : config.dispatchable_units)
    a.unit_rows(
        Auditor::match(schedule.units, config.dispatchable_units, g.id, "unit"),
        g);
  for (const auto& b : config.storage_units)
    a.storage_rows(Auditor::match(schedule.storage, config.storage_units, b.id,
                                  "storage"),
                   b);
  for (const auto& d : config.adjustable_loads)
    a.load_rows(
        Auditor::match(schedule.loads, config.adjustable_loads, d.id, "load"),
        d);
  a.exchange_change_rows(schedule);
  a.report.recomputed_cost = a.dispatch_cost(schedule);

  for (const auto& e : a.report.entries) {
    auto [it, fresh] = a.report.worst_by_tag.try_emplace(e.tag, e.magnitude);
    if (!fresh && e.magnitude > it->second) it->second = e.magnitude;
  }
  return a.report;
}

}  // namespace rampcap::oracle
