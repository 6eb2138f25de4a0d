#include "rampcap/sched/build.hpp"

#include <cmath>
#include <stdexcept>

#include "rampcap/feeder.hpp"

namespace rampcap::sched {

using milp::Model;
using milp::Rel;
using milp::Term;
using milp::VarKind;

const char* to_string(Sym sym) {
  switch (sym) {
    case Sym::P: return "P";
    case Sym::I: return "I";
    case Sym::u: return "u";
    case Sym::v: return "v";
    case Sym::z: return "z";
    case Sym::D: return "D";
    case Sym::C: return "C";
    case Sym::PM: return "PM";
    default: return "slack";
  }
}

void VariableMap::add(std::string entity, Sym sym, int hour, int var) {
  VarKey key{std::move(entity), sym, hour};
  if (!ids_.emplace(std::move(key), var).second)
    throw std::logic_error("duplicate scheduling variable key");
}

int VariableMap::id(std::string_view entity, Sym sym, int hour) const {
  const auto it = ids_.find(VarKey{std::string(entity), sym, hour});
  if (it == ids_.end())
    throw std::out_of_range("unmapped scheduling variable: " +
                            std::string(entity) + "/" + to_string(sym) +
                            "/t" + std::to_string(hour));
  return it->second;
}

bool VariableMap::has(std::string_view entity, Sym sym, int hour) const {
  return ids_.count(VarKey{std::string(entity), sym, hour}) > 0;
}

std::vector<VarKey> binary_schedule_keys(const MicrogridConfig& config) {
  const int T = config.time_grid.horizon_hours;
  std::vector<VarKey> keys;
  for (const auto& g : config.dispatchable_units)
    for (int t = 1; t <= T; ++t) keys.push_back({g.id, Sym::I, t});
  for (const auto& s : config.storage_units) {
    for (int t = 1; t <= T; ++t) keys.push_back({s.id, Sym::u, t});
    for (int t = 1; t <= T; ++t) keys.push_back({s.id, Sym::v, t});
  }
  for (const auto& d : config.adjustable_loads)
    for (int t = 1; t <= T; ++t) keys.push_back({d.id, Sym::z, t});
  return keys;
}

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

enum class ProblemKind { Monolithic, Master, Recourse };

void require_valid(const MicrogridConfig& cfg, const PriceSeries& price) {
  auto bad = validate_config(cfg);
  auto more = validate_price(price, cfg.time_grid.horizon_hours);
  bad.insert(bad.end(), more.begin(), more.end());
  if (!bad.empty())
    throw std::invalid_argument("cannot build scheduling model:\n" +
                                format_violations(bad));
}

struct Builder {
  const MicrogridConfig& cfg;
  ProblemKind kind;
  int T;
  double tau;
  BuiltProblem out;

  // Column grids indexed [entity][t-1]; -1 marks an absent column.
  std::vector<std::vector<int>> gP, gI, gSU, gSD;
  std::vector<std::vector<int>> sP, sDch, sCh, sU, sV, sC;
  std::vector<std::vector<int>> lZ, lD;
  std::vector<int> pm, rslack;
  int theta = -1;

  Builder(const MicrogridConfig& c, ProblemKind k)
      : cfg(c),
        kind(k),
        T(c.time_grid.horizon_hours),
        tau(c.time_grid.step_hours) {
    out.model.sense = milp::Sense::Min;
  }

  bool dispatch_side() const { return kind != ProblemKind::Master; }
  bool commitment_side() const { return kind != ProblemKind::Recourse; }

  static std::string at(const std::string& base, int t) {
    return base + "_t" + std::to_string(t);
  }

  int row(const char* tag, std::string name, std::vector<Term> terms, Rel rel,
          double rhs) {
    const int r =
        out.model.add_constraint(std::move(name), std::move(terms), rel, rhs);
    out.row_tags.push_back(tag);
    return r;
  }

  int mapped(const std::string& entity, Sym sym, int t, std::string name,
             double lower, double upper, double objective, bool binary) {
    int id;
    if (binary) {
      id = out.model.add_binary(std::move(name), objective);
      out.model.variable(id).lower = lower;
      out.model.variable(id).upper = upper;
    } else {
      id = out.model.add_continuous(std::move(name), lower, upper, objective);
    }
    out.vars.add(entity, sym, t, id);
    return id;
  }

  int internal(std::string name, double lower, double upper, double objective,
               bool penalized = false) {
    const int id =
        out.model.add_continuous(std::move(name), lower, upper, objective);
    out.aux_vars.push_back(id);
    if (penalized) out.penalty_vars.push_back(id);
    return id;
  }

  // A scheduling binary: true binary on the commitment side, pinned-later
  // relaxation on the dispatch-only side.
  int schedule_binary(const std::string& entity, Sym sym, int t,
                      std::string name, double objective) {
    return mapped(entity, sym, t, std::move(name), 0.0, 1.0, objective,
                  /*binary=*/commitment_side());
  }

  // ---- variables --------------------------------------------------------

  void make_unit_vars() {
    const bool costs_here = commitment_side();
    gP.resize(cfg.dispatchable_units.size());
    gI.resize(cfg.dispatchable_units.size());
    gSU.resize(cfg.dispatchable_units.size());
    gSD.resize(cfg.dispatchable_units.size());
    for (size_t i = 0; i < cfg.dispatchable_units.size(); ++i) {
      const auto& g = cfg.dispatchable_units[i];
      gP[i].assign(T, -1);
      gI[i].assign(T, -1);
      gSU[i].assign(T, -1);
      gSD[i].assign(T, -1);
      const double marg = dispatch_side() ? g.cost_marginal : 0.0;
      const double noload = costs_here ? g.cost_noload : 0.0;
      for (int t = 1; t <= T; ++t) {
        gP[i][t - 1] = mapped(g.id, Sym::P, t, at("P_" + g.id, t), 0.0,
                              g.p_max, marg, false);
        gI[i][t - 1] =
            schedule_binary(g.id, Sym::I, t, at("I_" + g.id, t), noload);
      }
      if (costs_here && g.cost_startup > 0.0)
        for (int t = 1; t <= T; ++t)
          gSU[i][t - 1] = internal(at("su_" + g.id, t), 0.0, kInfD, 1.0);
      if (costs_here && g.cost_shutdown > 0.0)
        for (int t = 1; t <= T; ++t)
          gSD[i][t - 1] = internal(at("sd_" + g.id, t), 0.0, kInfD, 1.0);
      if (commitment_side()) pin_initial_commitment(i);
    }
  }

  // Hours the unit must keep its initial state to satisfy its minimum
  // duration, enforced directly on the variable bounds.
  void pin_initial_commitment(size_t i) {
    const auto& g = cfg.dispatchable_units[i];
    int hold = 0;
    double value = 0.0;
    if (g.initial_on && g.initial_on_hours < g.min_up) {
      hold = g.min_up - g.initial_on_hours;
      value = 1.0;
    } else if (!g.initial_on && g.initial_off_hours < g.min_down) {
      hold = g.min_down - g.initial_off_hours;
      value = 0.0;
    } else {
      return;
    }
    for (int t = 1; t <= std::min(hold, T); ++t) {
      auto& var = out.model.variable(gI[i][t - 1]);
      var.lower = value;
      var.upper = value;
    }
  }

  void make_storage_vars() {
    const bool flows = dispatch_side();
    sP.resize(cfg.storage_units.size());
    sDch.resize(cfg.storage_units.size());
    sCh.resize(cfg.storage_units.size());
    sU.resize(cfg.storage_units.size());
    sV.resize(cfg.storage_units.size());
    sC.resize(cfg.storage_units.size());
    for (size_t i = 0; i < cfg.storage_units.size(); ++i) {
      const auto& s = cfg.storage_units[i];
      sP[i].assign(T, -1);
      sDch[i].assign(T, -1);
      sCh[i].assign(T, -1);
      sU[i].assign(T, -1);
      sV[i].assign(T, -1);
      sC[i].assign(T, -1);
      for (int t = 1; t <= T; ++t) {
        sP[i][t - 1] = mapped(s.id, Sym::P, t, at("P_" + s.id, t),
                              -s.p_ch_max, s.p_dch_max, 0.0, false);
        sU[i][t - 1] = schedule_binary(s.id, Sym::u, t, at("u_" + s.id, t), 0.0);
        sV[i][t - 1] = schedule_binary(s.id, Sym::v, t, at("v_" + s.id, t), 0.0);
        if (flows) {
          sDch[i][t - 1] =
              internal(at("dch_" + s.id, t), 0.0, s.p_dch_max, 0.0);
          sCh[i][t - 1] = internal(at("ch_" + s.id, t), 0.0, s.p_ch_max, 0.0);
          sC[i][t - 1] = mapped(s.id, Sym::C, t, at("C_" + s.id, t), s.c_min,
                                s.c_max, 0.0, false);
        }
      }
    }
  }

  void make_load_vars() {
    lZ.resize(cfg.adjustable_loads.size());
    lD.resize(cfg.adjustable_loads.size());
    for (size_t i = 0; i < cfg.adjustable_loads.size(); ++i) {
      const auto& d = cfg.adjustable_loads[i];
      lZ[i].assign(T, -1);
      lD[i].assign(T, -1);
      for (int t = 1; t <= T; ++t) {
        const bool inside = t >= d.window_start && t <= d.window_end;
        const double cap = inside ? d.d_max[t - 1] : 0.0;
        lD[i][t - 1] =
            mapped(d.id, Sym::D, t, at("D_" + d.id, t), 0.0, cap, 0.0, false);
        lZ[i][t - 1] = schedule_binary(d.id, Sym::z, t, at("z_" + d.id, t), 0.0);
        if (!inside) {
          auto& var = out.model.variable(lZ[i][t - 1]);
          var.lower = 0.0;
          var.upper = 0.0;
        }
      }
    }
  }

  void make_grid_vars(const std::vector<double>& exchange_price) {
    pm.assign(T, -1);
    for (int t = 1; t <= T; ++t)
      pm[t - 1] = mapped("", Sym::PM, t, at("PM", t), -cfg.line_capacity,
                         cfg.line_capacity, exchange_price[t - 1], false);
  }

  // ---- constraint families ----------------------------------------------

  void unit_capacity_rows() { // tag eq6
    for (size_t i = 0; i < cfg.dispatchable_units.size(); ++i) {
      const auto& g = cfg.dispatchable_units[i];
      for (int t = 1; t <= T; ++t) {
        row("eq6", at("cap_lo_" + g.id, t),
            {{gP[i][t - 1], 1.0}, {gI[i][t - 1], -g.p_min}}, Rel::Ge, 0.0);
        row("eq6", at("cap_hi_" + g.id, t),
            {{gP[i][t - 1], 1.0}, {gI[i][t - 1], -g.p_max}}, Rel::Le, 0.0);
      }
    }
  }

  void unit_ramp_rows() { // tags eq7 / eq8; first hour is unconstrained
    for (size_t i = 0; i < cfg.dispatchable_units.size(); ++i) {
      const auto& g = cfg.dispatchable_units[i];
      for (int t = 2; t <= T; ++t) {
        row("eq7", at("rampup_" + g.id, t),
            {{gP[i][t - 1], 1.0}, {gP[i][t - 2], -1.0}}, Rel::Le, g.ramp_up);
        row("eq8", at("rampdn_" + g.id, t),
            {{gP[i][t - 1], -1.0}, {gP[i][t - 2], 1.0}}, Rel::Le, g.ramp_down);
      }
    }
  }

  // Minimum-duration window rows on a 0/1 column family: a switch to `on`
  // at hour t forces the state to persist for the following `need-1` hours
  // (truncated at the horizon). `initial` is the pre-horizon state.
  void min_duration_rows(const char* tag, const std::string& name,
                         const std::vector<int>& cols, int need, int initial,
                         bool rising) {
    if (need <= 1) return;
    const double sgn = rising ? 1.0 : -1.0;
    for (int t = 1; t <= T; ++t) {
      for (int k = 1; k <= need - 1 && t + k <= T; ++k) {
        std::vector<Term> terms;
        terms.push_back({cols[t + k - 1], sgn});
        terms.push_back({cols[t - 1], -sgn});
        double rhs = rising ? 0.0 : -1.0;
        if (t >= 2)
          terms.push_back({cols[t - 2], sgn});
        else  // pre-horizon state folds into the right-hand side
          rhs = rising ? -double(initial) : double(initial) - 1.0;
        row(tag, name + "_t" + std::to_string(t) + "_k" + std::to_string(k),
            std::move(terms), Rel::Ge, rhs);
      }
    }
  }

  void unit_min_updown_rows() { // tags eq9 / eq10
    for (size_t i = 0; i < cfg.dispatchable_units.size(); ++i) {
      const auto& g = cfg.dispatchable_units[i];
      const int init = g.initial_on ? 1 : 0;
      min_duration_rows("eq9", "minup_" + g.id, gI[i], g.min_up, init, true);
      min_duration_rows("eq10", "mindn_" + g.id, gI[i], g.min_down, init,
                        false);
    }
  }

  void storage_power_rows() { // tags eq11 / eq12 (+aux split when dispatching)
    for (size_t i = 0; i < cfg.storage_units.size(); ++i) {
      const auto& s = cfg.storage_units[i];
      for (int t = 1; t <= T; ++t) {
        row("eq11", at("smax_" + s.id, t),
            {{sP[i][t - 1], 1.0},
             {sU[i][t - 1], -s.p_dch_max},
             {sV[i][t - 1], s.p_ch_min}},
            Rel::Le, 0.0);
        row("eq12", at("smin_" + s.id, t),
            {{sP[i][t - 1], 1.0},
             {sU[i][t - 1], -s.p_dch_min},
             {sV[i][t - 1], s.p_ch_max}},
            Rel::Ge, 0.0);
        if (dispatch_side()) {
          // Signed power split into one-way flows gated by the mode flags,
          // so the energy balance sees each direction separately.
          row("aux", at("flow_" + s.id, t),
              {{sP[i][t - 1], 1.0},
               {sDch[i][t - 1], -1.0},
               {sCh[i][t - 1], 1.0}},
              Rel::Eq, 0.0);
          row("aux", at("gdch_" + s.id, t),
              {{sDch[i][t - 1], 1.0}, {sU[i][t - 1], -s.p_dch_max}}, Rel::Le,
              0.0);
          row("aux", at("gch_" + s.id, t),
              {{sCh[i][t - 1], 1.0}, {sV[i][t - 1], -s.p_ch_max}}, Rel::Le,
              0.0);
        }
      }
    }
  }

  void storage_mode_rows() { // tag eq13
    for (size_t i = 0; i < cfg.storage_units.size(); ++i)
      for (int t = 1; t <= T; ++t)
        row("eq13", at("mode_" + cfg.storage_units[i].id, t),
            {{sU[i][t - 1], 1.0}, {sV[i][t - 1], 1.0}}, Rel::Le, 1.0);
  }

  void storage_energy_rows() { // tags eq14 / eq15
    for (size_t i = 0; i < cfg.storage_units.size(); ++i) {
      const auto& s = cfg.storage_units[i];
      const double out_rate = tau / s.efficiency;
      for (int t = 1; t <= T; ++t) {
        std::vector<Term> terms{{sC[i][t - 1], 1.0},
                                {sDch[i][t - 1], out_rate},
                                {sCh[i][t - 1], -tau}};
        double rhs = 0.0;
        if (t >= 2) terms.push_back({sC[i][t - 2], -1.0});
        else rhs = s.c_initial;
        row("eq14", at("soc_" + s.id, t), std::move(terms), Rel::Eq, rhs);
        row("eq15", at("soclo_" + s.id, t), {{sC[i][t - 1], 1.0}}, Rel::Ge,
            s.c_min);
        row("eq15", at("sochi_" + s.id, t), {{sC[i][t - 1], 1.0}}, Rel::Le,
            s.c_max);
      }
      if (cfg.storage_cyclic)
        row("aux", "cyc_" + s.id, {{sC[i][T - 1], 1.0}}, Rel::Ge, s.c_initial);
    }
  }

  void storage_min_mode_rows() { // tags eq16 (charging) / eq17 (discharging)
    for (size_t i = 0; i < cfg.storage_units.size(); ++i) {
      const auto& s = cfg.storage_units[i];
      min_duration_rows("eq16", "minch_" + s.id, sV[i], s.min_charge_time, 0,
                        true);
      min_duration_rows("eq17", "mindch_" + s.id, sU[i], s.min_discharge_time,
                        0, true);
    }
  }

  void load_power_rows() { // tag eq18
    for (size_t i = 0; i < cfg.adjustable_loads.size(); ++i) {
      const auto& d = cfg.adjustable_loads[i];
      for (int t = d.window_start; t <= d.window_end; ++t) {
        row("eq18", at("dlo_" + d.id, t),
            {{lD[i][t - 1], 1.0}, {lZ[i][t - 1], -d.d_min[t - 1]}}, Rel::Ge,
            0.0);
        row("eq18", at("dhi_" + d.id, t),
            {{lD[i][t - 1], 1.0}, {lZ[i][t - 1], -d.d_max[t - 1]}}, Rel::Le,
            0.0);
      }
    }
  }

  void load_min_on_rows() { // tag eq19
    for (size_t i = 0; i < cfg.adjustable_loads.size(); ++i) {
      const auto& d = cfg.adjustable_loads[i];
      min_duration_rows("eq19", "minon_" + d.id, lZ[i], d.min_on, 0, true);
    }
  }

  void load_energy_rows(bool with_slack, double penalty) { // tag eq20
    for (size_t i = 0; i < cfg.adjustable_loads.size(); ++i) {
      const auto& d = cfg.adjustable_loads[i];
      std::vector<Term> terms;
      for (int t = d.window_start; t <= d.window_end; ++t)
        terms.push_back({lD[i][t - 1], tau});
      if (with_slack) {
        const int sp = internal("les_over_" + d.id, 0.0, kInfD, penalty, true);
        const int sn = internal("les_under_" + d.id, 0.0, kInfD, penalty, true);
        terms.push_back({sp, -1.0});
        terms.push_back({sn, 1.0});
      }
      row("eq20", "energy_" + d.id, std::move(terms), Rel::Eq,
          d.energy_required);
    }
  }

  void balance_rows() { // tag eq4
    std::vector<double> fixed_net(T, 0.0);
    for (const auto& p : cfg.fixed_profiles) {
      const double sgn = p.kind == ProfileKind::FixedLoad ? 1.0 : -1.0;
      for (int t = 0; t < T; ++t) fixed_net[t] += sgn * p.values[t];
    }
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      for (size_t i = 0; i < cfg.dispatchable_units.size(); ++i)
        terms.push_back({gP[i][t - 1], 1.0});
      for (size_t i = 0; i < cfg.storage_units.size(); ++i)
        terms.push_back({sP[i][t - 1], 1.0});
      terms.push_back({pm[t - 1], 1.0});
      for (size_t i = 0; i < cfg.adjustable_loads.size(); ++i)
        terms.push_back({lD[i][t - 1], -1.0});
      row("eq4", at("bal", t), std::move(terms), Rel::Eq, fixed_net[t - 1]);
    }
  }

  void exchange_bound_rows() { // tag eq5
    for (int t = 1; t <= T; ++t) {
      row("eq5", at("exlo", t), {{pm[t - 1], 1.0}}, Rel::Ge,
          -cfg.line_capacity);
      row("eq5", at("exhi", t), {{pm[t - 1], 1.0}}, Rel::Le,
          cfg.line_capacity);
    }
  }

  // Exchange-change cap with a shared nonnegative slack per bounded hour.
  void ramp_rows(const std::vector<double>& lower,
                 const std::vector<double>& upper, double penalty) { // eq21
    rslack.assign(T, -1);
    for (int t = 1; t <= T; ++t) {
      const double lo = lower[t - 1], hi = upper[t - 1];
      if (!std::isfinite(lo) && !std::isfinite(hi)) continue;
      const int s = out.model.add_continuous(at("rs", t), 0.0, kInfD, penalty);
      out.vars.add("", Sym::slack, t, s);
      out.penalty_vars.push_back(s);
      rslack[t - 1] = s;
      std::vector<Term> base{{pm[t - 1], 1.0}};
      if (t >= 2) base.push_back({pm[t - 2], -1.0});
      if (std::isfinite(hi)) {
        auto terms = base;
        terms.push_back({s, -1.0});
        row("eq21", at("ramphi", t), std::move(terms), Rel::Le, hi);
      }
      if (std::isfinite(lo)) {
        auto terms = base;
        terms.push_back({s, 1.0});
        row("eq21", at("ramplo", t), std::move(terms), Rel::Ge, lo);
      }
    }
  }

  void startstop_cost_rows() { // tag aux
    for (size_t i = 0; i < cfg.dispatchable_units.size(); ++i) {
      const auto& g = cfg.dispatchable_units[i];
      const double init = g.initial_on ? 1.0 : 0.0;
      for (int t = 1; t <= T; ++t) {
        if (gSU[i][t - 1] >= 0) {
          std::vector<Term> terms{{gSU[i][t - 1], 1.0},
                                  {gI[i][t - 1], -g.cost_startup}};
          double rhs = 0.0;
          if (t >= 2) terms.push_back({gI[i][t - 2], g.cost_startup});
          else rhs = -g.cost_startup * init;
          row("aux", at("startc_" + g.id, t), std::move(terms), Rel::Ge, rhs);
        }
        if (gSD[i][t - 1] >= 0) {
          std::vector<Term> terms{{gSD[i][t - 1], 1.0},
                                  {gI[i][t - 1], g.cost_shutdown}};
          double rhs = 0.0;
          if (t >= 2) terms.push_back({gI[i][t - 2], -g.cost_shutdown});
          else rhs = g.cost_shutdown * init;
          row("aux", at("stopc_" + g.id, t), std::move(terms), Rel::Ge, rhs);
        }
      }
    }
  }
};

}  // namespace

BuiltProblem build_monolithic(const MicrogridConfig& config,
                              const PriceSeries& price, const RampPolicy& ramp,
                              double slack_penalty) {
  require_valid(config, price);
  const int T = config.time_grid.horizon_hours;
  if (ramp.enabled() &&
      ((int)ramp.lower_bounds.size() != T || (int)ramp.upper_bounds.size() != T))
    throw std::invalid_argument("ramp bounds length != horizon");

  Builder b(config, ProblemKind::Monolithic);
  b.make_unit_vars();
  b.make_storage_vars();
  b.make_load_vars();
  b.make_grid_vars(price.values);

  b.balance_rows();
  b.exchange_bound_rows();
  b.unit_capacity_rows();
  b.unit_ramp_rows();
  b.unit_min_updown_rows();
  b.storage_power_rows();
  b.storage_mode_rows();
  b.storage_energy_rows();
  b.storage_min_mode_rows();
  b.load_power_rows();
  b.load_min_on_rows();
  b.load_energy_rows(/*with_slack=*/false, slack_penalty);
  if (ramp.enabled()) b.ramp_rows(ramp.lower_bounds, ramp.upper_bounds,
                                  slack_penalty);
  b.startstop_cost_rows();
  return std::move(b.out);
}

BuiltProblem build_master(const MicrogridConfig& config,
                          const PriceSeries& price_forecast,
                          const std::vector<Cut>& cuts, double epigraph_floor) {
  require_valid(config, price_forecast);
  Builder b(config, ProblemKind::Master);
  b.make_unit_vars();
  b.make_storage_vars();
  b.make_load_vars();

  double floor = epigraph_floor;
  if (std::isnan(floor)) {
    floor = 0.0;
    for (double p : price_forecast.values)
      floor -= std::fabs(p) * config.line_capacity;
  }
  b.theta = b.out.model.add_continuous("theta", floor, kInfD, 1.0);
  b.out.aux_vars.push_back(b.theta);

  b.unit_capacity_rows();
  b.unit_min_updown_rows();
  b.storage_power_rows();
  b.storage_mode_rows();
  b.storage_min_mode_rows();
  b.load_power_rows();
  b.load_min_on_rows();
  b.startstop_cost_rows();

  const auto keys = binary_schedule_keys(config);
  for (size_t c = 0; c < cuts.size(); ++c) {
    const Cut& cut = cuts[c];
    if (cut.coefficients.size() != keys.size())
      throw std::invalid_argument("cut coefficient count != binary count");
    std::vector<Term> terms{{b.theta, 1.0}};
    for (size_t k = 0; k < keys.size(); ++k)
      if (cut.coefficients[k] != 0.0)
        terms.push_back(
            {b.out.vars.id(keys[k].entity, keys[k].sym, keys[k].hour),
             -cut.coefficients[k]});
    b.row("cut", "cut_" + std::to_string(c), std::move(terms), Rel::Ge,
          cut.constant);
  }
  return std::move(b.out);
}

BuiltProblem build_recourse_lp(const MicrogridConfig& config,
                               const FeederProfile& feeder,
                               const PriceSeries& price,
                               const std::vector<double>& fixed_binaries,
                               const UncertainRealization& realization,
                               const RampPolicy& ramp_base,
                               double slack_penalty) {
  require_valid(config, price);
  const int T = config.time_grid.horizon_hours;
  {
    auto bad = validate_feeder(feeder, T);
    if (!bad.empty())
      throw std::invalid_argument("cannot build dispatch model:\n" +
                                  format_violations(bad));
  }
  auto check_dev = [&](const std::vector<double>& dev, const char* what) {
    if (!dev.empty() && (int)dev.size() != T)
      throw std::invalid_argument(std::string(what) +
                                  " deviation length != horizon");
  };
  check_dev(realization.load_deviation, "load");
  check_dev(realization.solar_deviation, "solar");
  check_dev(realization.price_deviation, "price");

  const auto keys = binary_schedule_keys(config);
  if (fixed_binaries.size() != keys.size())
    throw std::invalid_argument("fixed binary count != schedule binary count");

  auto dev_at = [](const std::vector<double>& dev, int t) {
    return dev.empty() ? 0.0 : dev[t];
  };

  std::vector<double> priced(T);
  for (int t = 0; t < T; ++t)
    priced[t] =
        price.values[t] * (1.0 + dev_at(realization.price_deviation, t));

  Builder b(config, ProblemKind::Recourse);
  b.make_unit_vars();
  b.make_storage_vars();
  b.make_load_vars();
  b.make_grid_vars(priced);

  b.balance_rows();
  b.exchange_bound_rows();
  b.unit_capacity_rows();
  b.unit_ramp_rows();
  b.storage_power_rows();
  b.storage_energy_rows();
  b.load_power_rows();
  b.load_energy_rows(/*with_slack=*/true, slack_penalty);

  if (ramp_base.enabled()) {
    std::vector<double> load(T), solar(T);
    for (int t = 0; t < T; ++t) {
      load[t] = feeder.customer_load[t] *
                (1.0 + dev_at(realization.load_deviation, t));
      solar[t] = feeder.customer_solar[t] *
                 (1.0 + dev_at(realization.solar_deviation, t));
    }
    const auto net = feeder::aggregate_net_load({load, solar});
    const auto shifted = feeder::ramp_bounds(net, ramp_base.delta,
                                             config.initial_utility_power);
    b.ramp_rows(shifted.lower_bounds, shifted.upper_bounds, slack_penalty);
  }

  // Pin the commitment. Duals of these rows price each binary's marginal
  // effect on the dispatch cost, which is exactly what a cut needs.
  for (size_t k = 0; k < keys.size(); ++k) {
    const double want = fixed_binaries[k];
    const double pin = std::round(want);
    if (std::fabs(want - pin) > 1e-6 || pin < 0.0 || pin > 1.0)
      throw std::invalid_argument("fixed binary value not 0/1 at index " +
                                  std::to_string(k));
    const int col = b.out.vars.id(keys[k].entity, keys[k].sym, keys[k].hour);
    const int r = b.row("aux", "pin_" + std::to_string(k), {{col, 1.0}},
                        Rel::Eq, pin);
    b.out.binary_fix_rows.push_back(r);
  }
  return std::move(b.out);
}

}  // namespace rampcap::sched
