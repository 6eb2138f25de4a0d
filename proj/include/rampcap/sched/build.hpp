#pragma once
// Builders that translate a MicrogridConfig plus market data into concrete
// optimization models:
//
//   build_monolithic   — the full day-ahead commitment + dispatch MILP with
//                        the grid-exchange ramp cap;
//   build_master       — the commitment-side problem of the decomposition:
//                        binary-dependent costs plus an epigraph variable
//                        bounded below by accumulated cuts;
//   build_recourse_lp  — the dispatch LP for a fixed commitment and one
//                        concrete realization of the uncertain inputs.
//
// Every constraint row carries a tag naming the requirement family it
// encodes; the tag vocabulary {eq4 .. eq21, cut, aux} is part of the API.

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rampcap/domain.hpp"
#include "rampcap/milp/model.hpp"

namespace rampcap::sched {

// Symbols a scheduling variable can carry. PM is the signed grid exchange.
enum class Sym { P, I, u, v, z, D, C, PM, slack };

const char* to_string(Sym sym);

struct VarKey {
  std::string entity; // unit/storage/load id; "" for system-level series
  Sym sym = Sym::P;
  int hour = 0; // 1-based

  auto operator<=>(const VarKey&) const = default;
};

// Total, collision-checked lookup from (entity, symbol, hour) to the model
// variable id. Covers every physical quantity of the built model; purely
// internal helper columns (cost linearizers, split flows, epigraph, energy
// slacks) are listed in BuiltProblem::aux_vars instead.
class VariableMap {
 public:
  void add(std::string entity, Sym sym, int hour, int var);
  int id(std::string_view entity, Sym sym, int hour) const; // throws
  bool has(std::string_view entity, Sym sym, int hour) const;
  int size() const { return (int)ids_.size(); }
  const std::map<VarKey, int>& entries() const { return ids_; }

 private:
  std::map<VarKey, int> ids_;
};

struct BuiltProblem {
  milp::Model model;
  VariableMap vars;
  // One tag per constraint row, aligned with model.constraints().
  std::vector<std::string> row_tags;
  // Columns intentionally absent from `vars` (solver-internal helpers).
  std::vector<int> aux_vars;
  // Columns carrying the infeasibility penalty (ramp + energy slacks).
  std::vector<int> penalty_vars;
  // Recourse only: row id of the pin for each canonical binary, in
  // binary_schedule_keys order. Duals of these rows price the commitment.
  std::vector<int> binary_fix_rows;
};

// An optimality cut for the master: theta >= constant + coef . binaries,
// with coefficients aligned to binary_schedule_keys(config).
struct Cut {
  double constant = 0.0;
  std::vector<double> coefficients;
  int iteration = 0;
};

// Canonical ordering of the commitment binaries shared by the master, the
// recourse pins and cut coefficients: every dispatchable unit's I over
// t = 1..T, then per storage unit u over t then v over t, then every
// adjustable load's z over t.
std::vector<VarKey> binary_schedule_keys(const MicrogridConfig& config);

// Full deterministic scheduling MILP. `ramp` supplies the per-hour exchange
// change bounds (disabled policy omits those rows); each bounded hour gets a
// nonnegative slack penalized at slack_penalty $/MW so the model stays
// feasible even when the cap is physically unattainable.
BuiltProblem build_monolithic(const MicrogridConfig& config,
                              const PriceSeries& price, const RampPolicy& ramp,
                              double slack_penalty);

// Commitment-side problem: objective is no-load + start/stop cost plus an
// epigraph variable `theta` lower-bounded by every cut (and by
// epigraph_floor before any cut exists; NaN picks a safe default of
// -sum_t |price_t| * line_capacity). Constraint families: unit capacity and
// minimum up/down windows, storage mode exclusivity, power windows and
// minimum mode durations, load power windows and minimum running windows.
BuiltProblem build_master(
    const MicrogridConfig& config, const PriceSeries& price_forecast,
    const std::vector<Cut>& cuts,
    double epigraph_floor = std::numeric_limits<double>::quiet_NaN());

// Dispatch LP for one commitment and one realization. The commitment enters
// as equality pins on relaxed [0,1] columns (rows listed in
// binary_fix_rows); the realization shifts the exchange-ramp bounds through
// the feeder profile and scales the exchange price. Objective: marginal
// generation cost + exchange cost + penalty on ramp/energy slacks.
BuiltProblem build_recourse_lp(const MicrogridConfig& config,
                               const FeederProfile& feeder,
                               const PriceSeries& price,
                               const std::vector<double>& fixed_binaries,
                               const UncertainRealization& realization,
                               const RampPolicy& ramp_base,
                               double slack_penalty);

// Reads a solved point back into per-entity schedules. The problem must
// expose dispatch quantities (monolithic or recourse build).
Schedule extract_schedule(const BuiltProblem& problem,
                          const std::vector<double>& x, double objective);

// No-load plus start/stop cost of a commitment vector (canonical order),
// including transitions from the configured initial states.
double binary_commitment_cost(const MicrogridConfig& config,
                              const std::vector<double>& fixed_binaries);

// Total value carried by the penalty slack columns at a solved point.
double penalty_usage(const BuiltProblem& problem, const std::vector<double>& x);

}  // namespace rampcap::sched
