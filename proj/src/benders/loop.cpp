#include "rampcap/benders/loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rampcap/feeder.hpp"
#include "rampcap/milp/solve.hpp"

namespace rampcap::benders {

namespace {
constexpr double kInfD = std::numeric_limits<double>::infinity();
}

sched::Cut make_optimality_cut(const robust::WorstCase& worst,
                               const std::vector<double>& commitment,
                               int iteration) {
  if (worst.fix_row_duals.size() != commitment.size())
    throw std::invalid_argument("cut certificate size mismatch");
  sched::Cut cut;
  cut.coefficients = worst.fix_row_duals;
  cut.constant = worst.worst_cost;
  for (size_t k = 0; k < commitment.size(); ++k)
    cut.constant -= cut.coefficients[k] * commitment[k];
  cut.iteration = iteration;
  return cut;
}

Bounds bounds_update(double master_objective, double subproblem_cost,
                     double commitment_cost, double previous_upper) {
  Bounds b;
  b.lower = master_objective;
  b.upper = std::min(previous_upper, commitment_cost + subproblem_cost);
  return b;
}

RobustResult solve_robust(const MicrogridConfig& config,
                          const FeederProfile& feeder, const PriceSeries& price,
                          double delta, const UncertaintySpec& uncertainty,
                          const Options& options) {
  const int T = config.time_grid.horizon_hours;
  {
    auto bad = validate_config(config);
    auto more = validate_feeder(feeder, T);
    bad.insert(bad.end(), more.begin(), more.end());
    more = validate_price(price, T);
    bad.insert(bad.end(), more.begin(), more.end());
    more = validate_uncertainty(uncertainty, T);
    bad.insert(bad.end(), more.begin(), more.end());
    if (!bad.empty())
      throw std::invalid_argument("invalid robust-run inputs:\n" +
                                  format_violations(bad));
  }

  RampPolicy ramp;
  ramp.delta = delta; // bounds are recomputed per realization downstream

  // The value estimate can never fall below the cheapest conceivable
  // exchange outcome: full export at the most favorable realized price.
  const double price_stretch =
      1.0 + (uncertainty.is_active(Category::Price) ? uncertainty.price_error
                                                    : 0.0);
  double floor = 0.0;
  for (double p : price.values)
    floor -= std::fabs(p) * price_stretch * config.line_capacity;

  const auto keys = sched::binary_schedule_keys(config);

  RobustResult res;
  res.cuts = options.warm_cuts;
  double lb = -kInfD;
  double ub = kInfD;
  bool have_incumbent = false;

  for (int it = 1; it <= options.max_iterations; ++it) {
    const auto master = sched::build_master(config, price, res.cuts, floor);
    const auto msol = milp::solve_milp(master.model);
    if (msol.status != milp::MipStatus::Optimal)
      throw std::runtime_error(
          "commitment master is infeasible: the configuration cannot "
          "schedule its committed resources");

    std::vector<double> commitment(keys.size());
    for (size_t k = 0; k < keys.size(); ++k)
      commitment[k] = std::round(
          msol.x[master.vars.id(keys[k].entity, keys[k].sym, keys[k].hour)]);
    const double commit_cost = sched::binary_commitment_cost(config, commitment);

    const auto worst = robust::solve_worst_case({config, feeder, price,
                                                 commitment, ramp, uncertainty,
                                                 options.slack_penalty});

    const Bounds b =
        bounds_update(msol.objective, worst.worst_cost, commit_cost, ub);
    lb = std::max(lb, b.lower); // master optima are nondecreasing in cuts
    if (b.upper < ub) {
      ub = b.upper;
      res.commitment = commitment;
      res.worst_case = worst;
      have_incumbent = true;
    }

    IterationRecord rec;
    rec.iteration = it;
    rec.lower_bound = lb;
    rec.upper_bound = ub;
    rec.gap = (ub - lb) / std::max(1.0, std::fabs(ub));
    rec.worst_cost = worst.worst_cost;
    for (int t = 0; t < T; ++t)
      if (worst.realization.load_deviation[t] != 0.0 ||
          worst.realization.solar_deviation[t] != 0.0 ||
          worst.realization.price_deviation[t] != 0.0)
        ++rec.deviated_hours;
    res.trace.push_back(rec);
    res.iterations = it;

    if (rec.gap <= options.tolerance) {
      res.converged = true;
      break;
    }
    res.cuts.push_back(make_optimality_cut(worst, commitment, it));
  }

  if (!have_incumbent)
    throw std::runtime_error("no commitment was evaluated");

  // Final dispatch at the incumbent commitment under its worst realization.
  const auto final_rec = sched::build_recourse_lp(
      config, feeder, price, res.commitment, res.worst_case.realization, ramp,
      options.slack_penalty);
  const auto final_lp = milp::solve_lp(final_rec.model);
  if (final_lp.status != milp::LpStatus::Optimal)
    throw std::runtime_error("final dispatch solve failed");

  res.objective = ub;
  res.lower_bound = lb;
  res.schedule = sched::extract_schedule(final_rec, final_lp.x, ub);
  res.penalty_used = sched::penalty_usage(final_rec, final_lp.x);
  return res;
}

}  // namespace rampcap::benders
