#pragma once
// Master-subproblem coordination: a commitment master with an epigraph
// estimate of the worst-case dispatch cost, an adversarial subproblem that
// evaluates each commitment, optimality cuts built from the commitment-pin
// multipliers, and lower/upper bound tracking until the relative gap closes.

#include <vector>

#include "rampcap/domain.hpp"
#include "rampcap/robust/worstcase.hpp"
#include "rampcap/sched/build.hpp"

namespace rampcap::benders {

struct Options {
  double tolerance = 1e-4; // relative lower/upper gap at convergence
  int max_iterations = 50;
  double slack_penalty = 1e4; // $ per MW of exchange-change violation
  // Cuts carried in from a previous run on the same config/feeder/price with
  // a budget no larger than this one (they stay valid as the set grows).
  std::vector<sched::Cut> warm_cuts;
};

struct IterationRecord {
  int iteration = 0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;        // (upper - lower) / max(1, |upper|)
  double worst_cost = 0.0; // subproblem value at this iteration's commitment
  int deviated_hours = 0;  // hours with any nonzero deviation, worst case
};

struct RobustResult {
  Schedule schedule; // commitments plus dispatch at the worst realization
  robust::WorstCase worst_case;      // for the incumbent commitment
  std::vector<double> commitment;    // schedule binaries in key order
  std::vector<sched::Cut> cuts;      // all cuts generated (reusable)
  std::vector<IterationRecord> trace;
  double objective = 0.0;   // final upper bound: commitment + worst dispatch
  double lower_bound = 0.0; // final master bound
  int iterations = 0;
  bool converged = false;
  double penalty_used = 0.0; // total penalized slack in the final dispatch
};

// One optimality cut: theta >= worst_cost + duals . (x - commitment).
sched::Cut make_optimality_cut(const robust::WorstCase& worst,
                               const std::vector<double>& commitment,
                               int iteration);

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Lower bound is the master optimum; upper keeps the best full evaluation.
Bounds bounds_update(double master_objective, double subproblem_cost,
                     double commitment_cost, double previous_upper);

// The coordination loop. Throws std::runtime_error when the master is
// infeasible (the configuration cannot commit at all) or a subproblem fails;
// returns converged=false with the residual gap when the iteration budget
// runs out.
RobustResult solve_robust(const MicrogridConfig& config,
                          const FeederProfile& feeder, const PriceSeries& price,
                          double delta, const UncertaintySpec& uncertainty,
                          const Options& options = {});

}  // namespace rampcap::benders
