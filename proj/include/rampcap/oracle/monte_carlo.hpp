#pragma once
// Empirical assessment of a commitment under uncertainty: re-dispatch
// against concrete realizations and aggregate cost / feasibility over
// sampled scenarios.

#include "rampcap/domain.hpp"

#include <vector>

namespace rampcap::oracle {

struct SimOutcome {
  // Re-dispatch objective: generation + exchange cost, including any
  // penalty carried by relaxation slacks (reported separately below so
  // callers can judge the physical part on its own).
  double cost = 0.0;
  // True when every exchange-change bound held without slack (<= 1e-6 MW).
  bool ramp_feasible = false;
  // Total activity on all penalty slack columns (MW / MWh).
  double slack_used = 0.0;
};

// Fixes the given commitment (canonical binary order), applies one
// realization of the uncertain inputs, and solves the resulting dispatch
// LP. `spec` is the uncertainty set the realization must live in: each
// active category may deviate in at most `budget_hours` hours and never
// beyond its error fraction; inactive categories must not deviate at all.
// Throws std::invalid_argument when the realization falls outside that set
// or the commitment does not match the config's binary layout.
SimOutcome simulate_realization(const std::vector<double>& commitments,
                                const MicrogridConfig& config,
                                const PriceSeries& price,
                                const FeederProfile& feeder, double delta,
                                const UncertainRealization& realization,
                                const UncertaintySpec& spec,
                                double slack_penalty = 1e4);

struct McSummary {
  int samples = 0;
  int feasible_count = 0;  // <= samples
  double cost_min = 0.0;
  double cost_mean = 0.0;
  double cost_max = 0.0;
  double slack_max = 0.0;   // largest per-sample total slack
  double slack_mean = 0.0;  // mean per-sample total slack
};

// Draws `n` realizations uniformly over the budgeted uncertainty set: per
// active category, a deviated-hour count uniform on {0..budget}, a uniform
// subset of hours of that size, and a deviation uniform on [-err, +err] for
// each chosen hour — interior points included deliberately, to probe the
// extreme-point assumption the worst-case search relies on. Each sample
// runs simulate_realization and the outcomes are aggregated. Sampling is
// reproducible: sample i derives its own generator state from (seed, i)
// alone, so results do not depend on evaluation order. Throws
// std::invalid_argument when n < 1 or the spec does not fit the horizon.
McSummary monte_carlo(const std::vector<double>& commitments,
                      const MicrogridConfig& config, const PriceSeries& price,
                      const FeederProfile& feeder, double delta,
                      const UncertaintySpec& spec, int n,
                      unsigned long long seed);

}  // namespace rampcap::oracle
