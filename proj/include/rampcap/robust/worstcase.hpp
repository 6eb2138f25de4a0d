#pragma once
// Adversarial subproblem: maximize the fixed-commitment dispatch cost over
// the budgeted uncertainty set. The dispatch LP (commitments pinned) is
// dualized exactly; per-hour binary selectors move each uncertain series to
// an extreme of its interval; price selectors enter the dual stationarity
// rows linearly, while feeder load/solar selectors multiply exchange-change
// row duals and are linearized with bounds inferred from the slack-penalty
// structure of the dispatch model.

#include <vector>

#include "rampcap/domain.hpp"
#include "rampcap/milp/solve.hpp"
#include "rampcap/robust/dualize.hpp"
#include "rampcap/sched/build.hpp"

namespace rampcap::robust {

struct WorstCaseProblem {
  milp::Model model; // maximization MILP: dual columns plus selectors
  // Selector columns per hour (index t-1); -1 where the category is inactive.
  std::vector<int> load_plus, load_minus;
  std::vector<int> solar_plus, solar_minus;
  std::vector<int> price_plus, price_minus;
};

struct WorstCase {
  UncertainRealization realization;
  double worst_cost = 0.0; // confirmed dispatch optimum at the realization
  // Multipliers of the commitment-pin rows from the confirming solve, one
  // per schedule binary in key order: the sensitivity of the dispatch cost
  // to each commitment, i.e. the cut coefficients.
  std::vector<double> fix_row_duals;
  double linearization_gap = 0.0; // |selector optimum - confirmed| relative
};

// `recourse` must be the zero-deviation dispatch problem whose model was
// dualized into `dual`; deviations are layered on top of it.
WorstCaseProblem build_worstcase_milp(const sched::BuiltProblem& recourse,
                                      const DualModel& dual,
                                      const UncertaintySpec& uncertainty,
                                      const FeederProfile& feeder,
                                      const PriceSeries& price);

// Realization encoded by the selector values of a worst-case solution.
UncertainRealization selector_realization(const WorstCaseProblem& problem,
                                          const UncertaintySpec& uncertainty,
                                          const std::vector<double>& x,
                                          int horizon);

struct WorstCaseInputs {
  const MicrogridConfig& config;
  const FeederProfile& feeder;
  const PriceSeries& price;
  const std::vector<double>& fixed_binaries; // schedule-binary key order
  const RampPolicy& ramp; // delta is used; bounds recomputed per realization
  const UncertaintySpec& uncertainty;
  double slack_penalty = 1e4;
};

// Orchestrated path: build the zero-deviation dispatch LP, dualize, attach
// selectors, solve the adversary, then confirm by re-solving the dispatch LP
// at the extracted realization. Throws std::runtime_error when either solve
// fails or the confirmation disagrees beyond 1e-5 relative.
WorstCase solve_worst_case(const WorstCaseInputs& inputs);

}  // namespace rampcap::robust
