#pragma once
// Independent schedule auditor: re-derives every operational requirement
// from the raw config and data series and checks a Schedule against them
// arithmetically. Deliberately shares no code with the model builders —
// disagreement between the two implementations on a solved schedule is a
// release-blocking defect, so they must not inherit each other's mistakes.

#include <map>
#include <string>
#include <vector>

#include "rampcap/domain.hpp"

namespace rampcap::oracle {

// One broken requirement at one point. `tag` names the requirement family
// with the same vocabulary the model rows carry (eq4 .. eq21, aux), so
// reports line up with solver output. `hour` is 1-based; 0 marks a check
// spanning the whole horizon (e.g. a window energy total). For run-length
// checks `hour` is the first hour of the offending run and `lhs`/`bound`
// are the achieved and required lengths.
struct ViolationEntry {
  std::string tag;
  std::string entity;      // unit/storage/load id; "" for system-level rows
  int hour = 0;
  double lhs = 0.0;        // audited value
  double bound = 0.0;      // the limit it broke
  double magnitude = 0.0;  // positive size of the violation
};

struct ViolationReport {
  std::vector<ViolationEntry> entries;
  // Largest violation magnitude seen per tag; only violated tags appear.
  std::map<std::string, double> worst_by_tag;
  // Commitment + dispatch + exchange cost re-added directly from the
  // schedule values (no penalties, no solver involved).
  double recomputed_cost = 0.0;
  bool ok() const { return entries.empty(); }
};

// Audits `schedule` against `config`, `price` and the exchange-change
// bounds in `ramp` at absolute tolerance `tol` (MW / MWh). Checks, per
// family: hourly power balance, exchange magnitude, unit capacity vs
// commitment, unit ramp rates, unit minimum up/down runs (with credit for
// the configured pre-horizon state and exemption for runs cut off by the
// horizon end), storage power vs mode flags, mode exclusivity, the
// signed-power energy recursion, energy limits, minimum charge/discharge
// runs, adjustable-load power windows, minimum running time, window energy
// totals, and the exchange-change cap. Throws std::invalid_argument when
// the schedule's shape does not match the config (missing/extra entities,
// wrong series lengths, non-binary flags, non-finite values).
ViolationReport check_schedule(const Schedule& schedule,
                               const MicrogridConfig& config,
                               const PriceSeries& price,
                               const RampPolicy& ramp, double tol = 1e-6);

}  // namespace rampcap::oracle
