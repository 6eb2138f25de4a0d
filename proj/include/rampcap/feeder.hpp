#pragma once
// Feeder-side arithmetic: net-load aggregation, ramp statistics, and the
// translation of the utility ramp limit into per-hour bounds on the change
// of microgrid grid exchange.

#include <vector>

#include "rampcap/domain.hpp"

namespace rampcap::feeder {

struct KhRamp {
  int k = 0;
  double value = 0.0; // MW/h
  int argmax_hour = 0; // 1-based start hour of the worst window
};

struct FeederStats {
  std::vector<double> net_load; // MW per hour
  double max_1h_ramp = 0.0;     // MW/h
  int argmax_1h_hour = 0;       // 1-based hour the worst step lands on
  std::vector<KhRamp> kh_ramps;
};

// net_t = customer_load_t - customer_solar_t.
std::vector<double> aggregate_net_load(const FeederProfile& profile);

// Bounds on the exchange change per hour implied by the utility limit:
// at hour index t >= 1,
//   lower_t = -delta - (net_t - net_{t-1}),  upper_t = delta - (net_t - net_{t-1}).
// Hour index 0 is unbounded unless initial_utility_power is given, in which
// case P^M at hour 1 is bounded against it: |P^M_1 + net_1 - P^u_0| <= delta.
RampPolicy ramp_bounds(const std::vector<double>& net_load, double delta,
                       std::optional<double> initial_utility_power = {});

// Max absolute 1-hour step and max |net_{t+k} - net_t| / k for each k.
FeederStats ramp_stats(const std::vector<double>& net_load,
                       const std::vector<int>& windows);

// P^u_t = P^M_t + net_load_t.
std::vector<double> utility_power(const std::vector<double>& grid_exchange,
                                  const std::vector<double>& net_load);

}  // namespace rampcap::feeder
