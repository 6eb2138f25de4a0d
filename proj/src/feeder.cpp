#include "rampcap/feeder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rampcap::feeder {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> aggregate_net_load(const FeederProfile& profile) {
  if (profile.customer_load.size() != profile.customer_solar.size())
    throw std::invalid_argument("feeder profile: load/solar length mismatch");
  std::vector<double> net(profile.customer_load.size());
  for (size_t t = 0; t < net.size(); ++t)
    net[t] = profile.customer_load[t] - profile.customer_solar[t];
  return net;
}

RampPolicy ramp_bounds(const std::vector<double>& net_load, double delta,
                       std::optional<double> initial_utility_power) {
  if (!(delta > 0)) throw std::invalid_argument("ramp_bounds: delta must be > 0");
  if (net_load.size() < 2)
    throw std::invalid_argument("ramp_bounds: need at least 2 hours");
  const size_t T = net_load.size();
  RampPolicy policy;
  policy.delta = delta;
  policy.lower_bounds.assign(T, -kInf);
  policy.upper_bounds.assign(T, kInf);
  if (!std::isfinite(delta)) return policy; // capping disabled
  for (size_t t = 1; t < T; ++t) {
    const double change = net_load[t] - net_load[t - 1];
    policy.lower_bounds[t] = -delta - change;
    policy.upper_bounds[t] = delta - change;
  }
  if (initial_utility_power) {
    // |P^M_1 + net_1 - P^u_0| <= delta, expressed as bounds on P^M_1 - 0.
    policy.lower_bounds[0] = -delta - (net_load[0] - *initial_utility_power);
    policy.upper_bounds[0] = delta - (net_load[0] - *initial_utility_power);
  }
  return policy;
}

FeederStats ramp_stats(const std::vector<double>& net_load,
                       const std::vector<int>& windows) {
  FeederStats stats;
  stats.net_load = net_load;
  const int T = (int)net_load.size();
  for (int t = 1; t < T; ++t) {
    const double step = std::fabs(net_load[t] - net_load[t - 1]);
    if (step > stats.max_1h_ramp) {
      stats.max_1h_ramp = step;
      stats.argmax_1h_hour = t + 1;
    }
  }
  for (int k : windows) {
    if (k >= T)
      throw std::invalid_argument("ramp_stats: window k must be < series length");
    KhRamp r;
    r.k = k;
    for (int t = 0; t + k < T; ++t) {
      const double avg = std::fabs(net_load[t + k] - net_load[t]) / k;
      if (avg > r.value) {
        r.value = avg;
        r.argmax_hour = t + 1;
      }
    }
    stats.kh_ramps.push_back(r);
  }
  return stats;
}

std::vector<double> utility_power(const std::vector<double>& grid_exchange,
                                  const std::vector<double>& net_load) {
  if (grid_exchange.size() != net_load.size())
    throw std::invalid_argument("utility_power: length mismatch");
  std::vector<double> pu(net_load.size());
  for (size_t t = 0; t < pu.size(); ++t) pu[t] = grid_exchange[t] + net_load[t];
  return pu;
}

}  // namespace rampcap::feeder
