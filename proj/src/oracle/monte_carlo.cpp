// Re-dispatch simulation and sampling over the budgeted uncertainty set.

#include "rampcap/oracle/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "rampcap/milp/solve.hpp"
#include "rampcap/sched/build.hpp"

namespace rampcap::oracle {

namespace {

// splitmix64 mixing. The standard library pins down its engines but not its
// distributions, so identical seeds would not give identical samples across
// library implementations; sampled artifacts must be reproducible from the
// seed alone, hence an explicitly spelled-out generator and scaling.
constexpr unsigned long long kGolden = 0x9e3779b97f4a7c15ull;

unsigned long long mix64(unsigned long long z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Stream {
  unsigned long long state;
  unsigned long long next() { return mix64(state += kGolden); }
  double u01() { return double(next() >> 11) * 0x1.0p-53; }
  // Uniform on {0 .. m-1}. m is tiny here (hour counts), so the modulo
  // bias of ~m/2^64 is far below anything observable.
  int below(int m) { return m <= 1 ? 0 : int(next() % (unsigned long long)m); }
};

}  // namespace

SimOutcome simulate_realization(const std::vector<double>& commitments,
                                const MicrogridConfig& config,
                                const PriceSeries& price,
                                const FeederProfile& feeder, double delta,
                                const UncertainRealization& realization,
                                const UncertaintySpec& spec,
                                double slack_penalty) {
  const int T = config.time_grid.horizon_hours;
  const auto check_cat = [&](const std::vector<double>& dev, Category c,
                             const char* what) {
    if (dev.empty()) return;
    if ((int)dev.size() != T)
      throw std::invalid_argument(std::string(what) +
                                  " deviation length != horizon");
    const double err = spec.is_active(c) ? spec.error_of(c) : 0.0;
    int hours = 0;
    for (double d : dev) {
      if (!std::isfinite(d))
        throw std::invalid_argument(std::string(what) +
                                    " deviation is not finite");
      if (std::fabs(d) > err + 1e-9)
        throw std::invalid_argument(std::string(what) +
                                    " deviation exceeds the error interval");
      if (d != 0.0) ++hours;
    }
    if (hours > spec.budget_hours)
      throw std::invalid_argument(
          std::string(what) + " deviation uses more hours than the budget");
  };
  check_cat(realization.load_deviation, Category::Load, "load");
  check_cat(realization.solar_deviation, Category::Solar, "solar");
  check_cat(realization.price_deviation, Category::Price, "price");

  for (double b : commitments) {
    const double r = std::round(b);
    if (std::fabs(b - r) > 1e-6 || (r != 0.0 && r != 1.0))
      throw std::invalid_argument("commitment vector must be binary");
  }

  RampPolicy base;
  base.delta = delta;
  const auto rec = sched::build_recourse_lp(config, feeder, price, commitments,
                                            realization, base, slack_penalty);
  const auto lp = milp::solve_lp(rec.model);
  if (lp.status != milp::LpStatus::Optimal)
    throw std::runtime_error("re-dispatch did not solve to optimality");

  SimOutcome out;
  out.cost = lp.objective;
  out.slack_used = sched::penalty_usage(rec, lp.x);
  double worst_ramp_slack = 0.0;
  for (const auto& [key, col] : rec.vars.entries())
    if (key.sym == sched::Sym::slack)
      worst_ramp_slack = std::max(worst_ramp_slack, lp.x[col]);
  out.ramp_feasible = worst_ramp_slack <= 1e-6;
  return out;
}

McSummary monte_carlo(const std::vector<double>& commitments,
                      const MicrogridConfig& config, const PriceSeries& price,
                      const FeederProfile& feeder, double delta,
                      const UncertaintySpec& spec, int n,
                      unsigned long long seed) {
  if (n < 1) throw std::invalid_argument("sample count must be at least 1");
  const int T = config.time_grid.horizon_hours;
  {
    const auto bad = validate_uncertainty(spec, T);
    if (!bad.empty())
      throw std::invalid_argument("cannot sample uncertainty:\n" +
                                  format_violations(bad));
  }

  McSummary s;
  s.samples = n;
  double cost_sum = 0.0;
  double slack_sum = 0.0;
  std::vector<int> hours(T);
  for (int i = 0; i < n; ++i) {
    // The sample's stream state depends on (seed, i) alone, so outcomes are
    // identical no matter which order — or on how many workers — the
    // samples are evaluated.
    Stream rng{mix64(seed + kGolden * (unsigned long long)(i + 1))};
    auto r = UncertainRealization::zero(T);
    const auto sample_cat = [&](std::vector<double>& dev, Category c) {
      if (!spec.is_active(c)) return;
      const double err = spec.error_of(c);
      const int budget = std::min(spec.budget_hours, T);
      const int k = rng.below(budget + 1);
      std::iota(hours.begin(), hours.end(), 0);
      for (int j = 0; j < k; ++j) {
        std::swap(hours[j], hours[j + rng.below(T - j)]);
        dev[hours[j]] = (2.0 * rng.u01() - 1.0) * err;
      }
    };
    sample_cat(r.load_deviation, Category::Load);
    sample_cat(r.solar_deviation, Category::Solar);
    sample_cat(r.price_deviation, Category::Price);

    const SimOutcome out = simulate_realization(
        commitments, config, price, feeder, delta, r, spec);
    if (i == 0 || out.cost < s.cost_min) s.cost_min = out.cost;
    if (i == 0 || out.cost > s.cost_max) s.cost_max = out.cost;
    cost_sum += out.cost;
    slack_sum += out.slack_used;
    if (out.slack_used > s.slack_max) s.slack_max = out.slack_used;
    if (out.ramp_feasible) ++s.feasible_count;
  }
  s.cost_mean = cost_sum / n;
  s.slack_mean = slack_sum / n;
  return s;
}

}  // namespace rampcap::oracle
