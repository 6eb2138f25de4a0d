#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "rampcap/sched/build.hpp"

namespace rampcap::sched {

namespace {

// Entities are recognized by the symbols they carry: units have commitment
// flags, storage has mode flags, loads have on flags.
enum class EntityKind { Unit, Storage, Load };

}  // namespace

Schedule extract_schedule(const BuiltProblem& problem,
                          const std::vector<double>& x, double objective) {
  if ((int)x.size() < problem.model.num_variables())
    throw std::invalid_argument("solution vector shorter than variable count");

  int T = 0;
  std::map<std::string, EntityKind> kinds;
  for (const auto& [key, col] : problem.vars.entries()) {
    T = std::max(T, key.hour);
    if (key.entity.empty()) continue;
    if (key.sym == Sym::I) kinds[key.entity] = EntityKind::Unit;
    else if (key.sym == Sym::u) kinds[key.entity] = EntityKind::Storage;
    else if (key.sym == Sym::z) kinds[key.entity] = EntityKind::Load;
  }

  const auto value = [&](const std::string& entity, Sym sym, int t) {
    return x[problem.vars.id(entity, sym, t)];
  };
  const auto flag = [&](const std::string& entity, Sym sym, int t) {
    return value(entity, sym, t) > 0.5;
  };

  Schedule sched;
  sched.objective_cost = objective;
  for (const auto& [entity, kind] : kinds) {
    switch (kind) {
      case EntityKind::Unit: {
        UnitSchedule us;
        us.id = entity;
        for (int t = 1; t <= T; ++t) {
          us.on.push_back(flag(entity, Sym::I, t));
          us.power.push_back(value(entity, Sym::P, t));
        }
        sched.units.push_back(std::move(us));
        break;
      }
      case EntityKind::Storage: {
        StorageSchedule ss;
        ss.id = entity;
        const bool has_energy = problem.vars.has(entity, Sym::C, 1);
        for (int t = 1; t <= T; ++t) {
          ss.power.push_back(value(entity, Sym::P, t));
          ss.discharging.push_back(flag(entity, Sym::u, t));
          ss.charging.push_back(flag(entity, Sym::v, t));
          ss.energy.push_back(has_energy ? value(entity, Sym::C, t) : 0.0);
        }
        sched.storage.push_back(std::move(ss));
        break;
      }
      case EntityKind::Load: {
        LoadSchedule ls;
        ls.id = entity;
        for (int t = 1; t <= T; ++t) {
          ls.on.push_back(flag(entity, Sym::z, t));
          ls.power.push_back(value(entity, Sym::D, t));
        }
        sched.loads.push_back(std::move(ls));
        break;
      }
    }
  }
  if (problem.vars.has("", Sym::PM, 1))
    for (int t = 1; t <= T; ++t)
      sched.grid_exchange.push_back(value("", Sym::PM, t));
  return sched;
}

double binary_commitment_cost(const MicrogridConfig& config,
                              const std::vector<double>& binaries) {
  const auto keys = binary_schedule_keys(config);
  if (binaries.size() != keys.size())
    throw std::invalid_argument("binary count != schedule binary count");
  const int T = config.time_grid.horizon_hours;

  double cost = 0.0;
  size_t k = 0;
  for (const auto& g : config.dispatchable_units) {
    double prev = g.initial_on ? 1.0 : 0.0;
    for (int t = 1; t <= T; ++t, ++k) {
      const double on = std::round(binaries[k]);
      cost += g.cost_noload * on;
      if (on > 0.5 && prev < 0.5) cost += g.cost_startup;
      if (on < 0.5 && prev > 0.5) cost += g.cost_shutdown;
      prev = on;
    }
  }
  // Storage mode flags and load on flags carry no fixed cost.
  return cost;
}

double penalty_usage(const BuiltProblem& problem,
                     const std::vector<double>& x) {
  double total = 0.0;
  for (int col : problem.penalty_vars) total += x[col];
  return total;
}

}  // namespace rampcap::sched
