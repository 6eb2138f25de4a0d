// Branch and bound over LP relaxations for models with binary variables.
//
// Node selection is best-bound (ties: oldest node first), branching picks the
// most fractional binary. Nodes store only their bound fixes; each node LP is
// re-solved warm from wherever the shared simplex context currently sits, so
// the cost of a node is roughly proportional to how many fixes differ from
// the previously solved node.

#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rampcap/milp/solve.hpp"

namespace rampcap::milp {

namespace {

struct Node {
  double bound = -kInf; // parent LP objective, internal (min) sense
  long id = 0;
  std::vector<std::pair<int, double>> fixes; // (binary var, 0/1)
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

} // namespace

MipSolution solve_milp_on(SimplexContext& ctx, const MipOptions& opt) {
  const Model& model = ctx.model();
  const double sense_mult = model.sense == Sense::Max ? -1.0 : 1.0;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  auto out_of_time = [&] {
    return opt.time_limit_s > 0 && elapsed() > opt.time_limit_s;
  };

  const std::vector<int> binaries = model.binary_variables();

  MipSolution out;
  out.status = MipStatus::Infeasible;

  // A binary pinned to a fractional value by construction can never satisfy
  // integrality, whatever we branch on.
  for (int j : binaries) {
    const double v = ctx.pinned_value(j);
    if (!std::isnan(v) && std::fabs(v - std::round(v)) > kTolInt) return out;
  }

  // Pure LP: one solve.
  if (binaries.empty()) {
    LpOptions lo;
    lo.overrides = opt.overrides;
    LpSolution sol = ctx.solve(lo);
    out.lp_iterations = sol.iterations;
    out.nodes = 1;
    if (sol.status == LpStatus::Unbounded)
      throw std::runtime_error("relaxation unbounded");
    if (sol.status == LpStatus::IterLimit)
      throw std::runtime_error("node LP hit the iteration limit");
    if (sol.status != LpStatus::Optimal) return out;
    out.status = MipStatus::Optimal;
    out.x = sol.x;
    out.objective = sol.objective;
    out.bound = sol.objective;
    return out;
  }

  // Incumbent state, internal (min) sense.
  double best_int = kInf;
  std::vector<double> best_x;

  auto note_incumbent = [&](const LpSolution& sol) {
    const double v = sense_mult * sol.objective;
    if (v >= best_int - 1e-12 * (1.0 + std::fabs(best_int))) return;
    best_int = v;
    best_x = sol.x;
    for (int j : binaries) best_x[j] = std::round(best_x[j]);
  };
  auto cutoff = [&] {
    return best_int - opt.tol_gap * std::max(1.0, std::fabs(best_int));
  };
  auto is_integral = [&](const std::vector<double>& x) {
    for (int j : binaries) {
      const double r = std::round(x[j]);
      if (std::fabs(x[j] - r) > kTolInt) return false;
    }
    return true;
  };

  // Solve one node LP: base overrides plus the node's binary fixes.
  auto solve_node = [&](const std::vector<std::pair<int, double>>& fixes) {
    Overrides ov;
    if (opt.overrides) ov = *opt.overrides;
    for (auto& [j, v] : fixes) {
      ov.lower.push_back({j, v});
      ov.upper.push_back({j, v});
    }
    LpOptions lo;
    lo.overrides = &ov;
    LpSolution sol = ctx.solve(lo);
    out.lp_iterations += sol.iterations;
    if (sol.status == LpStatus::Unbounded)
      throw std::runtime_error("relaxation unbounded");
    if (sol.status == LpStatus::IterLimit)
      throw std::runtime_error("node LP hit the iteration limit");
    return sol;
  };

  // Validate a user-provided starting point by fixing its binaries.
  if (opt.initial_incumbent &&
      (int)opt.initial_incumbent->size() == model.num_variables()) {
    bool usable = true;
    std::vector<std::pair<int, double>> fixes;
    for (int j : binaries) {
      const double v = (*opt.initial_incumbent)[j];
      const double r = std::round(v);
      if (std::fabs(v - r) > kTolInt || (r != 0.0 && r != 1.0)) {
        usable = false;
        break;
      }
      if (std::isnan(ctx.pinned_value(j))) fixes.push_back({j, r});
    }
    if (usable) {
      LpSolution sol = solve_node(fixes);
      ++out.nodes;
      if (sol.status == LpStatus::Optimal && is_integral(sol.x))
        note_incumbent(sol);
    }
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{-kInf, 0, {}});
  long next_id = 1;
  double global_bound = -kInf;
  bool stopped_early = false;
  long since_heuristic = 0;

  while (!open.empty()) {
    if (out_of_time() || out.nodes >= opt.node_limit) {
      stopped_early = true;
      break;
    }
    Node node = open.top();
    // The tightest unexplored bound proves the global one.
    global_bound = std::max(global_bound, std::min(node.bound, best_int));
    if (node.bound >= cutoff()) break; // best-bound order: all the rest prune
    open.pop();

    LpSolution sol = solve_node(node.fixes);
    ++out.nodes;
    if (sol.status != LpStatus::Optimal) continue; // infeasible subtree
    const double node_obj = sense_mult * sol.objective;
    if (node_obj >= cutoff()) continue;

    if (is_integral(sol.x)) {
      note_incumbent(sol);
      continue;
    }

    // Occasionally try rounding the fractional point into an incumbent.
    if (opt.rounding_heuristic && (out.nodes == 1 || ++since_heuristic >= 25)) {
      since_heuristic = 0;
      std::vector<std::pair<int, double>> fixes;
      for (int j : binaries)
        if (std::isnan(ctx.pinned_value(j)))
          fixes.push_back({j, std::round(sol.x[j])});
      LpSolution h = solve_node(fixes);
      if (h.status == LpStatus::Optimal && is_integral(h.x)) note_incumbent(h);
    }

    // Branch on the most fractional binary.
    int q = -1;
    double best_frac = kTolInt;
    for (int j : binaries) {
      const double f = std::min(sol.x[j] - std::floor(sol.x[j]),
                                std::ceil(sol.x[j]) - sol.x[j]);
      if (f > best_frac + 1e-15) {
        best_frac = f;
        q = j;
      }
    }
    if (q < 0) { // fractional noise only; accept as integral
      note_incumbent(sol);
      continue;
    }
    const double preferred = std::round(sol.x[q]);
    for (double v : {preferred, 1.0 - preferred}) {
      Node child;
      child.bound = node_obj;
      child.id = next_id++;
      child.fixes = node.fixes;
      child.fixes.push_back({q, v});
      open.push(std::move(child));
    }
  }

  if (open.empty()) global_bound = best_int;
  else global_bound = std::max(global_bound, std::min(open.top().bound, best_int));

  if (best_x.empty()) {
    out.status = stopped_early ? MipStatus::TimeLimit : MipStatus::Infeasible;
    out.bound = sense_mult * global_bound;
    return out;
  }
  out.status = stopped_early ? MipStatus::TimeLimit : MipStatus::Optimal;
  out.x = std::move(best_x);
  out.objective = sense_mult * best_int;
  out.bound = sense_mult * global_bound;
  return out;
}

MipSolution solve_milp(const Model& model, const MipOptions& options) {
  SimplexContext ctx(model);
  return solve_milp_on(ctx, options);
}

}  // namespace rampcap::milp
