#pragma once
// LP and MIP solving interfaces. The LP engine is a bounded-variable revised
// simplex (composite phase 1, Dantzig pricing with Bland fallback for
// anti-cycling, dense product-form basis inverse with periodic
// refactorization). The MIP engine is best-bound branch and bound over LP
// relaxations, branching on the most fractional binary.

#include <memory>
#include <vector>

#include "rampcap/milp/model.hpp"

namespace rampcap::milp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };
enum class MipStatus { Optimal, Infeasible, TimeLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterLimit;
  std::vector<double> x;             // per model variable
  double objective = 0.0;            // in the model's sense
  std::vector<double> row_duals;     // per model constraint
  std::vector<double> reduced_costs; // per model variable
  long iterations = 0;
};

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  std::vector<double> x;   // incumbent
  double objective = 0.0;  // incumbent objective
  double bound = 0.0;      // proven bound (<= objective for minimization)
  long nodes = 0;
  long lp_iterations = 0;
};

// Sparse patches applied on top of a model for one solve; indices refer to
// the original model. Patching entities removed by the internal reductions
// (substituted fixed columns, dropped singleton rows) is rejected.
struct Overrides {
  std::vector<std::pair<int, double>> lower;
  std::vector<std::pair<int, double>> upper;
  std::vector<std::pair<int, double>> objective;
  std::vector<std::pair<int, double>> rhs;
  bool empty() const {
    return lower.empty() && upper.empty() && objective.empty() && rhs.empty();
  }
};

// Opaque warm-start state (per-column simplex statuses).
struct Basis {
  std::vector<unsigned char> status;
  bool valid() const { return !status.empty(); }
};

struct LpOptions {
  long max_iterations = 2'000'000;
  const Overrides* overrides = nullptr;
  Basis* warm_basis = nullptr; // in/out when non-null
};

struct MipOptions {
  double time_limit_s = -1.0; // <= 0: no limit
  double tol_gap = kTolMipGap; // relative
  // Optional feasible starting point (full-length x). Checked before use.
  const std::vector<double>* initial_incumbent = nullptr;
  bool rounding_heuristic = true;
  long node_limit = 200'000'000;
  const Overrides* overrides = nullptr; // applied to every node
};

// Reusable solving state for one model: builds the sparse matrix and the
// reduction record once, then serves many override/warm-start solves.
// Not safe for concurrent use; create one context per thread.
class SimplexContext {
 public:
  explicit SimplexContext(const Model& model);
  ~SimplexContext();
  SimplexContext(SimplexContext&&) noexcept;
  SimplexContext& operator=(SimplexContext&&) noexcept;

  LpSolution solve(const LpOptions& options = {});
  const Model& model() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  // NaN when the variable is still free to move after reduction, otherwise
  // the value the reductions pinned it to.
  double pinned_value(int var) const;
  friend MipSolution solve_milp_on(SimplexContext&, const MipOptions&);
};

LpSolution solve_lp(const Model& model, const LpOptions& options = {});

MipSolution solve_milp(const Model& model, const MipOptions& options = {});
// Variant reusing an existing context (e.g., repeated masters).
MipSolution solve_milp_on(SimplexContext& context, const MipOptions& options);

// Returns a copy of the model with every binary variable turned continuous
// and fixed to its assigned value. The assignment must cover all binaries.
Model fix_binaries(const Model& model,
                   const std::vector<std::pair<int, double>>& assignment);

}  // namespace rampcap::milp
