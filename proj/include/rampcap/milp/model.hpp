#pragma once
// Linear model container shared by the LP and MIP solvers. Models are built
// once and treated as immutable by the solvers; per-node / per-scenario
// changes are expressed through override arrays instead of mutation.

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace rampcap::milp {

// Tolerances used across the solving engine. Fixed, surfaced for callers.
inline constexpr double kTolFeas = 1e-7;   // primal feasibility
inline constexpr double kTolInt = 1e-6;    // binary integrality
inline constexpr double kTolMipGap = 1e-6; // relative MIP gap
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class Rel { Le, Ge, Eq };
enum class Sense { Min, Max };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = -kInf;
  double upper = kInf;
  double objective = 0.0;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  Rel rel = Rel::Le;
  double rhs = 0.0;
  std::vector<Term> terms;
};

class Model {
 public:
  Sense sense = Sense::Min;

  int add_variable(std::string name, VarKind kind, double lower, double upper,
                   double objective);
  int add_continuous(std::string name, double lower, double upper,
                     double objective = 0.0) {
    return add_variable(std::move(name), VarKind::Continuous, lower, upper,
                        objective);
  }
  int add_binary(std::string name, double objective = 0.0) {
    return add_variable(std::move(name), VarKind::Binary, 0.0, 1.0, objective);
  }
  // Terms may mention a variable at most once; zero coefficients are dropped.
  int add_constraint(std::string name, std::vector<Term> terms, Rel rel,
                     double rhs);

  int num_variables() const { return (int)vars_.size(); }
  int num_constraints() const { return (int)rows_.size(); }
  const Variable& variable(int j) const { return vars_[j]; }
  Variable& variable(int j) { return vars_[j]; }
  const Constraint& constraint(int i) const { return rows_[i]; }
  Constraint& constraint(int i) { return rows_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }

  std::vector<int> binary_variables() const;

  // Throws std::invalid_argument when an invariant is broken (NaN
  // coefficient, out-of-range variable reference, binary with non-{0,1}
  // bounds beyond fixing).
  void check_well_formed() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
};

// Writes the model as a deterministic LP-format text file (CPLEX dialect).
void write_lp_format(const Model& model, std::ostream& os);

}  // namespace rampcap::milp
