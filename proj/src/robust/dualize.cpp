#include "rampcap/robust/dualize.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rampcap::robust {

using milp::Model;
using milp::Rel;
using milp::Sense;
using milp::Term;

DualModel dualize(const Model& primal) {
  if (primal.sense != Sense::Min)
    throw std::invalid_argument("dualize expects a minimization model");
  if (!primal.binary_variables().empty())
    throw std::invalid_argument("dualize expects a pure LP, found binaries");

  const int m = primal.num_constraints();
  const int n = primal.num_variables();

  DualModel out;
  out.model.sense = Sense::Max;
  out.row_dual.resize(m);
  out.lower_dual.assign(n, -1);
  out.upper_dual.assign(n, -1);

  // Row multipliers: <= rows carry y <= 0, >= rows y >= 0, = rows are free.
  for (int i = 0; i < m; ++i) {
    const auto& c = primal.constraint(i);
    double lo = -milp::kInf, hi = milp::kInf;
    if (c.rel == Rel::Le) hi = 0.0;
    else if (c.rel == Rel::Ge) lo = 0.0;
    out.row_dual[i] = out.model.add_continuous("y_" + c.name, lo, hi, c.rhs);
  }

  // Bound multipliers exist only for finite bounds and pay/earn the bound.
  for (int j = 0; j < n; ++j) {
    const auto& v = primal.variable(j);
    if (std::isfinite(v.lower))
      out.lower_dual[j] =
          out.model.add_continuous("dlo_" + v.name, 0.0, milp::kInf, v.lower);
    if (std::isfinite(v.upper))
      out.upper_dual[j] =
          out.model.add_continuous("dhi_" + v.name, 0.0, milp::kInf, -v.upper);
  }

  // Stationarity per primal column: sum_i a_ij y_i + dlo_j - dhi_j = c_j.
  std::vector<std::vector<Term>> stationarity(n);
  for (int i = 0; i < m; ++i)
    for (const Term& t : primal.constraint(i).terms)
      stationarity[t.var].push_back({out.row_dual[i], t.coef});
  for (int j = 0; j < n; ++j) {
    auto terms = std::move(stationarity[j]);
    if (out.lower_dual[j] >= 0) terms.push_back({out.lower_dual[j], 1.0});
    if (out.upper_dual[j] >= 0) terms.push_back({out.upper_dual[j], -1.0});
    out.model.add_constraint("st_" + primal.variable(j).name, std::move(terms),
                             Rel::Eq, primal.variable(j).objective);
  }
  return out;
}

}  // namespace rampcap::robust
