#pragma once
// Exact LP dual construction. For a minimization LP with bounded variables,
// produces the maximization dual with one dual column per primal row and one
// per finite variable bound, plus index maps back to the primal entities.
// The dual's constraints are the primal columns' stationarity conditions,
// emitted in primal column order (dual constraint i == primal column i).

#include <vector>

#include "rampcap/milp/model.hpp"

namespace rampcap::robust {

struct DualModel {
  milp::Model model;           // maximization
  std::vector<int> row_dual;   // primal row index -> dual column
  std::vector<int> lower_dual; // primal column -> dual column, -1 when the
  std::vector<int> upper_dual; //   bound is infinite (no multiplier exists)
};

// Throws std::invalid_argument if the model is not a pure minimization LP.
// For any feasible bounded primal, the dual optimum equals the primal
// optimum; an unbounded primal yields an infeasible dual.
DualModel dualize(const milp::Model& primal);

}  // namespace rampcap::robust
