#pragma once
// Bound-based model reduction used by the simplex engine and by the
// dualization path of the robust module:
//   pass A: singleton rows are converted to variable bounds and dropped;
//   pass B: columns whose bounds have collapsed are substituted into the
//           remaining rows and the objective;
//   pass C: rows that became singletons through substitution are converted
//           to bounds as well. No further substitution afterwards, so the
//           reduced shape depends only on the original structure, never on
//           numeric values — models differing only in data reduce to the
//           same shape (this keeps warm starts valid across re-solves).
//
// Duals of dropped rows are reconstructed from reduced costs after a solve
// (see attribution rules in reduce.cpp), so callers always see multipliers
// for every original row.

#include <string>
#include <vector>

#include "rampcap/milp/model.hpp"

namespace rampcap::milp {

struct DroppedRow {
  int row = -1;      // original row id
  int col = -1;      // original column id; -1 for empty rows
  double coef = 0.0; // coefficient on that column (post-substitution)
  Rel rel = Rel::Le;
  double rhs = 0.0;       // post-substitution rhs
  double activity = 0.0;  // constant activity, for empty rows
  bool equality_fix = false; // equality singleton that fixed its column
};

struct ReducedLp {
  Model reduced; // live columns and kept rows, original own bounds

  std::vector<int> col_map;  // orig col -> reduced col, -1 if substituted
  std::vector<int> row_map;  // orig row -> reduced row, -1 if dropped
  std::vector<int> live_cols; // reduced col -> orig col
  std::vector<int> kept_rows; // reduced row -> orig row
  std::vector<double> fixed_value; // per orig col; meaningful when col_map=-1

  // Bounds implied by dropped singleton rows, per reduced column. The
  // effective domain of a live column is the intersection with its own
  // (possibly overridden) bounds.
  std::vector<double> implied_lower;
  std::vector<double> implied_upper;

  std::vector<DroppedRow> dropped; // ascending original row order

  double objective_offset = 0.0; // from substituted columns
  bool proven_infeasible = false;
  std::string diagnostic;

  double effective_lower(int reduced_col) const;
  double effective_upper(int reduced_col) const;
};

ReducedLp reduce_model(const Model& model);

}  // namespace rampcap::milp
