#include "rampcap/milp/reduce.hpp"

#include <cmath>
#include <sstream>

namespace rampcap::milp {

namespace {
constexpr double kCoefEps = 1e-11; // below this a coefficient is "absent"
}

double ReducedLp::effective_lower(int j) const {
  return std::max(reduced.variable(j).lower, implied_lower[j]);
}
double ReducedLp::effective_upper(int j) const {
  return std::min(reduced.variable(j).upper, implied_upper[j]);
}

ReducedLp reduce_model(const Model& model) {
  const int n = model.num_variables();
  const int m = model.num_constraints();

  ReducedLp out;
  out.col_map.assign(n, 0);
  out.row_map.assign(m, 0);
  out.fixed_value.assign(n, std::numeric_limits<double>::quiet_NaN());

  // Working bound state per original column.
  std::vector<double> imp_lo(n, -kInf), imp_hi(n, kInf);
  std::vector<char> fixed(n, 0);      // substituted
  std::vector<char> saw_eq_fix(n, 0); // an equality singleton targeted it
  std::vector<char> row_dropped(m, 0);
  std::vector<double> row_rhs(m);
  std::vector<int> live_terms(m, 0);
  for (int i = 0; i < m; ++i) {
    row_rhs[i] = model.constraint(i).rhs;
    live_terms[i] = (int)model.constraint(i).terms.size();
  }

  auto note_infeasible = [&](const std::string& why) {
    if (!out.proven_infeasible) {
      out.proven_infeasible = true;
      out.diagnostic = why;
    }
  };

  // Applies one singleton row to its column's implied bounds.
  auto absorb_singleton = [&](int i, int j, double a) {
    const Rel rel = model.constraint(i).rel;
    const double b = row_rhs[i];
    DroppedRow rec;
    rec.row = i;
    rec.col = j;
    rec.coef = a;
    rec.rel = rel;
    rec.rhs = b;
    const double v = b / a;
    bool lo = false, hi = false;
    if (rel == Rel::Eq) {
      lo = hi = true;
    } else if ((rel == Rel::Le) == (a > 0)) {
      hi = true; // a*x <= b with a>0, or a*x >= b with a<0
    } else {
      lo = true;
    }
    if (lo) imp_lo[j] = std::max(imp_lo[j], v);
    if (hi) imp_hi[j] = std::min(imp_hi[j], v);
    if (rel == Rel::Eq) {
      rec.equality_fix = true;
      saw_eq_fix[j] = 1;
    }
    out.dropped.push_back(rec);
    row_dropped[i] = 1;
  };

  auto drop_constant_row = [&](int i, double activity) {
    const Rel rel = model.constraint(i).rel;
    const double b = row_rhs[i];
    DroppedRow rec;
    rec.row = i;
    rec.col = -1;
    rec.rel = rel;
    rec.rhs = b;
    rec.activity = activity;
    const double tol = kTolFeas * (1.0 + std::fabs(b));
    bool ok = true;
    if (rel == Rel::Le) ok = activity <= b + tol;
    else if (rel == Rel::Ge) ok = activity >= b - tol;
    else ok = std::fabs(activity - b) <= tol;
    if (!ok) {
      std::ostringstream os;
      os << "constant row infeasible: " << model.constraint(i).name
         << " activity " << activity;
      note_infeasible(os.str());
    }
    out.dropped.push_back(rec);
    row_dropped[i] = 1;
  };

  // Pass A: structural singletons / empty rows.
  for (int i = 0; i < m; ++i) {
    const auto& c = model.constraint(i);
    if (c.terms.empty()) {
      drop_constant_row(i, 0.0);
    } else if (c.terms.size() == 1) {
      const Term& t = c.terms[0];
      if (std::fabs(t.coef) < kCoefEps)
        drop_constant_row(i, 0.0);
      else
        absorb_singleton(i, t.var, t.coef);
    }
  }

  // Determine columns fixed by structure: own collapsed bounds or an
  // equality singleton. Cross-check implied intervals for contradictions.
  for (int j = 0; j < n; ++j) {
    const auto& v = model.variable(j);
    const double lo = std::max(v.lower, imp_lo[j]);
    const double hi = std::min(v.upper, imp_hi[j]);
    if (lo > hi + 1e-9 * (1.0 + std::fabs(lo))) {
      note_infeasible("contradictory bounds on variable " + v.name);
    }
    if (v.lower == v.upper || saw_eq_fix[j]) {
      fixed[j] = 1;
      // Midpoint guards against equality rows slightly off the own bounds;
      // when the interval is consistent lo == hi anyway.
      out.fixed_value[j] = 0.5 * (lo + hi);
      out.objective_offset += v.objective * out.fixed_value[j];
    }
  }

  // Pass B: substitute fixed columns into remaining rows.
  std::vector<std::vector<Term>> kept_terms(m);
  for (int i = 0; i < m; ++i) {
    if (row_dropped[i]) continue;
    const auto& c = model.constraint(i);
    auto& terms = kept_terms[i];
    terms.reserve(c.terms.size());
    for (const Term& t : c.terms) {
      if (fixed[t.var]) {
        row_rhs[i] -= t.coef * out.fixed_value[t.var];
      } else {
        terms.push_back(t);
      }
    }
  }

  // Pass C: rows that became constant or singleton after substitution.
  for (int i = 0; i < m; ++i) {
    if (row_dropped[i]) continue;
    if (kept_terms[i].empty()) {
      drop_constant_row(i, 0.0);
    } else if (kept_terms[i].size() == 1) {
      const Term& t = kept_terms[i][0];
      if (std::fabs(t.coef) < kCoefEps)
        drop_constant_row(i, 0.0);
      else
        absorb_singleton(i, t.var, t.coef);
    }
  }

  // Re-check live columns against bounds implied in pass C.
  for (int j = 0; j < n; ++j) {
    if (fixed[j]) continue;
    const auto& v = model.variable(j);
    const double lo = std::max(v.lower, imp_lo[j]);
    const double hi = std::min(v.upper, imp_hi[j]);
    if (lo > hi + 1e-9 * (1.0 + std::fabs(lo)))
      note_infeasible("contradictory bounds on variable " + v.name);
  }

  // Assemble the reduced model.
  out.reduced.sense = model.sense;
  for (int j = 0; j < n; ++j) {
    if (fixed[j]) {
      out.col_map[j] = -1;
      continue;
    }
    const auto& v = model.variable(j);
    out.col_map[j] = (int)out.live_cols.size();
    out.live_cols.push_back(j);
    out.reduced.add_variable(v.name, v.kind, v.lower, v.upper, v.objective);
    out.implied_lower.push_back(imp_lo[j]);
    out.implied_upper.push_back(imp_hi[j]);
  }
  for (int i = 0; i < m; ++i) {
    if (row_dropped[i]) {
      out.row_map[i] = -1;
      continue;
    }
    std::vector<Term> terms;
    terms.reserve(kept_terms[i].size());
    for (const Term& t : kept_terms[i])
      terms.push_back({out.col_map[t.var], t.coef});
    out.row_map[i] = (int)out.kept_rows.size();
    out.kept_rows.push_back(i);
    out.reduced.add_constraint(model.constraint(i).name, std::move(terms),
                               model.constraint(i).rel, row_rhs[i]);
  }
  return out;
}

}  // namespace rampcap::milp
