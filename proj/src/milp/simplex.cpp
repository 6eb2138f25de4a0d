// Bounded-variable revised simplex over a reduced model.
//
// Internal layout: columns 0..nR-1 are the live structural variables of the
// reduction, columns nR..nR+mR-1 are logical slacks, one per kept row, so
// every row reads  a'x + s_i = b_i  with the slack bounded by the relation
// (<=: s in [0,inf), >=: s in (-inf,0], =: s fixed at 0).
//
// The basis inverse is held densely and updated by product-form rank-1
// operations on pivots; it is rebuilt from scratch on numerical alarms or
// after a fixed pivot budget. Phase 1 minimizes the sum of bound violations
// of basic variables (composite objective, no artificial columns), which
// keeps warm starts cheap: a re-solve after a handful of bound changes costs
// a few pivots instead of a fresh factorization.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rampcap/milp/reduce.hpp"
#include "rampcap/milp/solve.hpp"

namespace rampcap::milp {

namespace {

constexpr double kTolDj = 1e-9;     // reduced-cost optimality threshold
constexpr double kTolPivot = 1e-7;  // preferred minimum pivot magnitude
constexpr int kStallLimit = 160;    // iterations without progress -> Bland

enum Status : unsigned char { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };

}  // namespace

struct SimplexContext::Impl {
  Model original;
  ReducedLp red;

  int nR = 0; // live structural columns
  int mR = 0; // kept rows
  int N = 0;  // nR + mR

  // CSC of the reduced structural columns.
  std::vector<int> col_ptr, row_idx;
  std::vector<double> val;
  // CSC of the full original matrix (dual reconstruction).
  std::vector<int> orig_ptr, orig_row;
  std::vector<double> orig_val;

  double sense_mult = 1.0; // +1 min, -1 max

  // Effective per-solve arrays, sized N (structurals then logicals).
  std::vector<double> lo, hi, cost;
  std::vector<double> own_lo, own_hi; // structural bounds before implied folding
  std::vector<double> b;      // effective rhs
  std::vector<double> x;      // current point
  std::vector<unsigned char> stat;
  std::vector<int> basic;     // row -> column
  std::vector<double> binv;   // mR x mR, row-major
  bool basis_ready = false;   // binv matches `stat`
  long pivots_since_refactor = 0;

  // Scratch
  std::vector<double> y, dj, alpha, work;

  explicit Impl(const Model& m) : original(m) {
    original.check_well_formed();
    red = reduce_model(original);
    nR = red.reduced.num_variables();
    mR = red.reduced.num_constraints();
    N = nR + mR;
    sense_mult = original.sense == Sense::Max ? -1.0 : 1.0;

    col_ptr.assign(nR + 1, 0);
    std::vector<std::vector<std::pair<int, double>>> cols(nR);
    for (int i = 0; i < mR; ++i)
      for (const Term& t : red.reduced.constraint(i).terms)
        cols[t.var].push_back({i, t.coef});
    for (int j = 0; j < nR; ++j) {
      col_ptr[j + 1] = col_ptr[j] + (int)cols[j].size();
      for (auto& [r, v] : cols[j]) {
        row_idx.push_back(r);
        val.push_back(v);
      }
    }

    // Full original matrix by column (dual reconstruction).
    std::vector<std::vector<std::pair<int, double>>> ocols(
        original.num_variables());
    for (int i = 0; i < original.num_constraints(); ++i)
      for (const Term& t : original.constraint(i).terms)
        ocols[t.var].push_back({i, t.coef});
    orig_ptr.assign(original.num_variables() + 1, 0);
    for (int j = 0; j < original.num_variables(); ++j) {
      orig_ptr[j + 1] = orig_ptr[j] + (int)ocols[j].size();
      for (auto& [r, v] : ocols[j]) {
        orig_row.push_back(r);
        orig_val.push_back(v);
      }
    }

    lo.resize(N);
    hi.resize(N);
    cost.resize(N);
    own_lo.resize(nR);
    own_hi.resize(nR);
    b.resize(mR);
    x.resize(N);
    stat.assign(N, kAtLower);
    basic.resize(mR);
    binv.assign((size_t)mR * mR, 0.0);
    y.resize(mR);
    dj.resize(N);
    alpha.resize(mR);
    work.resize(std::max(N, mR));
  }

  // ---- per-solve setup -------------------------------------------------

  // Returns false when override targets are invalid (throws) or bounds cross.
  bool materialize(const Overrides* ov, std::string* why) {
    for (int j = 0; j < nR; ++j) {
      const auto& v = red.reduced.variable(j);
      lo[j] = v.lower;
      hi[j] = v.upper;
      cost[j] = sense_mult * v.objective;
    }
    for (int i = 0; i < mR; ++i) {
      const auto& c = red.reduced.constraint(i);
      b[i] = c.rhs;
      const int s = nR + i;
      cost[s] = 0.0;
      switch (c.rel) {
        case Rel::Le: lo[s] = 0.0; hi[s] = kInf; break;
        case Rel::Ge: lo[s] = -kInf; hi[s] = 0.0; break;
        case Rel::Eq: lo[s] = 0.0; hi[s] = 0.0; break;
      }
    }
    if (ov) {
      auto live = [&](int oj) {
        if (oj < 0 || oj >= (int)red.col_map.size())
          throw std::invalid_argument("override: bad variable id");
        const int j = red.col_map[oj];
        if (j < 0)
          throw std::invalid_argument(
              "override targets a variable eliminated by reduction: " +
              original.variable(oj).name);
        return j;
      };
      for (auto& [oj, v] : ov->lower) lo[live(oj)] = v;
      for (auto& [oj, v] : ov->upper) hi[live(oj)] = v;
      for (auto& [oj, v] : ov->objective) cost[live(oj)] = sense_mult * v;
      for (auto& [oi, v] : ov->rhs) {
        if (oi < 0 || oi >= (int)red.row_map.size())
          throw std::invalid_argument("override: bad row id");
        const int i = red.row_map[oi];
        if (i < 0)
          throw std::invalid_argument(
              "override targets a row eliminated by reduction: " +
              original.constraint(oi).name);
        b[i] = v;
      }
    }
    // Fold in bounds implied by dropped singleton rows.
    for (int j = 0; j < nR; ++j) {
      own_lo[j] = lo[j];
      own_hi[j] = hi[j];
      lo[j] = std::max(lo[j], red.implied_lower[j]);
      hi[j] = std::min(hi[j], red.implied_upper[j]);
      if (lo[j] > hi[j] + 1e-9 * (1.0 + std::fabs(lo[j]))) {
        if (why) *why = "crossed bounds on " + red.reduced.variable(j).name;
        return false;
      }
      if (lo[j] > hi[j]) hi[j] = lo[j]; // snap hairline crossings
    }
    return true;
  }

  void normalize_statuses() {
    int basics = 0;
    for (int j = 0; j < N; ++j) {
      if (stat[j] == kBasic) {
        ++basics;
        continue;
      }
      if (lo[j] == hi[j]) stat[j] = kAtLower;
      else if (stat[j] == kAtUpper && std::isfinite(hi[j])) stat[j] = kAtUpper;
      else if (std::isfinite(lo[j])) stat[j] = kAtLower;
      else if (std::isfinite(hi[j])) stat[j] = kAtUpper;
      else stat[j] = kFreeZero;
    }
    if (basics != mR) { // unusable pattern: reset to the all-logical basis
      for (int j = 0; j < nR; ++j)
        stat[j] = lo[j] == hi[j]          ? kAtLower
                  : std::isfinite(lo[j])  ? kAtLower
                  : std::isfinite(hi[j])  ? kAtUpper
                                          : kFreeZero;
      for (int i = 0; i < mR; ++i) stat[nR + i] = kBasic;
      basis_ready = false;
    }
  }

  // Column j of the full matrix (structural sparse or logical unit).
  template <class F>
  void for_col(int j, F&& f) const {
    if (j < nR) {
      for (int k = col_ptr[j]; k < col_ptr[j + 1]; ++k) f(row_idx[k], val[k]);
    } else {
      f(j - nR, 1.0);
    }
  }

  // Rebuilds binv from `stat`. Basic logicals keep their own rows — moving
  // one to a bound would silently change the solution point — so structural
  // basics are matched to the remaining rows only. A structural with no
  // usable pivot there is genuinely dependent on the placed columns and the
  // reserved logicals; after one retry pass (greedy order can starve a
  // placeable column) it is demoted to its nearest bound. Rows left without
  // a structural keep their logical basic, repairing rank-deficient
  // patterns. Deterministic.
  void refactorize() {
    for (int i = 0; i < mR; ++i) basic[i] = nR + i;
    std::fill(binv.begin(), binv.end(), 0.0);
    for (int i = 0; i < mR; ++i) binv[(size_t)i * mR + i] = 1.0;

    std::vector<char> open(mR, 1);
    for (int i = 0; i < mR; ++i)
      if (stat[nR + i] == kBasic) open[i] = 0; // reserved by its logical

    auto place = [&](int j) {
      ftran(j);
      int r = -1;
      double best = 1e-10;
      for (int i = 0; i < mR; ++i) {
        if (!open[i]) continue;
        const double mag = std::fabs(alpha[i]);
        if (mag > best + 1e-15) {
          best = mag;
          r = i;
        }
      }
      if (r < 0) return false;
      open[r] = 0;
      pivot_binv(r);
      basic[r] = j;
      return true;
    };

    std::vector<int> retry;
    for (int j = 0; j < nR; ++j)
      if (stat[j] == kBasic && !place(j)) retry.push_back(j);
    for (int j : retry) {
      if (place(j)) continue;
      stat[j] = lo[j] == hi[j] ? kAtLower
                : (std::isfinite(lo[j]) &&
                   (!std::isfinite(hi[j]) || x[j] - lo[j] <= hi[j] - x[j]))
                    ? kAtLower
                : std::isfinite(hi[j]) ? kAtUpper
                                       : kFreeZero;
    }
    for (int i = 0; i < mR; ++i)
      if (open[i]) stat[nR + i] = kBasic; // basic[i] is already nR + i
    pivots_since_refactor = 0;
    basis_ready = true;
  }

  // alpha = binv * A_j
  void ftran(int j) {
    if (j >= nR) { // logical: column of binv
      const int r = j - nR;
      for (int i = 0; i < mR; ++i) alpha[i] = binv[(size_t)i * mR + r];
      return;
    }
    const int beg = col_ptr[j], end = col_ptr[j + 1];
    for (int i = 0; i < mR; ++i) {
      const double* row = &binv[(size_t)i * mR];
      double acc = 0.0;
      for (int k = beg; k < end; ++k) acc += row[row_idx[k]] * val[k];
      alpha[i] = acc;
    }
  }

  // Rank-1 update of binv for entering column whose ftran is in `alpha`,
  // pivot row r.
  void pivot_binv(int r) {
    const double piv = alpha[r];
    double* rowr = &binv[(size_t)r * mR];
    const double inv = 1.0 / piv;
    for (int k = 0; k < mR; ++k) rowr[k] *= inv;
    for (int i = 0; i < mR; ++i) {
      if (i == r) continue;
      const double f = alpha[i];
      if (f == 0.0) continue;
      double* rowi = &binv[(size_t)i * mR];
      for (int k = 0; k < mR; ++k) rowi[k] -= f * rowr[k];
    }
    ++pivots_since_refactor;
  }

  double nonbasic_value(int j) const {
    switch (stat[j]) {
      case kAtLower: return lo[j];
      case kAtUpper: return hi[j];
      default: return 0.0;
    }
  }

  // x_B = binv (b - N x_N); also refreshes nonbasic x entries.
  void compute_x() {
    for (int j = 0; j < N; ++j)
      if (stat[j] != kBasic) x[j] = nonbasic_value(j);
    std::fill(work.begin(), work.begin() + mR, 0.0);
    for (int j = 0; j < N; ++j) {
      if (stat[j] == kBasic || x[j] == 0.0) continue;
      const double v = x[j];
      for_col(j, [&](int r, double a) { work[r] += a * v; });
    }
    for (int i = 0; i < mR; ++i) work[i] = b[i] - work[i];
    for (int i = 0; i < mR; ++i) {
      const double* row = &binv[(size_t)i * mR];
      double acc = 0.0;
      for (int k = 0; k < mR; ++k) acc += row[k] * work[k];
      x[basic[i]] = acc;
    }
  }

  double residual_inf() {
    std::fill(work.begin(), work.begin() + mR, 0.0);
    for (int j = 0; j < N; ++j) {
      if (x[j] == 0.0) continue;
      const double v = x[j];
      for_col(j, [&](int r, double a) { work[r] += a * v; });
    }
    double worst = 0.0;
    for (int i = 0; i < mR; ++i)
      worst = std::max(worst, std::fabs(work[i] - b[i]));
    return worst;
  }

  // y = c_B binv for the given basic cost vector.
  void btran(const double* cb) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < mR; ++i) {
      const double f = cb[i];
      if (f == 0.0) continue;
      const double* row = &binv[(size_t)i * mR];
      for (int k = 0; k < mR; ++k) y[k] += f * row[k];
    }
  }

  double price(int j) const { // c_j - y' A_j
    double acc = cost[j];
    if (j < nR) {
      for (int k = col_ptr[j]; k < col_ptr[j + 1]; ++k)
        acc -= y[row_idx[k]] * val[k];
    } else {
      acc -= y[j - nR];
    }
    return acc;
  }

  struct Ratio {
    double theta = kInf;
    int blocker = -1;   // basis row of the blocking variable, -1: entering bound
    int to_upper = 0;   // leaving variable lands on its upper bound
  };

  // Distance the basic variable of row i may travel before it blocks, given
  // its rate of change per unit step. In phase 1 a variable beyond its
  // bounds blocks at the bound it is violating (first breakpoint); anything
  // else blocks at the bound it is moving toward. Returns false when the
  // movement never blocks. A variable already at (or marginally beyond) the
  // blocking bound reports distance zero: a degenerate block.
  bool blocking(int i, double rate, bool phase1, double& dist,
                int& to_upper) const {
    const int j = basic[i];
    if (phase1 && x[j] < lo[j] - kTolFeas) {
      if (rate <= 0) return false;
      dist = lo[j] - x[j];
      to_upper = 0;
    } else if (phase1 && x[j] > hi[j] + kTolFeas) {
      if (rate >= 0) return false;
      dist = x[j] - hi[j];
      to_upper = 1;
    } else if (rate > 0) {
      if (!std::isfinite(hi[j])) return false;
      dist = hi[j] - x[j];
      to_upper = 1;
    } else {
      if (!std::isfinite(lo[j])) return false;
      dist = x[j] - lo[j];
      to_upper = 0;
    }
    if (dist < 0) dist = 0;
    return true;
  }

  // Two-pass ratio test. Pass 1 finds the longest step that lets every
  // blocking candidate past its bound by at most half the feasibility band;
  // pass 2 takes the best-conditioned pivot among the candidates that fit
  // under that step, so a hairline pivot is never chosen while a sound one
  // blocks within tolerance. Under `bland`, an exact first-breakpoint rule
  // with lowest-index tie-breaks replaces both passes: escaping a
  // degenerate cycle needs determinism, not conditioning.
  Ratio ratio_test(int q, double sigma, bool phase1, bool bland) const {
    Ratio out;
    if (bland) {
      for (int i = 0; i < mR; ++i) {
        const double a = alpha[i];
        if (std::fabs(a) < 1e-11) continue;
        double dist;
        int up;
        if (!blocking(i, -sigma * a, phase1, dist, up)) continue;
        const double cap = dist / std::fabs(a);
        if (cap < out.theta - 1e-12 ||
            (cap < out.theta + 1e-12 && out.blocker >= 0 &&
             basic[i] < basic[out.blocker])) {
          out.theta = cap;
          out.blocker = i;
          out.to_upper = up;
        }
      }
    } else {
      constexpr double kExpand = 0.5 * kTolFeas;
      double theta_rel = kInf;
      for (int i = 0; i < mR; ++i) {
        const double a = alpha[i];
        const double mag = std::fabs(a);
        if (mag < 1e-11) continue;
        double dist;
        int up;
        if (!blocking(i, -sigma * a, phase1, dist, up)) continue;
        const double rel = (dist + kExpand) / mag;
        if (rel < theta_rel) theta_rel = rel;
      }
      if (std::isfinite(theta_rel)) {
        double best_mag = 0.0;
        for (int i = 0; i < mR; ++i) {
          const double a = alpha[i];
          const double mag = std::fabs(a);
          if (mag < 1e-11) continue;
          double dist;
          int up;
          if (!blocking(i, -sigma * a, phase1, dist, up)) continue;
          const double cap = dist / mag;
          if (cap > theta_rel) continue;
          if (mag > best_mag * (1.0 + 1e-12) ||
              (mag > best_mag * (1.0 - 1e-12) && out.blocker >= 0 &&
               basic[i] < basic[out.blocker])) {
            best_mag = std::max(mag, best_mag);
            out.theta = cap;
            out.blocker = i;
            out.to_upper = up;
          }
        }
      }
    }
    const double span = hi[q] - lo[q];
    if (std::isfinite(span) && span < out.theta) {
      out.theta = span;
      out.blocker = -1;
    }
    return out;
  }

  void apply_step(int q, double sigma, const Ratio& r) {
    const double theta = r.theta;
    if (theta != 0.0) {
      for (int i = 0; i < mR; ++i)
        if (alpha[i] != 0.0) x[basic[i]] -= sigma * theta * alpha[i];
      x[q] += sigma * theta;
    }
    if (r.blocker < 0) { // bound flip, no basis change
      stat[q] = sigma > 0 ? kAtUpper : kAtLower;
      x[q] = sigma > 0 ? hi[q] : lo[q];
      return;
    }
    const int leave = basic[r.blocker];
    stat[leave] = r.to_upper ? kAtUpper : kAtLower;
    if (lo[leave] == hi[leave]) stat[leave] = kAtLower;
    x[leave] = r.to_upper ? hi[leave] : lo[leave];
    pivot_binv(r.blocker);
    basic[r.blocker] = q;
    stat[q] = kBasic;
  }

  double max_violation() const {
    double v = 0.0;
    for (int i = 0; i < mR; ++i) {
      const int j = basic[i];
      if (x[j] < lo[j]) v = std::max(v, lo[j] - x[j]);
      else if (x[j] > hi[j]) v = std::max(v, x[j] - hi[j]);
    }
    return v;
  }

  // Shared pivoting loop. phase1 uses the composite violation objective.
  // Returns: 0 ok (phase goal reached), 1 infeasible, 2 unbounded, 3 iter cap.
  int pivot_loop(bool phase1, long max_iter, long& iters) {
    int stall = 0;
    double best_goal = kInf;
    bool bland = false;
    while (true) {
      if (phase1 && max_violation() <= kTolFeas) return 0;
      if (iters >= max_iter) return 3;
      ++iters;

      // Periodic hygiene: refresh x from the factorization, refactor on alarm.
      if ((iters & 63) == 0) {
        if (residual_inf() > 1e-7 * (1.0 + std::fabs(b.empty() ? 0.0 : b[0]))) {
          refactorize();
          compute_x();
        } else if (pivots_since_refactor >= std::max(600, mR)) {
          refactorize();
          compute_x();
        }
      }

      // Pricing objective.
      if (phase1) {
        for (int i = 0; i < mR; ++i) {
          const int j = basic[i];
          work[i] = x[j] < lo[j] - kTolFeas   ? -1.0
                    : x[j] > hi[j] + kTolFeas ? 1.0
                                              : 0.0;
        }
        btran(work.data());
      } else {
        for (int i = 0; i < mR; ++i) work[i] = cost[basic[i]];
        btran(work.data());
      }

      // Entering choice.
      int q = -1;
      double qscore = 0.0;
      double qsigma = 1.0;
      for (int j = 0; j < N; ++j) {
        if (stat[j] == kBasic || lo[j] == hi[j]) continue;
        const double base_cost = phase1 ? 0.0 : cost[j];
        double d = base_cost;
        if (j < nR) {
          for (int k = col_ptr[j]; k < col_ptr[j + 1]; ++k)
            d -= y[row_idx[k]] * val[k];
        } else {
          d -= y[j - nR];
        }
        double sigma;
        if (stat[j] == kAtLower) {
          if (d >= -kTolDj) continue;
          sigma = 1.0;
        } else if (stat[j] == kAtUpper) {
          if (d <= kTolDj) continue;
          sigma = -1.0;
        } else { // free at zero
          if (std::fabs(d) <= kTolDj) continue;
          sigma = d < 0 ? 1.0 : -1.0;
        }
        if (bland) {
          q = j;
          qsigma = sigma;
          break;
        }
        const double score = std::fabs(d);
        if (score > qscore + 1e-15) {
          qscore = score;
          q = j;
          qsigma = sigma;
        }
      }
      if (q < 0) {
        if (phase1) {
          // Phase-1 optimum with residual violation: declare infeasible
          // unless the leftover is within noise of the feasibility band.
          return max_violation() <= 2.0 * kTolFeas ? 0 : 1;
        }
        return 0; // optimal
      }

      ftran(q);
      const Ratio r = ratio_test(q, qsigma, phase1, bland);
      if (!std::isfinite(r.theta)) {
        // Unblocked ray. On a drifted factorization this can be noise:
        // rebuild and re-price the whole iteration. On a fresh one it is
        // the real thing (phase 2) or a numerical dead end (phase 1 cannot
        // have true rays: total violation is bounded below).
        if (pivots_since_refactor > 0) {
          refactorize();
          compute_x();
          continue;
        }
        return phase1 ? 1 : 2;
      }
      // Reject hairline pivots when possible: refactor and re-price.
      if (r.blocker >= 0 && std::fabs(alpha[r.blocker]) < kTolPivot &&
          pivots_since_refactor > 0) {
        refactorize();
        compute_x();
        continue;
      }
      apply_step(q, qsigma, r);

      // Stall bookkeeping against the best goal value seen this phase:
      // comparing only against the previous iteration lets a two-point
      // oscillation look like alternating progress and starve the
      // anti-cycling rule.
      double goal = 0.0;
      if (phase1) {
        for (int i = 0; i < mR; ++i) {
          const int j = basic[i];
          if (x[j] < lo[j]) goal += lo[j] - x[j];
          else if (x[j] > hi[j]) goal += x[j] - hi[j];
        }
      } else {
        for (int j = 0; j < N; ++j) goal += cost[j] * x[j];
      }
      if (goal < best_goal - 1e-11 * (1.0 + std::fabs(best_goal))) {
        best_goal = goal;
        stall = 0;
        bland = false;
      } else if (++stall > kStallLimit) {
        bland = true;
      }
    }
  }

  // ---- solution extraction --------------------------------------------

  LpSolution extract(LpStatus status, long iters) {
    LpSolution sol;
    sol.status = status;
    sol.iterations = iters;
    const int n0 = original.num_variables();
    const int m0 = original.num_constraints();
    sol.x.assign(n0, 0.0);
    sol.row_duals.assign(m0, 0.0);
    sol.reduced_costs.assign(n0, 0.0);
    for (int oj = 0; oj < n0; ++oj) {
      const int j = red.col_map[oj];
      sol.x[oj] = j >= 0 ? x[j] : red.fixed_value[oj];
    }
    double obj = 0.0;
    for (int oj = 0; oj < n0; ++oj)
      obj += objective_coef(oj) * sol.x[oj];
    sol.objective = obj;
    if (status != LpStatus::Optimal) return sol;

    // Duals of kept rows (internal min sense first).
    for (int i = 0; i < mR; ++i) work[i] = cost[basic[i]];
    btran(work.data());
    std::vector<double> y_int(m0, 0.0);
    for (int i = 0; i < mR; ++i) y_int[red.kept_rows[i]] = y[i];

    // Residual reduced cost of an original column against the duals
    // accumulated in y_int so far (full original matrix).
    auto residual = [&](int oj) {
      double d = sense_mult * objective_coef(oj);
      for (int k = orig_ptr[oj]; k < orig_ptr[oj + 1]; ++k)
        d -= y_int[orig_row[k]] * orig_val[k];
      return d;
    };

    // Attribute residuals to dropped rows. Every dropped row saw exactly one
    // still-live column when it was absorbed, so live columns are settled
    // first and independently; substituted columns then see those duals in
    // their own residuals and hand the remainder to their equality fixer.
    std::vector<std::vector<int>> by_col(n0);
    for (int k = 0; k < (int)red.dropped.size(); ++k)
      if (red.dropped[k].col >= 0) by_col[red.dropped[k].col].push_back(k);
    for (int oj = 0; oj < n0; ++oj) {
      const int j = red.col_map[oj];
      if (j < 0 || by_col[oj].empty()) continue;
      const double d = residual(oj);
      if (std::fabs(d) <= 1e-10) continue;
      bool lower_side;
      if (lo[j] == hi[j]) lower_side = d > 0; // both bounds active: sign decides
      else if (stat[j] == kAtLower) lower_side = true;
      else if (stat[j] == kAtUpper) lower_side = false;
      else continue;                      // basic/free: residual is ~0
      // If the column's own bound is as tight as the folded one, it carries
      // the residual itself and the dropped rows stay slack.
      if (lower_side ? own_lo[j] >= lo[j] : own_hi[j] <= hi[j]) continue;
      const double eff = lower_side ? lo[j] : hi[j];
      int chosen = -1;
      for (int k : by_col[oj]) {
        const auto& dr = red.dropped[k];
        const double v = dr.rhs / dr.coef;
        if (std::fabs(v - eff) > 1e-9 * (1.0 + std::fabs(eff))) continue;
        if (dr.rel == Rel::Eq) { chosen = k; break; } // pins both sides
        const bool gives_lower = (dr.rel == Rel::Ge) == (dr.coef > 0);
        if (gives_lower == lower_side && chosen < 0) chosen = k;
      }
      if (chosen >= 0)
        y_int[red.dropped[chosen].row] = d / red.dropped[chosen].coef;
    }
    for (int oj = 0; oj < n0; ++oj) {
      if (red.col_map[oj] >= 0 || by_col[oj].empty()) continue;
      const double d = residual(oj);
      if (std::fabs(d) <= 1e-10) continue;
      for (int k : by_col[oj]) {
        const auto& dr = red.dropped[k];
        if (dr.rel == Rel::Eq) {          // fixer row: dual is unrestricted
          y_int[dr.row] = d / dr.coef;
          break;
        }
      }
    }

    for (int i = 0; i < m0; ++i) sol.row_duals[i] = sense_mult * y_int[i];

    // Reduced costs against the full original matrix and all duals.
    for (int oj = 0; oj < n0; ++oj) sol.reduced_costs[oj] = objective_coef(oj);
    for (int i = 0; i < m0; ++i) {
      const double yi = sol.row_duals[i];
      if (yi == 0.0) continue;
      for (const Term& t : original.constraint(i).terms)
        sol.reduced_costs[t.var] -= yi * t.coef;
    }
    return sol;
  }

  // Effective original-space objective coefficient (overrides applied).
  std::vector<double> obj_override_cache;
  void cache_objective(const Overrides* ov) {
    obj_override_cache.assign(original.num_variables(), 0.0);
    for (int j = 0; j < original.num_variables(); ++j)
      obj_override_cache[j] = original.variable(j).objective;
    if (ov)
      for (auto& [oj, v] : ov->objective) obj_override_cache[oj] = v;
  }
  double objective_coef(int oj) const { return obj_override_cache[oj]; }

  LpSolution run(const LpOptions& opt) {
    cache_objective(opt.overrides);
    std::string why;
    if (red.proven_infeasible || !materialize(opt.overrides, &why)) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      sol.x.assign(original.num_variables(), 0.0);
      for (int oj = 0; oj < original.num_variables(); ++oj) {
        const int j = red.col_map[oj];
        sol.x[oj] = j >= 0 ? std::clamp(0.0, red.reduced.variable(j).lower,
                                        red.reduced.variable(j).upper)
                           : red.fixed_value[oj];
      }
      sol.row_duals.assign(original.num_constraints(), 0.0);
      sol.reduced_costs.assign(original.num_variables(), 0.0);
      return sol;
    }

    if (opt.warm_basis && opt.warm_basis->valid() &&
        (int)opt.warm_basis->status.size() == N) {
      bool same = basis_ready;
      if (same)
        same = std::equal(stat.begin(), stat.end(),
                          opt.warm_basis->status.begin());
      if (!same) {
        stat.assign(opt.warm_basis->status.begin(), opt.warm_basis->status.end());
        basis_ready = false;
      }
    } // else: continue from the context's current basis when ready

    normalize_statuses();
    if (!basis_ready) refactorize();
    compute_x();

    long iters = 0;
    LpStatus status;
    int rc = pivot_loop(true, opt.max_iterations, iters);
    if (rc == 0) {
      rc = pivot_loop(false, opt.max_iterations, iters);
      status = rc == 0   ? LpStatus::Optimal
               : rc == 2 ? LpStatus::Unbounded
                         : LpStatus::IterLimit;
      // A Dantzig run can stop on a stale gradient after heavy updating;
      // verify optimality on a fresh factorization once.
      if (status == LpStatus::Optimal && pivots_since_refactor > 0) {
        refactorize();
        compute_x();
        rc = pivot_loop(true, opt.max_iterations, iters);
        if (rc == 0) rc = pivot_loop(false, opt.max_iterations, iters);
        status = rc == 0   ? LpStatus::Optimal
                 : rc == 1 ? LpStatus::Infeasible
                 : rc == 2 ? LpStatus::Unbounded
                           : LpStatus::IterLimit;
      }
    } else {
      status = rc == 1 ? LpStatus::Infeasible : LpStatus::IterLimit;
      if (rc == 1) {
        // Confirm infeasibility from a fresh factorization.
        refactorize();
        compute_x();
        rc = pivot_loop(true, opt.max_iterations, iters);
        if (rc == 0) {
          rc = pivot_loop(false, opt.max_iterations, iters);
          status = rc == 0   ? LpStatus::Optimal
                   : rc == 2 ? LpStatus::Unbounded
                             : LpStatus::IterLimit;
        } else {
          status = rc == 1 ? LpStatus::Infeasible : LpStatus::IterLimit;
        }
      }
    }

    if (opt.warm_basis)
      opt.warm_basis->status.assign(stat.begin(), stat.end());
    return extract(status, iters);
  }
};

SimplexContext::SimplexContext(const Model& model)
    : impl_(std::make_unique<Impl>(model)) {}
SimplexContext::~SimplexContext() = default;
SimplexContext::SimplexContext(SimplexContext&&) noexcept = default;
SimplexContext& SimplexContext::operator=(SimplexContext&&) noexcept = default;

LpSolution SimplexContext::solve(const LpOptions& options) {
  return impl_->run(options);
}

const Model& SimplexContext::model() const { return impl_->original; }

double SimplexContext::pinned_value(int var) const {
  if (var < 0 || var >= (int)impl_->red.col_map.size())
    throw std::invalid_argument("pinned_value: bad variable id");
  return impl_->red.col_map[var] >= 0
             ? std::numeric_limits<double>::quiet_NaN()
             : impl_->red.fixed_value[var];
}

LpSolution solve_lp(const Model& model, const LpOptions& options) {
  SimplexContext ctx(model);
  return ctx.solve(options);
}

Model fix_binaries(const Model& model,
                   const std::vector<std::pair<int, double>>& assignment) {
  Model out = model;
  std::vector<char> covered(out.num_variables(), 0);
  for (auto& [j, v] : assignment) {
    if (j < 0 || j >= out.num_variables())
      throw std::invalid_argument("fix_binaries: bad variable id");
    Variable& var = out.variable(j);
    if (var.kind != VarKind::Binary)
      throw std::invalid_argument("fix_binaries: " + var.name +
                                  " is not a binary variable");
    const double r = std::round(v);
    if (std::fabs(v - r) > kTolInt || (r != 0.0 && r != 1.0))
      throw std::invalid_argument("fix_binaries: value not within tolerance of {0,1}");
    var.kind = VarKind::Continuous;
    var.lower = var.upper = r;
    covered[j] = 1;
  }
  for (int j = 0; j < out.num_variables(); ++j)
    if (out.variable(j).kind == VarKind::Binary && !covered[j])
      throw std::invalid_argument("fix_binaries: assignment missing binary " +
                                  out.variable(j).name);
  return out;
}

}  // namespace rampcap::milp
