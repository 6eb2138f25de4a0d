#include "rampcap/robust/worstcase.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rampcap/feeder.hpp"

namespace rampcap::robust {

using milp::Model;
using milp::Rel;
using milp::Term;

namespace {

std::string hour_name(const char* stem, int t) {
  return std::string(stem) + "_t" + std::to_string(t);
}

struct SelectorPair {
  std::vector<int> plus, minus;
};

// Adds per-hour extreme selectors for one category: up/down exclusivity per
// hour and a cardinality budget across the horizon.
SelectorPair add_selectors(Model& m, const std::string& letter, int horizon,
                           int budget) {
  SelectorPair s;
  s.plus.assign(horizon, -1);
  s.minus.assign(horizon, -1);
  std::vector<Term> budget_terms;
  for (int t = 1; t <= horizon; ++t) {
    const std::string suffix = letter + "_t" + std::to_string(t);
    const int wp = m.add_binary("w" + letter + "p_t" + std::to_string(t));
    const int wm = m.add_binary("w" + letter + "m_t" + std::to_string(t));
    s.plus[t - 1] = wp;
    s.minus[t - 1] = wm;
    m.add_constraint("pair_" + suffix, {{wp, 1.0}, {wm, 1.0}}, Rel::Le, 1.0);
    budget_terms.push_back({wp, 1.0});
    budget_terms.push_back({wm, 1.0});
  }
  m.add_constraint("budget_" + letter, std::move(budget_terms), Rel::Le,
                   (double)budget);
  return s;
}

} // namespace

WorstCaseProblem build_worstcase_milp(const sched::BuiltProblem& recourse,
                                      const DualModel& dual,
                                      const UncertaintySpec& uncertainty,
                                      const FeederProfile& feeder,
                                      const PriceSeries& price) {
  const int T = (int)price.values.size();
  if ((int)feeder.customer_load.size() != T ||
      (int)feeder.customer_solar.size() != T)
    throw std::invalid_argument("feeder/price horizon mismatch");

  WorstCaseProblem out;
  out.model = dual.model;
  out.load_plus.assign(T, -1);
  out.load_minus.assign(T, -1);
  out.solar_plus.assign(T, -1);
  out.solar_minus.assign(T, -1);
  out.price_plus.assign(T, -1);
  out.price_minus.assign(T, -1);

  // Locate the exchange columns and the exchange-change rows by hour.
  std::vector<int> pm_col(T + 1, -1), slack_col(T + 1, -1);
  for (const auto& [key, col] : recourse.vars.entries()) {
    if (!key.entity.empty()) continue;
    if (key.sym == sched::Sym::PM) pm_col[key.hour] = col;
    if (key.sym == sched::Sym::slack) slack_col[key.hour] = col;
  }
  std::vector<int> hi_row(T + 2, -1), lo_row(T + 2, -1);
  for (int i = 0; i < recourse.model.num_constraints(); ++i) {
    if (recourse.row_tags[i] != "eq21") continue;
    const auto& c = recourse.model.constraint(i);
    int hour = -1;
    for (const Term& term : c.terms)
      for (int t = 1; t <= T; ++t)
        if (term.var == pm_col[t] && term.coef > 0.5) hour = t;
    if (hour < 0) throw std::logic_error("exchange-change row without hour");
    (c.rel == Rel::Le ? hi_row : lo_row)[hour] = i;
  }

  // A multiplier of an exchange-change row is bounded in magnitude by the
  // penalty price of that hour's slack column (the slack's stationarity row
  // enforces it); that bound drives the product linearization below.
  std::vector<double> y_bound(T + 2, 0.0);
  for (int t = 1; t <= T; ++t) {
    if (hi_row[t] < 0 && lo_row[t] < 0) continue;
    if (slack_col[t] < 0)
      throw std::invalid_argument(
          "cannot infer a multiplier bound for the exchange-change rows at "
          "hour " +
          std::to_string(t) + ": no penalized slack column");
    y_bound[t] = recourse.model.variable(slack_col[t]).objective;
    if (!(y_bound[t] > 0.0) || !std::isfinite(y_bound[t]))
      throw std::invalid_argument(
          "cannot infer a multiplier bound at hour " + std::to_string(t) +
          ": slack penalty is not a positive finite price");
    if (hi_row[t] >= 0) { // y <= 0 on a <= row; tighten to the implied box
      auto& v = out.model.variable(dual.row_dual[hi_row[t]]);
      v.lower = -y_bound[t];
    }
    if (lo_row[t] >= 0) {
      auto& v = out.model.variable(dual.row_dual[lo_row[t]]);
      v.upper = y_bound[t];
    }
  }

  const bool has_load = uncertainty.is_active(Category::Load);
  const bool has_solar = uncertainty.is_active(Category::Solar);
  const bool has_price = uncertainty.is_active(Category::Price);
  const int budget = uncertainty.budget_hours;

  if (has_load) {
    const auto s = add_selectors(out.model, "L", T, budget);
    out.load_plus = s.plus;
    out.load_minus = s.minus;
  }
  if (has_solar) {
    const auto s = add_selectors(out.model, "S", T, budget);
    out.solar_plus = s.plus;
    out.solar_minus = s.minus;
  }
  if (has_price) {
    const auto s = add_selectors(out.model, "P", T, budget);
    out.price_plus = s.plus;
    out.price_minus = s.minus;

    // A priced hour enters the exchange column's stationarity row linearly:
    // the realized price is rho * (1 +- err) when selected.
    for (int t = 1; t <= T; ++t) {
      const double swing = price.values[t - 1] * uncertainty.price_error;
      if (swing == 0.0 || pm_col[t] < 0) continue;
      auto& st = out.model.constraint(pm_col[t]); // stationarity of column j
      st.terms.push_back({s.plus[t - 1], -swing});
      st.terms.push_back({s.minus[t - 1], swing});
    }
  }

  if (!(has_load || has_solar)) return out;

  // Feeder deviations shift the exchange-change right-hand sides. Summing by
  // parts, the objective gains sum_t e_t * (Y_{t+1} - Y_t) where e_t is the
  // hour's net-load deviation in MW and Y_t the summed multipliers of hour
  // t's rows. Each selector-Y product is linearized with the bound above.
  for (int t = 1; t <= T; ++t) {
    const double big = y_bound[t] + y_bound[t + 1];
    if (big <= 0.0) continue; // no rows touch this hour's deviation

    std::vector<Term> g; // terms of Y_{t+1} - Y_t
    for (int r : {hi_row[t + 1], lo_row[t + 1]})
      if (r >= 0) g.push_back({dual.row_dual[r], 1.0});
    for (int r : {hi_row[t], lo_row[t]})
      if (r >= 0) g.push_back({dual.row_dual[r], -1.0});

    struct ProductSpec {
      int selector;
      double obj_coef;
      const char* stem;
    };
    std::vector<ProductSpec> specs;
    const double a_load = uncertainty.load_error * feeder.customer_load[t - 1];
    const double a_solar =
        uncertainty.solar_error * feeder.customer_solar[t - 1];
    if (has_load && a_load != 0.0) {
      specs.push_back({out.load_plus[t - 1], a_load, "pLp"});
      specs.push_back({out.load_minus[t - 1], -a_load, "pLm"});
    }
    if (has_solar && a_solar != 0.0) {
      specs.push_back({out.solar_plus[t - 1], -a_solar, "pSp"});
      specs.push_back({out.solar_minus[t - 1], a_solar, "pSm"});
    }
    for (const auto& ps : specs) {
      const int p =
          out.model.add_continuous(hour_name(ps.stem, t), -big, big,
                                   ps.obj_coef);
      const int w = ps.selector;
      out.model.add_constraint(hour_name(ps.stem, t) + "_ub",
                               {{p, 1.0}, {w, -big}}, Rel::Le, 0.0);
      out.model.add_constraint(hour_name(ps.stem, t) + "_lb",
                               {{p, 1.0}, {w, big}}, Rel::Ge, 0.0);
      std::vector<Term> up{{p, 1.0}, {w, big}};
      std::vector<Term> dn{{p, 1.0}, {w, -big}};
      for (const Term& term : g) {
        up.push_back({term.var, -term.coef});
        dn.push_back({term.var, -term.coef});
      }
      out.model.add_constraint(hour_name(ps.stem, t) + "_gu", std::move(up),
                               Rel::Le, big);
      out.model.add_constraint(hour_name(ps.stem, t) + "_gl", std::move(dn),
                               Rel::Ge, -big);
    }
  }
  return out;
}

UncertainRealization selector_realization(const WorstCaseProblem& problem,
                                          const UncertaintySpec& uncertainty,
                                          const std::vector<double>& x,
                                          int horizon) {
  UncertainRealization real = UncertainRealization::zero(horizon);
  auto fill = [&](const std::vector<int>& plus, const std::vector<int>& minus,
                  double err, std::vector<double>& dev) {
    for (int t = 0; t < horizon; ++t) {
      if (plus[t] >= 0 && x[plus[t]] > 0.5) dev[t] = err;
      else if (minus[t] >= 0 && x[minus[t]] > 0.5) dev[t] = -err;
    }
  };
  fill(problem.load_plus, problem.load_minus, uncertainty.load_error,
       real.load_deviation);
  fill(problem.solar_plus, problem.solar_minus, uncertainty.solar_error,
       real.solar_deviation);
  fill(problem.price_plus, problem.price_minus, uncertainty.price_error,
       real.price_deviation);
  return real;
}

WorstCase solve_worst_case(const WorstCaseInputs& in) {
  const int T = in.config.time_grid.horizon_hours;
  {
    const auto bad = validate_uncertainty(in.uncertainty, T);
    if (!bad.empty())
      throw std::invalid_argument("invalid uncertainty description:\n" +
                                  format_violations(bad));
  }

  const auto base = sched::build_recourse_lp(
      in.config, in.feeder, in.price, in.fixed_binaries,
      UncertainRealization::zero(T), in.ramp, in.slack_penalty);
  const auto dual = dualize(base.model);
  const auto wc =
      build_worstcase_milp(base, dual, in.uncertainty, in.feeder, in.price);

  const auto adv = milp::solve_milp(wc.model);
  if (adv.status != milp::MipStatus::Optimal)
    throw std::runtime_error("adversarial subproblem did not solve");

  WorstCase out;
  out.realization = selector_realization(wc, in.uncertainty, adv.x, T);

  const auto confirm = sched::build_recourse_lp(
      in.config, in.feeder, in.price, in.fixed_binaries, out.realization,
      in.ramp, in.slack_penalty);
  const auto lp = milp::solve_lp(confirm.model);
  if (lp.status != milp::LpStatus::Optimal)
    throw std::runtime_error("confirming dispatch solve failed");

  out.worst_cost = lp.objective;
  out.linearization_gap = std::fabs(adv.objective - lp.objective) /
                          std::max(1.0, std::fabs(lp.objective));
  if (out.linearization_gap > 1e-5) {
    int worst_hour = 0;
    double worst_mag = -1.0;
    for (int t = 0; t < T; ++t) {
      const double mag =
          std::fabs(out.realization.load_deviation[t]) *
              in.feeder.customer_load[t] +
          std::fabs(out.realization.solar_deviation[t]) *
              in.feeder.customer_solar[t];
      if (mag > worst_mag) {
        worst_mag = mag;
        worst_hour = t + 1;
      }
    }
    throw std::runtime_error(
        "worst-case linearization mismatch: selector optimum " +
        std::to_string(adv.objective) + " vs confirmed " +
        std::to_string(lp.objective) + " (relative gap " +
        std::to_string(out.linearization_gap) + ", largest deviation at hour " +
        std::to_string(worst_hour) + ")");
  }

  out.fix_row_duals.reserve(confirm.binary_fix_rows.size());
  for (int row : confirm.binary_fix_rows)
    out.fix_row_duals.push_back(lp.row_duals[row]);
  return out;
}

}  // namespace rampcap::robust
