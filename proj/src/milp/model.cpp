#include "rampcap/milp/model.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace rampcap::milp {

int Model::add_variable(std::string name, VarKind kind, double lower,
                        double upper, double objective) {
  Variable v;
  v.name = std::move(name);
  v.kind = kind;
  v.lower = lower;
  v.upper = upper;
  v.objective = objective;
  if (kind == VarKind::Binary) {
    if (std::isnan(lower) || std::isnan(upper) || lower < -0.0 || upper > 1.0)
      throw std::invalid_argument("binary variable bounds must stay within [0,1]: " + v.name);
  }
  if (std::isnan(objective))
    throw std::invalid_argument("NaN objective coefficient: " + v.name);
  vars_.push_back(std::move(v));
  return (int)vars_.size() - 1;
}

int Model::add_constraint(std::string name, std::vector<Term> terms, Rel rel,
                          double rhs) {
  Constraint c;
  c.name = std::move(name);
  c.rel = rel;
  c.rhs = rhs;
  if (std::isnan(rhs)) throw std::invalid_argument("NaN rhs: " + c.name);
  c.terms.reserve(terms.size());
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= (int)vars_.size())
      throw std::invalid_argument("constraint references undeclared variable: " + c.name);
    if (std::isnan(t.coef))
      throw std::invalid_argument("NaN coefficient: " + c.name);
    if (t.coef != 0.0) c.terms.push_back(t);
  }
  rows_.push_back(std::move(c));
  return (int)rows_.size() - 1;
}

std::vector<int> Model::binary_variables() const {
  std::vector<int> out;
  for (int j = 0; j < (int)vars_.size(); ++j)
    if (vars_[j].kind == VarKind::Binary) out.push_back(j);
  return out;
}

void Model::check_well_formed() const {
  for (const auto& v : vars_) {
    if (std::isnan(v.lower) || std::isnan(v.upper))
      throw std::invalid_argument("NaN bound on variable " + v.name);
    if (v.lower > v.upper)
      throw std::invalid_argument("crossed bounds on variable " + v.name);
  }
  for (const auto& c : rows_) {
    std::map<int, int> seen;
    for (const Term& t : c.terms) {
      if (t.var < 0 || t.var >= (int)vars_.size())
        throw std::invalid_argument("bad variable reference in " + c.name);
      if (++seen[t.var] > 1)
        throw std::invalid_argument("duplicate variable in constraint " + c.name);
    }
  }
}

}  // namespace rampcap::milp
