// Plain-text LP-format dump for debugging. Deterministic: fixed number
// formatting, variables and rows in model order, names sanitized to the
// LP-format charset (collisions disambiguated with the column index).

#include <cctype>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rampcap/milp/model.hpp"

namespace rampcap::milp {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> sanitized_names(const Model& m) {
  std::vector<std::string> names(m.num_variables());
  std::map<std::string, int> seen;
  for (int j = 0; j < m.num_variables(); ++j) {
    std::string s = m.variable(j).name;
    if (s.empty()) s = "x";
    for (char& c : s)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
    if (std::isdigit(static_cast<unsigned char>(s[0]))) s.insert(s.begin(), 'x');
    auto [it, fresh] = seen.insert({s, j});
    if (!fresh) s += "_c" + std::to_string(j);
    names[j] = s;
  }
  return names;
}

void write_terms(std::ostream& os, const std::vector<Term>& terms,
                 const std::vector<std::string>& names, const std::string& fb) {
  if (terms.empty()) {
    os << "0 " << fb;
    return;
  }
  bool first = true;
  for (const Term& t : terms) {
    const double c = t.coef;
    if (first) {
      os << (c < 0 ? "- " : "") << num(c < 0 ? -c : c);
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ") << num(c < 0 ? -c : c);
    }
    os << ' ' << names[t.var];
  }
}

} // namespace

void write_lp_format(const Model& m, std::ostream& os) {
  m.check_well_formed();
  const std::vector<std::string> names = sanitized_names(m);
  const std::string fallback = m.num_variables() > 0 ? names[0] : "x0";

  os << (m.sense == Sense::Max ? "Maximize\n" : "Minimize\n") << " obj: ";
  std::vector<Term> obj;
  for (int j = 0; j < m.num_variables(); ++j)
    if (m.variable(j).objective != 0.0) obj.push_back({j, m.variable(j).objective});
  write_terms(os, obj, names, fallback);
  os << "\nSubject To\n";

  for (int i = 0; i < m.num_constraints(); ++i) {
    const Constraint& c = m.constraint(i);
    std::string rname = c.name.empty() ? "r" + std::to_string(i) : c.name;
    for (char& ch : rname)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') ch = '_';
    os << ' ' << rname << "_r" << i << ": ";
    write_terms(os, c.terms, names, fallback);
    switch (c.rel) {
      case Rel::Le: os << " <= "; break;
      case Rel::Ge: os << " >= "; break;
      case Rel::Eq: os << " = "; break;
    }
    os << num(c.rhs) << '\n';
  }

  os << "Bounds\n";
  for (int j = 0; j < m.num_variables(); ++j) {
    const Variable& v = m.variable(j);
    const bool lo_inf = v.lower == -kInf;
    const bool hi_inf = v.upper == kInf;
    os << ' ';
    if (lo_inf && hi_inf) {
      os << names[j] << " free";
    } else if (v.lower == v.upper) {
      os << names[j] << " = " << num(v.lower);
    } else {
      os << (lo_inf ? "-infinity" : num(v.lower)) << " <= " << names[j]
         << " <= " << (hi_inf ? "+infinity" : num(v.upper));
    }
    os << '\n';
  }

  bool any_bin = false;
  for (int j = 0; j < m.num_variables(); ++j)
    if (m.variable(j).kind == VarKind::Binary) {
      if (!any_bin) os << "Binaries\n";
      any_bin = true;
      os << ' ' << names[j] << '\n';
    }
  os << "End\n";
}

}  // namespace rampcap::milp
