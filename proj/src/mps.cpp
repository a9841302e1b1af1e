#include <cmath>
#include <cstdio>
#include <string>

#include "flexhedge/lp.hpp"

namespace flexhedge {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string id(char prefix, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%07d", prefix, index + 1);
  return buf;
}

// Fixed-form fields start at columns 2, 5, 15, 25, 40, 50.
void entry(std::ostream& os, const std::string& code, const std::string& f2, const std::string& f3,
           const std::string& f4) {
  std::string line = " " + pad(code, 2) + " " + pad(f2, 8);
  if (!f3.empty() || !f4.empty()) line += "  " + pad(f3, 8);
  if (!f4.empty()) line += "  " + f4;
  while (!line.empty() && line.back() == ' ') line.pop_back();
  os << line << '\n';
}

}  // namespace

void write_mps(std::ostream& os, const LinearProgram& lp, const std::string& name) {
  os << "* generated by flexhedge\n";
  for (int i = 0; i < lp.row_count(); ++i) os << "* " << id('R', i) << " = " << lp.rows()[i].name << '\n';
  for (int j = 0; j < lp.column_count(); ++j) {
    os << "* " << id('C', j) << " = " << lp.columns()[j].name << '\n';
  }
  os << pad("NAME", 14) << name.substr(0, 8) << '\n';
  os << "OBJSENSE\n    " << (lp.sense() == Sense::Maximize ? "MAX" : "MIN") << '\n';
  os << "ROWS\n";
  entry(os, "N", "OBJ", "", "");
  for (int i = 0; i < lp.row_count(); ++i) {
    const char* code = "E";
    if (lp.rows()[i].relation == Relation::LessEqual) code = "L";
    if (lp.rows()[i].relation == Relation::GreaterEqual) code = "G";
    entry(os, code, id('R', i), "", "");
  }

  os << "COLUMNS\n";
  for (int j = 0; j < lp.column_count(); ++j) {
    const std::string cid = id('C', j);
    const double cost = lp.columns()[j].cost;
    if (cost != 0.0) entry(os, "", cid, "OBJ", num(cost));
    for (int i = 0; i < lp.row_count(); ++i) {
      const double a = lp.coefficient(i, j);
      if (a != 0.0) entry(os, "", cid, id('R', i), num(a));
    }
  }

  os << "RHS\n";
  if (lp.objective_constant() != 0.0) entry(os, "", "RHS", "OBJ", num(-lp.objective_constant()));
  for (int i = 0; i < lp.row_count(); ++i) {
    if (lp.rows()[i].rhs != 0.0) entry(os, "", "RHS", id('R', i), num(lp.rows()[i].rhs));
  }

  os << "BOUNDS\n";
  for (int j = 0; j < lp.column_count(); ++j) {
    const LpColumn& c = lp.columns()[j];
    const std::string cid = id('C', j);
    if (c.lower == c.upper) {
      entry(os, "FX", "BND", cid, num(c.lower));
      continue;
    }
    if (std::isinf(c.lower) && std::isinf(c.upper)) {
      entry(os, "FR", "BND", cid, "");
      continue;
    }
    if (std::isinf(c.lower)) entry(os, "MI", "BND", cid, "");
    else if (c.lower != 0.0) entry(os, "LO", "BND", cid, num(c.lower));
    if (std::isfinite(c.upper)) entry(os, "UP", "BND", cid, num(c.upper));
  }
  os << "ENDATA\n";
}

}  // namespace flexhedge
