#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "flexhedge/errors.hpp"
#include "flexhedge/lp.hpp"

namespace flexhedge {

int LinearProgram::add_column(std::string name, double lower, double upper, double cost) {
  columns_.push_back({std::move(name), lower, upper, cost});
  return column_count() - 1;
}

int LinearProgram::add_row(std::string name, Relation relation, double rhs,
                           std::vector<std::pair<int, double>> coefficients) {
  rows_.push_back({std::move(name), relation, rhs, std::move(coefficients)});
  return row_count() - 1;
}

void LinearProgram::add_coefficient(int row, int column, double value) {
  rows_.at(static_cast<std::size_t>(row)).coefficients.emplace_back(column, value);
}

void LinearProgram::set_rhs(int row, double rhs) { rows_.at(static_cast<std::size_t>(row)).rhs = rhs; }

void LinearProgram::set_cost(int column, double cost) {
  columns_.at(static_cast<std::size_t>(column)).cost = cost;
}

void LinearProgram::set_bounds(int column, double lower, double upper) {
  auto& c = columns_.at(static_cast<std::size_t>(column));
  c.lower = lower;
  c.upper = upper;
}

std::optional<int> LinearProgram::find_row(const std::string& name) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> LinearProgram::find_column(const std::string& name) const {
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].name == name) return static_cast<int>(j);
  }
  return std::nullopt;
}

double LinearProgram::coefficient(int row, int column) const {
  double sum = 0.0;
  for (const auto& [j, a] : rows_.at(static_cast<std::size_t>(row)).coefficients) {
    if (j == column) sum += a;
  }
  return sum;
}

double LinearProgram::row_activity(int row, const std::vector<double>& x) const {
  double sum = 0.0;
  for (const auto& [j, a] : rows_.at(static_cast<std::size_t>(row)).coefficients) {
    sum += a * x.at(static_cast<std::size_t>(j));
  }
  return sum;
}

double LinearProgram::objective_at(const std::vector<double>& x) const {
  double sum = objective_constant_;
  for (std::size_t j = 0; j < columns_.size(); ++j) sum += columns_[j].cost * x.at(j);
  return sum;
}

std::vector<std::string> LinearProgram::structural_errors() const {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const LpColumn& c : columns_) {
    if (!names.insert(c.name).second) out.push_back("duplicate column name '" + c.name + "'");
    if (std::isnan(c.lower) || std::isnan(c.upper) || c.lower > c.upper) {
      out.push_back("column '" + c.name + "': lower bound exceeds upper bound");
    }
    if (c.lower == kInf || c.upper == -kInf) {
      out.push_back("column '" + c.name + "': bounds exclude every finite value");
    }
    if (!std::isfinite(c.cost)) out.push_back("column '" + c.name + "': non-finite cost");
  }
  names.clear();
  for (const LpRow& r : rows_) {
    if (!names.insert(r.name).second) out.push_back("duplicate row name '" + r.name + "'");
    if (!std::isfinite(r.rhs)) out.push_back("row '" + r.name + "': non-finite right-hand side");
    for (const auto& [j, a] : r.coefficients) {
      if (j < 0 || j >= column_count()) {
        out.push_back("row '" + r.name + "': coefficient references column " + std::to_string(j) +
                      " which does not exist");
      }
      if (!std::isfinite(a)) out.push_back("row '" + r.name + "': non-finite coefficient");
    }
  }
  if (!std::isfinite(objective_constant_)) out.emplace_back("non-finite objective constant");
  return out;
}

bool LinearProgram::operator==(const LinearProgram& other) const {
  if (sense_ != other.sense_ || objective_constant_ != other.objective_constant_) return false;
  if (columns_.size() != other.columns_.size() || rows_.size() != other.rows_.size()) return false;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& a = columns_[j];
    const auto& b = other.columns_[j];
    if (a.name != b.name || a.lower != b.lower || a.upper != b.upper || a.cost != b.cost) return false;
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& a = rows_[i];
    const auto& b = other.rows_[i];
    if (a.name != b.name || a.relation != b.relation || a.rhs != b.rhs ||
        a.coefficients != b.coefficients) {
      return false;
    }
  }
  return true;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

LpSolution solve(const LinearProgram& lp, const SimplexOptions& options) {
  return SimplexBackend(options).solve(lp);
}

double dual_of(const LpSolution& sol, const std::string& row_name) {
  if (!sol.optimal()) throw InvalidInput("dual_of: solution is " + std::string(to_string(sol.status)));
  const auto it = std::find(sol.row_names.begin(), sol.row_names.end(), row_name);
  if (it == sol.row_names.end()) throw InvalidInput("dual_of: unknown row '" + row_name + "'");
  return sol.duals.at(static_cast<std::size_t>(it - sol.row_names.begin()));
}

double primal_of(const LpSolution& sol, const std::string& column_name) {
  const auto it = std::find(sol.column_names.begin(), sol.column_names.end(), column_name);
  if (it == sol.column_names.end()) throw InvalidInput("primal_of: unknown column '" + column_name + "'");
  return sol.primal.at(static_cast<std::size_t>(it - sol.column_names.begin()));
}

double KktReport::worst() const {
  return std::max({stationarity, primal_feasibility, dual_feasibility, complementarity});
}

}  // namespace flexhedge
