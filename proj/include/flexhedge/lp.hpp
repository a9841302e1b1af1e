#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flexhedge/model.hpp"

namespace flexhedge {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpColumn {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct LpRow {
  std::string name;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> coefficients;  // (column index, value)
};

/// A linear program with named, bounded columns and named rows.
///
/// Coefficients added twice for the same (row, column) accumulate. The
/// objective constant only shifts the reported objective value.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Maximize) : sense_(sense) {}

  int add_column(std::string name, double lower, double upper, double cost = 0.0);
  int add_row(std::string name, Relation relation, double rhs,
              std::vector<std::pair<int, double>> coefficients = {});
  void add_coefficient(int row, int column, double value);
  void set_rhs(int row, double rhs);
  void set_cost(int column, double cost);
  void set_bounds(int column, double lower, double upper);
  void set_objective_constant(double c) { objective_constant_ = c; }

  Sense sense() const { return sense_; }
  double objective_constant() const { return objective_constant_; }
  const std::vector<LpColumn>& columns() const { return columns_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  int column_count() const { return static_cast<int>(columns_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }

  std::optional<int> find_row(const std::string& name) const;
  std::optional<int> find_column(const std::string& name) const;

  /// Coefficient of `column` in `row` (zero when absent; duplicates summed).
  double coefficient(int row, int column) const;
  /// Left-hand side of `row` evaluated at `x`.
  double row_activity(int row, const std::vector<double>& x) const;
  /// Objective (including the constant) evaluated at `x`.
  double objective_at(const std::vector<double>& x) const;

  /// Empty iff the structural invariants hold.
  std::vector<std::string> structural_errors() const;

  bool operator==(const LinearProgram& other) const;

 private:
  Sense sense_;
  double objective_constant_ = 0.0;
  std::vector<LpColumn> columns_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

/// Position of a variable in the final simplex basis.
enum class VarState { Basic, AtLower, AtUpper, FreeZero };

/// Basis identity. Variables 0..n-1 are columns, n..n+m-1 are the row slacks
/// (row i written as a.x + s_i = rhs_i).
struct LpBasis {
  std::vector<int> basic;           // one variable per row
  std::vector<VarState> states;     // one per column, then one per row slack

  bool operator==(const LpBasis&) const = default;
};

/// Solver output.
///
/// Duals are objective sensitivities d(objective)/d(rhs). For a maximize
/// problem that makes <= rows nonnegative, >= rows nonpositive and
/// equality rows free; a minimize problem has the mirrored signs.
/// Reduced costs are cost_j - sum_i dual_i * a_ij in the same convention.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective_value = 0.0;
  LpBasis basis;
  bool degenerate = false;  // a basic variable sits on one of its bounds
  int iterations = 0;
  std::vector<std::string> row_names;
  std::vector<std::string> column_names;

  bool optimal() const { return status == LpStatus::Optimal; }
  bool operator==(const LpSolution&) const = default;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;
  double optimality_tol = 1e-9;
  int iteration_cap = 10000;
};

/// Narrow seam for swapping in an external LP engine.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual LpSolution solve(const LinearProgram& lp) const = 0;
};

/// Bounded-variable revised simplex with Bland's rule. Two phases; phase one
/// uses one artificial per row, which are pivoted out before phase two.
class SimplexBackend final : public LpBackend {
 public:
  explicit SimplexBackend(SimplexOptions options = {}) : options_(options) {}
  LpSolution solve(const LinearProgram& lp) const override;

 private:
  SimplexOptions options_;
};

/// Solve with the built-in simplex. Throws MalformedProgram on structural
/// errors and SolverFailure when the iteration cap trips.
LpSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});

/// Dual of the named row. Throws InvalidInput if the row is unknown or the
/// solution is not optimal.
double dual_of(const LpSolution& sol, const std::string& row_name);
double primal_of(const LpSolution& sol, const std::string& column_name);

struct KktReport {
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double dual_feasibility = 0.0;
  double complementarity = 0.0;

  double worst() const;
  bool passes(double tol) const { return worst() <= tol; }
};

/// Recompute every KKT residual from `lp` and the values in `sol` alone.
///
/// Stationarity compares the reported reduced costs with cost - A^T y.
/// Dual feasibility checks row-dual signs and the signs of the implied
/// reduced costs (cost - A^T y) against the column bounds. Complementarity
/// is the largest |multiplier * slack| over rows and finite bounds.
KktReport verify_kkt(const LinearProgram& lp, const LpSolution& sol);

/// Mechanical dual of `lp`, in the opposite sense.
///
/// One dual column per primal row (named after it, sign from the relation),
/// one `ub:<col>` column per finite upper bound, one `lb:<col>` column per
/// finite nonzero lower bound, and one dual row per primal column (named
/// after it). With the sensitivity sign convention the dual column values
/// coincide with the primal row duals.
LinearProgram dualize(const LinearProgram& lp);

/// Fixed-form MPS. Row and column names are replaced by 8-character ids
/// (R0000001, C0000001); the original names are listed in comment lines.
/// Numbers are written with 12 significant digits.
void write_mps(std::ostream& os, const LinearProgram& lp, const std::string& name = "FLEXHEDG");

}  // namespace flexhedge
