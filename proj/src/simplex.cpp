#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "flexhedge/errors.hpp"
#include "flexhedge/lp.hpp"

namespace flexhedge {

namespace {

// Works on the internal form: minimize c.x subject to [A I R] x = b with
// bounds on every variable. Column layout is structurals, then one slack per
// row, then one artificial per row.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp),
        opt_(options),
        m_(lp.row_count()),
        nc_(lp.column_count()),
        n_(nc_ + 2 * m_),
        a_(Eigen::MatrixXd::Zero(m_, n_)),
        b_(m_),
        lower_(static_cast<std::size_t>(n_)),
        upper_(static_cast<std::size_t>(n_)),
        x_(static_cast<std::size_t>(n_), 0.0),
        state_(static_cast<std::size_t>(n_), VarState::AtLower) {
    for (int j = 0; j < nc_; ++j) {
      const LpColumn& col = lp.columns()[static_cast<std::size_t>(j)];
      lower_[j] = col.lower;
      upper_[j] = col.upper;
    }
    for (int i = 0; i < m_; ++i) {
      const LpRow& row = lp.rows()[static_cast<std::size_t>(i)];
      for (const auto& [j, v] : row.coefficients) a_(i, j) += v;
      b_(i) = row.rhs;
      const int s = nc_ + i;
      a_(i, s) = 1.0;
      switch (row.relation) {
        case Relation::LessEqual: lower_[s] = 0.0; upper_[s] = kInf; break;
        case Relation::GreaterEqual: lower_[s] = -kInf; upper_[s] = 0.0; break;
        case Relation::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
      }
      const int r = nc_ + m_ + i;
      lower_[r] = 0.0;
      upper_[r] = kInf;
    }
  }

  LpSolution run() {
    // Nonbasic starting point: every structural and slack on a finite bound.
    for (int j = 0; j < nc_ + m_; ++j) place_at_start(j);

    Eigen::VectorXd residual = b_;
    for (int j = 0; j < nc_ + m_; ++j) {
      if (x_[j] != 0.0) residual -= a_.col(j) * x_[j];
    }
    basis_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      const int r = nc_ + m_ + i;
      a_(i, r) = residual(i) >= 0.0 ? 1.0 : -1.0;
      basis_[i] = r;
      state_[r] = VarState::Basic;
      x_[r] = std::abs(residual(i));
    }

    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) phase1_cost(nc_ + m_ + i) = 1.0;
    iterate(phase1_cost, n_);

    LpSolution sol;
    sol.row_names.reserve(static_cast<std::size_t>(m_));
    for (const LpRow& row : lp_.rows()) sol.row_names.push_back(row.name);
    for (const LpColumn& col : lp_.columns()) sol.column_names.push_back(col.name);

    for (int i = 0; i < m_; ++i) {
      const int r = nc_ + m_ + i;
      if (x_[r] > opt_.feas_tol) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        sol.primal.assign(x_.begin(), x_.begin() + nc_);
        return sol;
      }
    }
    drive_out_artificials();

    Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(n_);
    const double flip = lp_.sense() == Sense::Maximize ? -1.0 : 1.0;
    for (int j = 0; j < nc_; ++j) phase2_cost(j) = flip * lp_.columns()[j].cost;
    const bool bounded = iterate(phase2_cost, nc_ + m_);

    sol.iterations = iterations_;
    sol.primal.assign(x_.begin(), x_.begin() + nc_);
    sol.objective_value = lp_.objective_at(sol.primal);
    if (!bounded) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    sol.status = LpStatus::Optimal;

    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = phase2_cost(basis_[i]);
    const Eigen::VectorXd y = binv_.transpose() * cb;
    sol.duals.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) sol.duals[i] = flip * y(i);
    sol.reduced_costs.resize(static_cast<std::size_t>(nc_));
    for (int j = 0; j < nc_; ++j) {
      double rc = lp_.columns()[j].cost;
      for (int i = 0; i < m_; ++i) rc -= sol.duals[i] * a_(i, j);
      sol.reduced_costs[j] = rc;
    }

    sol.basis.basic = basis_;
    sol.basis.states.assign(state_.begin(), state_.begin() + nc_ + m_);
    for (int k : basis_) {
      if ((std::isfinite(lower_[k]) && x_[k] - lower_[k] <= opt_.pivot_tol) ||
          (std::isfinite(upper_[k]) && upper_[k] - x_[k] <= opt_.pivot_tol)) {
        sol.degenerate = true;
      }
    }
    return sol;
  }

 private:
  void place_at_start(int j) {
    if (std::isfinite(lower_[j])) {
      state_[j] = VarState::AtLower;
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      state_[j] = VarState::AtUpper;
      x_[j] = upper_[j];
    } else {
      state_[j] = VarState::FreeZero;
      x_[j] = 0.0;
    }
  }

  // Refactor the basis and recompute the basic values.
  void refresh() {
    if (m_ == 0) {
      binv_.resize(0, 0);
      return;
    }
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int i = 0; i < m_; ++i) basis_matrix.col(i) = a_.col(basis_[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!lu.isInvertible()) throw SolverFailure("simplex: singular basis");
    binv_ = lu.inverse();

    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < n_; ++j) {
      if (state_[j] != VarState::Basic && x_[j] != 0.0) rhs -= a_.col(j) * x_[j];
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb(i);
  }

  void count_iteration() {
    if (++iterations_ > opt_.iteration_cap) {
      throw SolverFailure("simplex: iteration cap of " + std::to_string(opt_.iteration_cap) +
                          " reached");
    }
  }

  // Runs to optimality over variables [0, active). Returns false if unbounded.
  bool iterate(const Eigen::VectorXd& cost, int active) {
    for (;;) {
      refresh();
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
      const Eigen::VectorXd y = binv_.transpose() * cb;

      // Bland: lowest-index improving candidate enters.
      int entering = -1;
      double direction = 0.0;
      for (int j = 0; j < active; ++j) {
        const VarState s = state_[j];
        if (s == VarState::Basic || lower_[j] == upper_[j]) continue;
        const double d = cost(j) - y.dot(a_.col(j));
        if (d < -opt_.optimality_tol && (s == VarState::AtLower || s == VarState::FreeZero)) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (d > opt_.optimality_tol && (s == VarState::AtUpper || s == VarState::FreeZero)) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return true;
      count_iteration();

      const Eigen::VectorXd alpha = binv_ * a_.col(entering);
      double step = upper_[entering] - lower_[entering];  // bound flip
      int leave_pos = -1;
      constexpr double kTie = 1e-12;
      for (int i = 0; i < m_; ++i) {
        const int k = basis_[i];
        const double rate = -direction * alpha(i);
        double t = kInf;
        if (rate < -opt_.pivot_tol && std::isfinite(lower_[k])) {
          t = (x_[k] - lower_[k]) / -rate;
        } else if (rate > opt_.pivot_tol && std::isfinite(upper_[k])) {
          t = (upper_[k] - x_[k]) / rate;
        } else {
          continue;
        }
        t = std::max(t, 0.0);
        const double slack = std::isfinite(step) ? kTie * (1.0 + std::abs(step)) : 0.0;
        if (t < step - slack ||
            (leave_pos >= 0 && std::abs(t - step) <= slack && k < basis_[leave_pos])) {
          step = t;
          leave_pos = i;
        }
      }
      if (!std::isfinite(step)) return false;

      if (leave_pos < 0) {
        x_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
        state_[entering] = direction > 0 ? VarState::AtUpper : VarState::AtLower;
        continue;
      }
      const int leaving = basis_[leave_pos];
      const double rate = -direction * alpha(leave_pos);
      if (rate < 0) {
        x_[leaving] = lower_[leaving];
        state_[leaving] = VarState::AtLower;
      } else {
        x_[leaving] = upper_[leaving];
        state_[leaving] = VarState::AtUpper;
      }
      x_[entering] += direction * step;
      state_[entering] = VarState::Basic;
      basis_[leave_pos] = entering;
    }
  }

  // Replace basic artificials (all at zero after a feasible phase one) by
  // structurals or slacks. The slack columns span R^m, so a pivot always exists.
  void drive_out_artificials() {
    for (int pos = 0; pos < m_; ++pos) {
      const int k = basis_[pos];
      if (k < nc_ + m_) continue;
      refresh();
      const Eigen::RowVectorXd rho = binv_.row(pos);
      int best = -1;
      double best_mag = 0.0;
      for (int j = 0; j < nc_ + m_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        const double mag = std::abs(rho.dot(a_.col(j)));
        if (mag > 1e-7) {
          best = j;
          best_mag = mag;
          break;
        }
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best < 0 || best_mag <= opt_.pivot_tol) {
        throw SolverFailure("simplex: cannot remove artificial from basis");
      }
      basis_[pos] = best;
      state_[best] = VarState::Basic;
      state_[k] = VarState::AtLower;
      x_[k] = 0.0;
    }
    for (int i = 0; i < m_; ++i) {
      const int r = nc_ + m_ + i;
      state_[r] = VarState::AtLower;
      x_[r] = 0.0;
      upper_[r] = 0.0;
    }
    refresh();
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  int m_;
  int nc_;
  int n_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  int iterations_ = 0;
};

}  // namespace

LpSolution SimplexBackend::solve(const LinearProgram& lp) const {
  const auto errors = lp.structural_errors();
  if (!errors.empty()) {
    std::string msg = "malformed linear program:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw MalformedProgram(msg);
  }
  return Simplex(lp, options_).run();
}

}  // namespace flexhedge
