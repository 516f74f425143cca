#pragma once

#include "rb/lp.hpp"
#include "rb/types.hpp"

#include <iosfwd>
#include <vector>

namespace rb {

/// One linear under-estimator of the second stage:
/// z >= intercept + coef_v^T v + coef_t * t.
struct Cut {
    double intercept = 0.0;
    Vector coef_v;
    double coef_t = 0.0;  // zero in general-rho mode
};

/// Tangent outer-approximation of sum_i B_i log v_i >= 0: a^T v >= rhs.
struct LogCut {
    Vector a;
    double rhs = 0.0;
};

/// Accumulated cuts and bounds defining the master LP. ES mode carries the
/// extra variable t and the stabilizing z >= 0 constraint; general-rho mode
/// has neither.
class CutStore {
  public:
    CutStore(Eigen::Index d, bool with_t, bool z_nonneg, double floor, double box_bound,
             double t_bound, double z_lower);

    Eigen::Index n_assets() const { return d_; }
    bool with_t() const { return with_t_; }

    void add_objective_cut(Cut cut);

    /// Adds a tangent log cut at a point v0 > 0 (skipped when v0 is within
    /// 1e-8 of a previous linearization point). Returns false on skip.
    bool add_log_cut(const Vector& v0, const BudgetVector& budgets);

    const std::vector<Cut>& objective_cuts() const { return cuts_; }
    const std::vector<LogCut>& log_cuts() const { return log_cuts_; }

    double floor() const { return floor_; }
    double box_bound() const { return box_bound_; }
    double t_bound() const { return t_bound_; }
    void set_t_bound(double t_bound) { t_bound_ = t_bound; }
    double z_lower() const { return z_lower_; }
    bool z_nonneg() const { return z_nonneg_; }

    /// Line-oriented plain-text dump of the master inequalities.
    void dump(std::ostream& out) const;

    /// Rows (objective cuts first, log cuts after) that were active or
    /// nearly active at the last master optimum. Purely a warm-start cache
    /// for the next solve; not part of the logical problem.
    std::vector<Eigen::Index>& hot_rows() { return hot_rows_; }

  private:
    Eigen::Index d_;
    bool with_t_;
    bool z_nonneg_;
    double floor_, box_bound_, t_bound_, z_lower_;
    std::vector<Cut> cuts_;
    std::vector<LogCut> log_cuts_;
    std::vector<Vector> log_points_;
    std::vector<Eigen::Index> hot_rows_;
};

enum class MasterStatus { Optimal, Infeasible, InnerIterationLimit, Unbounded };

struct MasterResult {
    Vector v;
    double t = 0.0;
    double z = 0.0;
    MasterStatus status = MasterStatus::Optimal;
    bool box_active = false;       // some v_i at the upper box bound
    double floor_distance = 0.0;   // min_i (v_i - floor), interference diagnostic
    int kelley_iterations = 0;
    int lp_solves = 0;
};

/// Minimizes (t +) z over the objective cuts, the Kelley-linearized log
/// budget constraint, and box bounds. New tangent cuts are appended to the
/// store until the true constraint is violated by at most 1e-9.
MasterResult solve_master(CutStore& store, const BudgetVector& budgets,
                          const SolverConfig& cfg);

}  // namespace rb
