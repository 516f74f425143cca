#pragma once

#include "rb/types.hpp"

namespace rb {

/// Value and subgradient of the scenario-decomposed second stage
/// Q(v, t) = (1/(N(1-alpha))) sum_j (xi_j^T v - t)_+.
struct QEvaluation {
    double q = 0.0;
    Vector grad_v;
    double grad_t = 0.0;
};

QEvaluation evaluate_Q(const ScenarioMatrix& sm, const Vector& v, double t, double alpha);

/// Cutting planes for risk-budgeting portfolios under Expected Shortfall:
/// alternates second-stage evaluation of Q with the master problem until
/// the gap q - z_LB drops below the tolerance.
SolveReport solve_rb_es(const ScenarioMatrix& sm, const BudgetVector& budgets, double alpha,
                        const SolverConfig& cfg);

}  // namespace rb
