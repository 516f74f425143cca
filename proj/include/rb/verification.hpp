#pragma once

#include "rb/risk_measures.hpp"
#include "rb/types.hpp"

namespace rb {

/// Residuals of the risk-budgeting conditions at a candidate exposure:
/// all pairwise |B_i RC_j - B_j RC_i| (scale-normalized) and the Euler
/// identity |sum RC - rho|.
struct RbConditionReport {
    double max_pairwise_residual = 0.0;
    double euler_residual = 0.0;
    Vector contributions;
    double risk = 0.0;
    bool pass = false;
};

RbConditionReport check_rb_conditions(const ScenarioMatrix& sm, const Vector& v,
                                      const BudgetVector& budgets, const RiskSpec& risk,
                                      double tol);

/// Scale-normalized pairwise residual for externally computed
/// contributions (e.g. Gaussian closed forms).
double rb_pairwise_residual(const Vector& contributions, const BudgetVector& budgets);

/// Two-asset Gaussian oracle: bisection on w_1 for
/// RC_1(w)/b_1 = RC_2(w)/b_2 using the exact closed-form contributions.
Vector gaussian_rb_bisection(const Vector& mu, const Matrix& sigma, const BudgetVector& budgets,
                             RiskKind kind, double alpha);

/// Small-d Gaussian oracle: damped fixed-point iteration
/// v_i <- b_i * rho(v) / MR_i(v), iterated to 1e-10 and normalized.
/// Damping halves on oscillation.
Vector fixed_point_small_d(const Vector& mu, const Matrix& sigma, const BudgetVector& budgets,
                           RiskKind kind, double alpha);

}  // namespace rb
