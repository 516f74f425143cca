#pragma once

#include "rb/risk_measures.hpp"
#include "rb/types.hpp"

namespace rb {

/// General cutting planes for any coherent risk measure exposed by the
/// risk evaluators: the auxiliary variable z under-approximates the whole
/// objective rho(L(v)).
SolveReport solve_rb_general(const ScenarioMatrix& sm, const BudgetVector& budgets,
                             const RiskSpec& risk, const SolverConfig& cfg);

/// RC_i = v_i * g_i with g the subgradient of v -> rho(L(v)) at v.
Vector risk_contributions(const ScenarioMatrix& sm, const Vector& v, const RiskSpec& risk);

}  // namespace rb
