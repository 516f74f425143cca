#pragma once

#include "rb/rng.hpp"
#include "rb/types.hpp"

#include <functional>

namespace rb {

enum class StepSchedule { Constant, InverseSqrt, Inverse };

struct SGDConfig {
    long n_iterations = 100000;
    StepSchedule schedule = StepSchedule::InverseSqrt;
    double step_a = 0.0;  // <= 0 picks the default 1 / (d * loss-scale)
    double step_b = 1.0;  // only for the a/(b+k) schedule
    int batch_size = 1;
    std::uint64_t seed = 0;
    /// Fraction of iterations discarded before averaging starts. Zero
    /// averages every post-projection iterate.
    double burn_in_fraction = 0.0;
    /// Number of objective snapshots recorded in the report trace
    /// (as (iteration, objective estimate) pairs). Zero disables.
    int trace_points = 0;
    /// Scenario count for the reporting evaluation in sampler mode.
    Eigen::Index eval_scenarios = 10000;
};

/// Euclidean projection onto {v > 0 : sum_i B_i log v_i >= 0}. Feasible
/// points are returned unchanged; otherwise the unique multiplier lambda
/// with v_i = (x_i + sqrt(x_i^2 + 4 lambda B_i)) / 2 on the boundary is
/// found by safeguarded Newton.
Vector project_log_simplex(const Vector& x, const BudgetVector& budgets);

/// Projected stochastic gradient descent for the ES risk-budgeting
/// problem, SAA mode: one uniform draw (with replacement) from the fixed
/// scenario matrix per step. Returns the average of the post-projection
/// iterates, normalized to weights.
SolveReport solve_rb_es_sgd(const ScenarioMatrix& sm, const BudgetVector& budgets, double alpha,
                            const SGDConfig& cfg);

/// Fresh-sampling mode: `sampler` yields one iid loss-factor vector per
/// call. The report's risk and contributions are computed on a freshly
/// drawn evaluation matrix of cfg.eval_scenarios rows.
using ScenarioSampler = std::function<Vector(Rng&)>;
SolveReport solve_rb_es_sgd(const ScenarioSampler& sampler, Eigen::Index d,
                            const BudgetVector& budgets, double alpha, const SGDConfig& cfg);

}  // namespace rb
