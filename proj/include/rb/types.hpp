#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// N x d matrix of per-scenario, per-asset loss factors. Row j holds the
/// loss factor vector of scenario j; the portfolio loss in scenario j is
/// the inner product of that row with the exposure vector.
class ScenarioMatrix {
  public:
    ScenarioMatrix(Matrix xi);

    Eigen::Index n_scenarios() const { return xi_.rows(); }
    Eigen::Index n_assets() const { return xi_.cols(); }
    const Matrix& xi() const { return xi_; }

  private:
    Matrix xi_;
};

/// Strictly positive risk budgets B_i (dollars of risk, or proportions).
class BudgetVector {
  public:
    explicit BudgetVector(Vector budgets);

    /// Equal budgets summing to one.
    static BudgetVector equal(Eigen::Index d);

    Eigen::Index size() const { return budgets_.size(); }
    const Vector& values() const { return budgets_; }
    double total() const { return budgets_.sum(); }

    /// Proportional form b = B / sum(B); sums to one.
    Vector proportions() const { return budgets_ / budgets_.sum(); }

  private:
    Vector budgets_;
};

enum class RiskKind { ExpectedShortfall, EntropicVaR, Distortion };

enum class Termination { Converged, IterationLimit, BoxBoundActive, Unbounded };

std::string to_string(Termination t);

struct SolverConfig {
    double tolerance = 1e-6;
    int max_iterations = 500;
    /// Upper box bound on each exposure; <= 0 means the default 1e3 * d.
    double box_bound = 0.0;
    /// Lower floor on each exposure inside the master problem.
    double floor = 1e-6;
    /// Feasibility target for the Kelley refinement of the log constraint
    /// inside the master. The cutting-plane drivers tighten it as the outer
    /// optimality gap shrinks, so early masters stay cheap.
    double master_feasibility = 1e-9;
    std::uint64_t rng_seed = 0;

    double box_bound_for(Eigen::Index d) const {
        return box_bound > 0.0 ? box_bound : 1e3 * static_cast<double>(d);
    }
};

struct SolveReport {
    Vector weights;        // normalized solution, sums to one
    Vector exposure;       // raw optimal point v*
    double t_star = 0.0;   // auxiliary variable at v* (VaR proxy for ES)
    double t_star_scaled = 0.0;  // t* / sum(v*), the VaR proxy at the weights
    double risk = 0.0;           // rho(L(w)) on the scenario set
    Vector contributions;        // RC_i at the weights
    int iterations = 0;
    std::vector<std::pair<double, double>> trace;  // (lower bound z, upper value q)
    Termination termination = Termination::Converged;
};

/// Per-scenario portfolio losses: xi * v.
Vector portfolio_losses(const ScenarioMatrix& sm, const Vector& v);

/// Rescales a positive exposure so that its entries sum to one.
Vector normalize_to_weights(const Vector& v);

/// Scales v so that the risk of the scaled portfolio equals the risk
/// appetite B-dagger (positive homogeneity). Throws if risk_at_v <= 0,
/// which corresponds to the unbounded case.
Vector scale_to_risk_appetite(const Vector& v, double risk_at_v, double b_dagger);

}  // namespace rb
