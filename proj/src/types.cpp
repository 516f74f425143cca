#include "rb/types.hpp"

namespace rb {

ScenarioMatrix::ScenarioMatrix(Matrix xi) : xi_(std::move(xi)) {
    if (xi_.rows() < 1 || xi_.cols() < 1) {
        throw std::invalid_argument("ScenarioMatrix: need at least one scenario and one asset");
    }
    if (!xi_.allFinite()) {
        throw std::invalid_argument("ScenarioMatrix: non-finite entry");
    }
}

BudgetVector::BudgetVector(Vector budgets) : budgets_(std::move(budgets)) {
    if (budgets_.size() < 1) {
        throw std::invalid_argument("BudgetVector: empty");
    }
    for (Eigen::Index i = 0; i < budgets_.size(); ++i) {
        if (!(budgets_[i] > 0.0) || !std::isfinite(budgets_[i])) {
            throw std::invalid_argument("BudgetVector: budget " + std::to_string(i) +
                                        " must be strictly positive");
        }
    }
}

BudgetVector BudgetVector::equal(Eigen::Index d) {
    return BudgetVector(Vector::Constant(d, 1.0 / static_cast<double>(d)));
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "Converged";
        case Termination::IterationLimit: return "IterationLimit";
        case Termination::BoxBoundActive: return "BoxBoundActive";
        case Termination::Unbounded: return "Unbounded";
    }
    return "Unknown";
}

Vector portfolio_losses(const ScenarioMatrix& sm, const Vector& v) {
    if (v.size() != sm.n_assets()) {
        throw std::invalid_argument("portfolio_losses: exposure has " + std::to_string(v.size()) +
                                    " entries, scenarios have " + std::to_string(sm.n_assets()) +
                                    " assets");
    }
    return sm.xi() * v;
}

Vector normalize_to_weights(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) {
            throw std::invalid_argument("normalize_to_weights: nonpositive entry at index " +
                                        std::to_string(i));
        }
    }
    return v / v.sum();
}

Vector scale_to_risk_appetite(const Vector& v, double risk_at_v, double b_dagger) {
    if (!(b_dagger > 0.0)) {
        throw std::invalid_argument("scale_to_risk_appetite: risk appetite must be positive");
    }
    if (!(risk_at_v > 0.0)) {
        // Nonpositive risk means the budgeting problem has no optimal
        // solution: scaling up the exposure keeps feasibility while
        // decreasing the objective without bound.
        throw std::domain_error("scale_to_risk_appetite: nonpositive portfolio risk (unbounded)");
    }
    return (b_dagger / risk_at_v) * v;
}

}  // namespace rb
