#include "rb/cp_general.hpp"

#include "rb/master_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rb {

Vector risk_contributions(const ScenarioMatrix& sm, const Vector& v, const RiskSpec& risk) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) {
            throw std::invalid_argument("risk_contributions: exposure must be positive");
        }
    }
    const RiskEvaluation ev = evaluate_risk(risk, sm, v);
    return v.cwiseProduct(ev.subgradient);
}

namespace {

SolveReport finalize(const ScenarioMatrix& sm, const Vector& v, const RiskSpec& risk,
                     Termination termination) {
    SolveReport rep;
    rep.exposure = v;
    rep.weights = normalize_to_weights(v);
    const RiskEvaluation ev = evaluate_risk(risk, sm, rep.weights);
    rep.risk = ev.value;
    rep.t_star = ev.t_star;
    rep.t_star_scaled = ev.t_star;
    rep.contributions = rep.weights.cwiseProduct(ev.subgradient);
    rep.termination = termination;
    return rep;
}

}  // namespace

SolveReport solve_rb_general(const ScenarioMatrix& sm, const BudgetVector& budgets,
                             const RiskSpec& risk, const SolverConfig& cfg) {
    const Eigen::Index d = sm.n_assets();
    if (budgets.size() != d) {
        throw std::invalid_argument("solve_rb_general: budget dimension mismatch");
    }

    if (d == 1) {
        SolveReport rep = finalize(sm, Vector::Ones(1), risk, Termination::Converged);
        if (rep.risk <= 0.0) rep.termination = Termination::Unbounded;
        rep.iterations = 1;
        return rep;
    }

    // Proportional budgets keep runs with B and cB bitwise identical.
    const BudgetVector b_prop{budgets.proportions()};

    Vector v = Vector::Ones(d);
    // Any cut value over the box is bounded below by -box * sum_i max_j
    // |xi_ji| (zeta is a probability vector, so |subgradient_i| <= max_j
    // |xi_ji|); a moderate z floor keeps the LP well conditioned.
    const double box = cfg.box_bound_for(d);
    const double entry_scale =
        std::max(sm.xi().cwiseAbs().colwise().maxCoeff().sum(), 1e-12);
    const double z_floor = -4.0 * box * entry_scale;
    const double unbounded_floor = 0.5 * z_floor;

    CutStore store(d, /*with_t=*/false, /*z_nonneg=*/false, cfg.floor, box, 0.0, z_floor);

    double z_lb = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> trace;
    MasterResult master;
    for (int k = 1; k <= cfg.max_iterations; ++k) {
        const RiskEvaluation ev = evaluate_risk(risk, sm, v);
        trace.emplace_back(z_lb, ev.value);

        Cut cut;
        cut.coef_v = ev.subgradient;
        cut.coef_t = 0.0;
        cut.intercept = ev.value - ev.subgradient.dot(v);
        store.add_objective_cut(std::move(cut));

        if (ev.value - z_lb < cfg.tolerance) {
            Termination term = Termination::Converged;
            if (master.box_active) {
                term = ev.value < 0.0 ? Termination::Unbounded : Termination::BoxBoundActive;
            }
            SolveReport out = finalize(sm, v, risk, term);
            out.iterations = k;
            out.trace = std::move(trace);
            return out;
        }

        // Gap-adaptive log-constraint refinement, as in the ES driver.
        SolverConfig mcfg = cfg;
        const double rel_gap = (ev.value - z_lb) / entry_scale;
        mcfg.master_feasibility = std::isfinite(rel_gap)
            ? std::clamp(1e-3 * rel_gap, cfg.master_feasibility, 1e-5)
            : 1e-5;
        master = solve_master(store, b_prop, mcfg);
        if (master.status == MasterStatus::Infeasible) {
            throw std::logic_error("solve_rb_general: master LP infeasible (contradictory cuts)");
        }
        if (master.status != MasterStatus::Optimal) {
            SolveReport out = finalize(sm, v, risk, Termination::IterationLimit);
            out.iterations = k;
            out.trace = std::move(trace);
            return out;
        }
        v = master.v;
        z_lb = master.z;
        if (z_lb < unbounded_floor) {
            SolveReport out = finalize(sm, v, risk, Termination::Unbounded);
            out.iterations = k;
            out.trace = std::move(trace);
            return out;
        }
    }
    SolveReport out = finalize(sm, v, risk, Termination::IterationLimit);
    out.iterations = cfg.max_iterations;
    out.trace = std::move(trace);
    return out;
}

}  // namespace rb
