#include "rb/cp_es.hpp"

#include "rb/master_problem.hpp"
#include "rb/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rb {

QEvaluation evaluate_Q(const ScenarioMatrix& sm, const Vector& v, double t, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("evaluate_Q: alpha must lie in [0, 1)");
    }
    const Eigen::Index n = sm.n_scenarios();
    const Eigen::Index d = sm.n_assets();
    const Vector losses = portfolio_losses(sm, v);
    const double scale = 1.0 / (static_cast<double>(n) * (1.0 - alpha));

    QEvaluation out;
    out.grad_v = Vector::Zero(d);
    Eigen::Index exceed = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double excess = losses[j] - t;
        if (excess > 0.0) {
            // Scenarios exactly at t contribute zero (subgradient selection).
            out.q += excess;
            out.grad_v += sm.xi().row(j).transpose();
            ++exceed;
        }
    }
    out.q *= scale;
    out.grad_v *= scale;
    out.grad_t = -static_cast<double>(exceed) * scale;
    return out;
}

namespace {

SolveReport finalize(const ScenarioMatrix& sm, const Vector& v, double t, double alpha,
                     Termination termination) {
    SolveReport rep;
    rep.exposure = v;
    rep.weights = normalize_to_weights(v);
    rep.t_star = t;
    rep.t_star_scaled = t / v.sum();
    const RiskEvaluation ev = evaluate_risk(RiskSpec::es(alpha), sm, rep.weights);
    rep.risk = ev.value;
    rep.contributions = rep.weights.cwiseProduct(ev.subgradient);
    rep.termination = termination;
    return rep;
}

}  // namespace

SolveReport solve_rb_es(const ScenarioMatrix& sm, const BudgetVector& budgets, double alpha,
                        const SolverConfig& cfg) {
    const Eigen::Index d = sm.n_assets();
    if (budgets.size() != d) {
        throw std::invalid_argument("solve_rb_es: budget dimension mismatch");
    }
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("solve_rb_es: alpha must lie in [0, 1)");
    }

    if (d == 1) {
        // Single asset: v = 1 is the unique feasible boundary point.
        SolveReport rep = finalize(sm, Vector::Ones(1), 0.0, alpha, Termination::Converged);
        const TailEvaluation ev = es_sample(portfolio_losses(sm, rep.weights), alpha);
        rep.t_star = ev.t_star;
        rep.t_star_scaled = ev.t_star;
        if (rep.risk <= 0.0) rep.termination = Termination::Unbounded;
        rep.iterations = 1;
        return rep;
    }

    // Budgets in proportional form: the log constraint is invariant under
    // budget scaling, so this makes runs with B and cB bitwise identical.
    const BudgetVector b_prop{budgets.proportions()};

    Vector v = Vector::Ones(d);
    double t = 0.0;
    const Vector start_losses = portfolio_losses(sm, v);
    const double loss_scale =
        std::max(start_losses.cwiseAbs().maxCoeff(), 1e-12);
    double t_bound = 10.0 * loss_scale;

    CutStore store(d, /*with_t=*/true, /*z_nonneg=*/true, cfg.floor, cfg.box_bound_for(d),
                   t_bound, 0.0);

    double z_lb = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> trace;
    MasterResult master;
    for (int k = 1; k <= cfg.max_iterations; ++k) {
        const QEvaluation qe = evaluate_Q(sm, v, t, alpha);
        trace.emplace_back(z_lb, qe.q);

        Cut cut;
        cut.coef_v = qe.grad_v;
        cut.coef_t = qe.grad_t;
        cut.intercept = qe.q - qe.grad_v.dot(v) - qe.grad_t * t;
        store.add_objective_cut(std::move(cut));

        if (qe.q - z_lb < cfg.tolerance) {
            Termination term = Termination::Converged;
            if (master.box_active) {
                term = (t + qe.q < 0.0) ? Termination::Unbounded : Termination::BoxBoundActive;
            }
            SolveReport out = finalize(sm, v, t, alpha, term);
            out.iterations = k;
            out.trace = std::move(trace);
            return out;
        }

        // Tighten the master's log-constraint refinement with the outer
        // gap: early masters only need a rough position, the final ones set
        // the solution accuracy. Normalizing by the loss scale keeps the
        // iterate path invariant under scenario scaling.
        SolverConfig mcfg = cfg;
        const double rel_gap = (qe.q - z_lb) / loss_scale;
        mcfg.master_feasibility = std::isfinite(rel_gap)
            ? std::clamp(1e-3 * rel_gap, cfg.master_feasibility, 1e-5)
            : 1e-5;
        master = solve_master(store, b_prop, mcfg);
        if (master.status == MasterStatus::Infeasible) {
            throw std::logic_error("solve_rb_es: master LP infeasible (contradictory cuts)");
        }
        if (master.status != MasterStatus::Optimal) {
            SolveReport out = finalize(sm, v, t, alpha, Termination::IterationLimit);
            out.iterations = k;
            out.trace = std::move(trace);
            return out;
        }
        v = master.v;
        t = master.t;
        z_lb = master.z;
        // Enlarge the t box if the optimizer presses against it.
        if (std::abs(t) > 0.95 * t_bound) {
            t_bound *= 4.0;
            store.set_t_bound(t_bound);
        }
    }
    SolveReport out = finalize(sm, v, t, alpha, Termination::IterationLimit);
    out.iterations = cfg.max_iterations;
    out.trace = std::move(trace);
    return out;
}

}  // namespace rb
