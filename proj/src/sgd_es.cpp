#include "rb/sgd_es.hpp"

#include "rb/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace rb {

namespace {

double log_budget_value(const Vector& v, const Vector& b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) return -std::numeric_limits<double>::infinity();
        s += b[i] * std::log(v[i]);
    }
    return s;
}

}  // namespace

Vector project_log_simplex(const Vector& x, const BudgetVector& budgets) {
    if (x.size() != budgets.size()) {
        throw std::invalid_argument("project_log_simplex: dimension mismatch");
    }
    const Vector& b = budgets.values();
    if (log_budget_value(x, b) >= 0.0) {
        return x;
    }
    auto point_at = [&](double lambda) {
        Vector v(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double root = std::sqrt(x[i] * x[i] + 4.0 * lambda * b[i]);
            // For x_i < 0 the direct root x_i + root cancels catastrophically
            // when lambda * b_i is small; the product form is exact there.
            v[i] = x[i] >= 0.0 ? 0.5 * (x[i] + root)
                               : 2.0 * lambda * b[i] / (root - x[i]);
        }
        return v;
    };
    // phi(lambda) = sum_i B_i log v_i(lambda) is increasing; bracket the
    // root, then Newton with bisection safeguard.
    double lo = 0.0;
    double hi = std::max(1.0, x.cwiseAbs().maxCoeff());
    while (log_budget_value(point_at(hi), b) < 0.0) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e300) {
            throw std::runtime_error("project_log_simplex: bracketing failed");
        }
    }
    double lambda = hi;
    const double tol = 1e-13 * std::max(1.0, b.sum());
    for (int it = 0; it < 200; ++it) {
        const Vector v = point_at(lambda);
        const double phi = log_budget_value(v, b);
        if (std::abs(phi) <= tol) break;
        (phi < 0.0 ? lo : hi) = lambda;
        double dphi = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double root = std::sqrt(x[i] * x[i] + 4.0 * lambda * b[i]);
            dphi += b[i] * b[i] / (root * v[i]);
        }
        double next = lambda - phi / dphi;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        lambda = next;
    }
    return point_at(lambda);
}

namespace {

SolveReport run_sgd(const std::function<Vector(Rng&)>& draw, Eigen::Index d,
                    const BudgetVector& budgets, double alpha, const SGDConfig& cfg,
                    const ScenarioMatrix& eval_sm, double loss_scale) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("solve_rb_es_sgd: alpha must lie in [0, 1)");
    }
    if (cfg.n_iterations < 1 || cfg.batch_size < 1) {
        throw std::invalid_argument("solve_rb_es_sgd: invalid iteration/batch configuration");
    }
    const double step_a =
        cfg.step_a > 0.0 ? cfg.step_a : 1.0 / (static_cast<double>(d) * loss_scale);

    // Proportional budgets keep runs with B and cB numerically identical.
    const BudgetVector b_prop{budgets.proportions()};

    Rng rng(cfg.seed);
    Vector v = Vector::Ones(d);
    double t = 0.0;
    Vector v_sum = Vector::Zero(d);
    double t_sum = 0.0;
    long n_averaged = 0;
    const long burn_in = static_cast<long>(cfg.burn_in_fraction * cfg.n_iterations);
    const double inv_tail = 1.0 / (1.0 - alpha);

    std::vector<std::pair<double, double>> trace;
    const long trace_every =
        cfg.trace_points > 0 ? std::max<long>(1, cfg.n_iterations / cfg.trace_points) : 0;

    Vector grad_v(d);
    for (long k = 1; k <= cfg.n_iterations; ++k) {
        grad_v.setZero();
        double grad_t = 0.0;
        for (int s = 0; s < cfg.batch_size; ++s) {
            const Vector xi = draw(rng);
            if (xi.dot(v) > t) {
                grad_v += xi * inv_tail;
                grad_t -= inv_tail;
            }
        }
        const double inv_batch = 1.0 / cfg.batch_size;
        grad_v *= inv_batch;
        grad_t = grad_t * inv_batch + 1.0;  // shift for the t term of the objective

        double step;
        switch (cfg.schedule) {
            case StepSchedule::Constant: step = step_a; break;
            case StepSchedule::InverseSqrt: step = step_a / std::sqrt(static_cast<double>(k)); break;
            case StepSchedule::Inverse: step = step_a / (cfg.step_b + static_cast<double>(k)); break;
            default: step = step_a;
        }

        v -= step * grad_v;
        t -= step * grad_t;
        v = project_log_simplex(v, b_prop);

        if (k > burn_in) {
            v_sum += v;
            t_sum += t;
            ++n_averaged;
        }
        if (trace_every > 0 && k % trace_every == 0 && n_averaged > 0) {
            const Vector w_now = (v_sum / n_averaged) / (v_sum.sum() / n_averaged);
            const double obj =
                es_sample(portfolio_losses(eval_sm, w_now), alpha).value;
            trace.emplace_back(static_cast<double>(k), obj);
        }
    }

    const Vector v_avg = v_sum / static_cast<double>(n_averaged);
    const double t_avg = t_sum / static_cast<double>(n_averaged);

    SolveReport rep;
    rep.exposure = v_avg;
    rep.weights = normalize_to_weights(v_avg);
    rep.t_star = t_avg;
    rep.t_star_scaled = t_avg / v_avg.sum();
    const RiskEvaluation ev = evaluate_risk(RiskSpec::es(alpha), eval_sm, rep.weights);
    rep.risk = ev.value;
    rep.contributions = rep.weights.cwiseProduct(ev.subgradient);
    rep.iterations = static_cast<int>(std::min<long>(cfg.n_iterations, 1L << 30));
    rep.trace = std::move(trace);
    rep.termination = Termination::Converged;  // stopping is by iteration budget
    return rep;
}

}  // namespace

SolveReport solve_rb_es_sgd(const ScenarioMatrix& sm, const BudgetVector& budgets, double alpha,
                            const SGDConfig& cfg) {
    const Eigen::Index d = sm.n_assets();
    if (budgets.size() != d) {
        throw std::invalid_argument("solve_rb_es_sgd: budget dimension mismatch");
    }
    const Eigen::Index n = sm.n_scenarios();
    const double loss_scale =
        std::max(portfolio_losses(sm, Vector::Ones(d)).cwiseAbs().maxCoeff(), 1e-12);
    auto draw = [&sm, n](Rng& rng) -> Vector {
        const auto j = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
        return sm.xi().row(std::min(j, n - 1)).transpose();
    };
    return run_sgd(draw, d, budgets, alpha, cfg, sm, loss_scale);
}

SolveReport solve_rb_es_sgd(const ScenarioSampler& sampler, Eigen::Index d,
                            const BudgetVector& budgets, double alpha, const SGDConfig& cfg) {
    if (budgets.size() != d) {
        throw std::invalid_argument("solve_rb_es_sgd: budget dimension mismatch");
    }
    // A separate stream builds the evaluation matrix so the optimization
    // path is unaffected by its size.
    Rng eval_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    Matrix eval(cfg.eval_scenarios, d);
    double loss_scale = 1e-12;
    for (Eigen::Index j = 0; j < cfg.eval_scenarios; ++j) {
        eval.row(j) = sampler(eval_rng).transpose();
        loss_scale = std::max(loss_scale, std::abs(eval.row(j).sum()));
    }
    const ScenarioMatrix eval_sm(std::move(eval));
    auto draw = [&sampler](Rng& rng) { return sampler(rng); };
    return run_sgd(draw, d, budgets, alpha, cfg, eval_sm, loss_scale);
}

}  // namespace rb
