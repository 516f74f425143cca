#include "rb/verification.hpp"

#include <cmath>
#include <limits>

namespace rb {

double rb_pairwise_residual(const Vector& contributions, const BudgetVector& budgets) {
    const Eigen::Index d = contributions.size();
    if (budgets.size() != d) {
        throw std::invalid_argument("rb_pairwise_residual: dimension mismatch");
    }
    const double total = contributions.sum();
    const double scale = std::max(std::abs(total), contributions.cwiseAbs().sum());
    if (scale <= 0.0) return 0.0;
    const Vector nrc = contributions / scale;
    const Vector b = budgets.proportions();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            worst = std::max(worst, std::abs(b[i] * nrc[j] - b[j] * nrc[i]));
        }
    }
    return worst;
}

RbConditionReport check_rb_conditions(const ScenarioMatrix& sm, const Vector& v,
                                      const BudgetVector& budgets, const RiskSpec& risk,
                                      double tol) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) {
            throw std::invalid_argument("check_rb_conditions: exposure must be positive");
        }
    }
    const RiskEvaluation ev = evaluate_risk(risk, sm, v);
    RbConditionReport rep;
    rep.contributions = v.cwiseProduct(ev.subgradient);
    rep.risk = ev.value;
    rep.max_pairwise_residual = rb_pairwise_residual(rep.contributions, budgets);
    rep.euler_residual =
        std::abs(rep.contributions.sum() - ev.value) / std::max(1.0, std::abs(ev.value));
    rep.pass = rep.max_pairwise_residual <= tol && rep.euler_residual <= tol;
    return rep;
}

Vector gaussian_rb_bisection(const Vector& mu, const Matrix& sigma, const BudgetVector& budgets,
                             RiskKind kind, double alpha) {
    if (mu.size() != 2 || budgets.size() != 2) {
        throw std::invalid_argument("gaussian_rb_bisection: oracle is two-asset only");
    }
    const Vector b = budgets.proportions();
    auto imbalance = [&](double w1) {
        Vector w(2);
        w << w1, 1.0 - w1;
        const Vector mr = gaussian_marginal_risks(mu, sigma, w, alpha, kind);
        return w[0] * mr[0] / b[0] - w[1] * mr[1] / b[1];
    };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    double f_lo = imbalance(lo), f_hi = imbalance(hi);
    if (f_lo == 0.0) return (Vector(2) << lo, 1.0 - lo).finished();
    if (f_hi == 0.0) return (Vector(2) << hi, 1.0 - hi).finished();
    if (f_lo * f_hi > 0.0) {
        throw std::runtime_error("gaussian_rb_bisection: no sign change on (0, 1)");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = imbalance(mid);
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if (f_lo * f_mid < 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    const double w1 = 0.5 * (lo + hi);
    return (Vector(2) << w1, 1.0 - w1).finished();
}

Vector fixed_point_small_d(const Vector& mu, const Matrix& sigma, const BudgetVector& budgets,
                           RiskKind kind, double alpha) {
    const Eigen::Index d = mu.size();
    if (d > 10) {
        throw std::invalid_argument("fixed_point_small_d: oracle limited to d <= 10");
    }
    if (budgets.size() != d) {
        throw std::invalid_argument("fixed_point_small_d: dimension mismatch");
    }
    const Vector b = budgets.proportions();
    Vector v = Vector::Constant(d, 1.0 / static_cast<double>(d));
    double damping = 0.5;
    double prev_residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 20000; ++it) {
        const Vector mr = gaussian_marginal_risks(mu, sigma, v, alpha, kind);
        for (Eigen::Index i = 0; i < d; ++i) {
            if (!(mr[i] > 0.0)) {
                throw std::runtime_error(
                    "fixed_point_small_d: nonpositive marginal risk, iteration cannot proceed");
            }
        }
        const double rho = v.dot(mr);
        Vector target = (b * rho).cwiseQuotient(mr);
        target /= target.sum();
        Vector next = (1.0 - damping) * v + damping * target;
        next /= next.sum();
        const double residual = (next - v).lpNorm<Eigen::Infinity>();
        v = next;
        if (residual < 1e-10) return v;
        if (residual > prev_residual) {
            damping *= 0.5;
            if (damping < 1e-6) {
                throw std::runtime_error("fixed_point_small_d: divergence at extreme budgets");
            }
        }
        prev_residual = residual;
    }
    throw std::runtime_error("fixed_point_small_d: did not converge");
}

}  // namespace rb
