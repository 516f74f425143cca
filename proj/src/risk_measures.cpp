#include "rb/risk_measures.hpp"

#include "rb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rb {

RiskSpec RiskSpec::es(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("RiskSpec::es: alpha must lie in [0, 1)");
    }
    return RiskSpec{RiskKind::ExpectedShortfall, alpha, std::nullopt};
}

RiskSpec RiskSpec::evar(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("RiskSpec::evar: alpha must lie in [0, 1)");
    }
    return RiskSpec{RiskKind::EntropicVaR, alpha, std::nullopt};
}

RiskSpec RiskSpec::distortion(GammaFn gamma) {
    return RiskSpec{RiskKind::Distortion, 0.0, std::move(gamma)};
}

namespace {

std::vector<Eigen::Index> ascending_order(const Vector& losses) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(losses.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return losses[a] < losses[b]; });
    return order;
}

/// Shared sorted-bucket evaluation: weights the j-th order statistic by
/// the gamma mass of ((j-1)/N, j/N]. Used by both the ES and general
/// distortion paths so the two agree bitwise.
DistortionEvaluation sorted_bucket_eval(const Vector& losses, const GammaFn& gamma) {
    const Eigen::Index n = losses.size();
    const auto order = ascending_order(losses);
    Vector zeta = Vector::Zero(n);
    double value = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double w = gamma.mass(static_cast<double>(j) * inv_n,
                                    static_cast<double>(j + 1) * inv_n);
        zeta[order[static_cast<std::size_t>(j)]] = w;
        value += w * losses[order[static_cast<std::size_t>(j)]];
    }
    return DistortionEvaluation{value, std::move(zeta)};
}

}  // namespace

TailEvaluation es_sample(const Vector& losses, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("es_sample: alpha must lie in [0, 1)");
    }
    if (losses.size() < 1) {
        throw std::invalid_argument("es_sample: empty sample");
    }
    const Eigen::Index n = losses.size();
    DistortionEvaluation ev = sorted_bucket_eval(losses, GammaFn::expected_shortfall(alpha));
    const auto order = ascending_order(losses);
    const auto k = static_cast<Eigen::Index>(
        std::max<double>(1.0, std::ceil(alpha * static_cast<double>(n))));
    const double t_star = losses[order[static_cast<std::size_t>(k - 1)]];
    return TailEvaluation{ev.value, t_star, std::move(ev.zeta)};
}

namespace {

// t * log((1/(1-alpha)) * mean exp(l/t)) in log-sum-exp form.
double evar_objective(const Vector& losses, double max_loss, double log_ratio, double t) {
    const Eigen::Index n = losses.size();
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        s += std::exp((losses[j] - max_loss) / t);
    }
    return max_loss + t * (log_ratio + std::log(s / static_cast<double>(n)));
}

}  // namespace

TailEvaluation evar_sample(const Vector& losses, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("evar_sample: alpha must lie in [0, 1)");
    }
    if (losses.size() < 1) {
        throw std::invalid_argument("evar_sample: empty sample");
    }
    const Eigen::Index n = losses.size();
    if (alpha == 0.0) {
        // The infimum is approached as t grows and equals the mean.
        return TailEvaluation{losses.mean(), std::numeric_limits<double>::infinity(),
                              Vector::Constant(n, 1.0 / static_cast<double>(n))};
    }
    const double max_loss = losses.maxCoeff();
    const double min_loss = losses.minCoeff();
    const double scale = std::max({std::abs(max_loss), std::abs(min_loss), 1e-300});
    const double log_ratio = -std::log1p(-alpha);
    auto f = [&](double t) { return evar_objective(losses, max_loss, log_ratio, t); };

    double lo = 1e-12 * scale;
    double hi = std::max(scale, lo * 4.0);
    // Expand until the bracket contains the minimizer (f grows past it).
    double f_hi = f(hi);
    for (int i = 0; i < 200; ++i) {
        const double f_hi2 = f(2.0 * hi);
        if (f_hi2 > f_hi) break;
        hi *= 2.0;
        f_hi = f_hi2;
    }
    // Golden-section search on the convex objective.
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-10 * b + 1e-300) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double t_star = 0.5 * (a + b);
    const double value = f(t_star);
    if (!std::isfinite(value)) {
        throw std::runtime_error("evar_sample: objective overflowed despite log-sum-exp");
    }
    Vector zeta(n);
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        zeta[j] = std::exp((losses[j] - max_loss) / t_star);
        total += zeta[j];
    }
    zeta /= total;
    return TailEvaluation{value, t_star, std::move(zeta)};
}

DistortionEvaluation distortion_sample(const Vector& losses, const GammaFn& gamma) {
    if (losses.size() < 1) {
        throw std::invalid_argument("distortion_sample: empty sample");
    }
    return sorted_bucket_eval(losses, gamma);
}

RiskEvaluation evaluate_risk(const RiskSpec& spec, const ScenarioMatrix& sm, const Vector& v) {
    const Vector losses = portfolio_losses(sm, v);
    RiskEvaluation out;
    switch (spec.kind) {
        case RiskKind::ExpectedShortfall: {
            TailEvaluation ev = es_sample(losses, spec.alpha);
            out.value = ev.value;
            out.t_star = ev.t_star;
            out.zeta = std::move(ev.zeta);
            break;
        }
        case RiskKind::EntropicVaR: {
            TailEvaluation ev = evar_sample(losses, spec.alpha);
            out.value = ev.value;
            out.t_star = ev.t_star;
            out.zeta = std::move(ev.zeta);
            break;
        }
        case RiskKind::Distortion: {
            if (!spec.gamma) {
                throw std::invalid_argument("evaluate_risk: distortion spec without gamma");
            }
            DistortionEvaluation ev = distortion_sample(losses, *spec.gamma);
            out.value = ev.value;
            out.zeta = std::move(ev.zeta);
            break;
        }
    }
    out.subgradient = sm.xi().transpose() * out.zeta;
    return out;
}

double es_kappa(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("es_kappa: alpha must lie in [0, 1)");
    }
    if (alpha == 0.0) return 0.0;
    return norm_pdf(norm_quantile(alpha)) / (1.0 - alpha);
}

double evar_kappa(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("evar_kappa: alpha must lie in [0, 1)");
    }
    return std::sqrt(-2.0 * std::log1p(-alpha));
}

double es_gaussian(double mu_l, double sigma_l, double alpha) {
    if (sigma_l < 0.0) {
        throw std::invalid_argument("es_gaussian: sigma must be nonnegative");
    }
    return mu_l + es_kappa(alpha) * sigma_l;
}

double evar_gaussian(double mu_l, double sigma_l, double alpha) {
    if (sigma_l < 0.0) {
        throw std::invalid_argument("evar_gaussian: sigma must be nonnegative");
    }
    return mu_l + evar_kappa(alpha) * sigma_l;
}

Vector gaussian_marginal_risks(const Vector& mu, const Matrix& sigma, const Vector& v,
                               double alpha, RiskKind kind) {
    if (mu.size() != v.size() || sigma.rows() != v.size() || sigma.cols() != v.size()) {
        throw std::invalid_argument("gaussian_marginal_risks: dimension mismatch");
    }
    double kappa;
    switch (kind) {
        case RiskKind::ExpectedShortfall: kappa = es_kappa(alpha); break;
        case RiskKind::EntropicVaR: kappa = evar_kappa(alpha); break;
        default:
            throw std::invalid_argument(
                "gaussian_marginal_risks: closed forms exist only for ES and EVaR");
    }
    const Vector sv = sigma * v;
    const double var_l = v.dot(sv);
    if (!(var_l > 0.0)) {
        throw std::invalid_argument("gaussian_marginal_risks: zero portfolio variance");
    }
    const double sigma_l = std::sqrt(var_l);
    return -mu + (kappa / sigma_l) * sv;
}

Vector distortion_marginal_risks_mc(const ScenarioMatrix& sm, const Vector& v,
                                    const GammaFn& gamma) {
    const Eigen::Index n = sm.n_scenarios();
    if (n < 2) {
        throw std::invalid_argument("distortion_marginal_risks_mc: need at least 2 scenarios");
    }
    const Vector losses = portfolio_losses(sm, v);
    const auto order = ascending_order(losses);
    // rank/(N+1) keeps the gamma arguments interior.
    Vector weights(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        weights[order[static_cast<std::size_t>(r)]] =
            gamma.density(static_cast<double>(r + 1) / static_cast<double>(n + 1));
    }
    return (sm.xi().transpose() * weights) / static_cast<double>(n);
}

}  // namespace rb
