#pragma once

#include "rb/gamma_fn.hpp"
#include "rb/types.hpp"

#include <optional>

namespace rb {

/// Which risk measure to evaluate and how.
struct RiskSpec {
    RiskKind kind = RiskKind::ExpectedShortfall;
    double alpha = 0.95;
    std::optional<GammaFn> gamma;

    static RiskSpec es(double alpha);
    static RiskSpec evar(double alpha);
    static RiskSpec distortion(GammaFn gamma);
};

/// Result of evaluating a tail measure on a loss sample. zeta is the
/// change-of-probabilities: nonnegative scenario weights summing to one
/// with value = E_zeta[losses].
struct TailEvaluation {
    double value = 0.0;
    double t_star = 0.0;
    Vector zeta;
};

struct DistortionEvaluation {
    double value = 0.0;
    Vector zeta;
};

/// Sample Expected Shortfall via the Rockafellar-Uryasev minimum on the
/// empirical distribution. t_star is the ceil(alpha N)-th order statistic;
/// the boundary order statistic carries the fractional atom so the weights
/// sum to one exactly.
TailEvaluation es_sample(const Vector& losses, double alpha);

/// Sample Entropic Value-at-Risk: inf over t > 0 of
/// t * log((1/(1-alpha)) * mean exp(losses / t)), by golden-section search
/// on the convex map (relative tolerance 1e-10), log-sum-exp throughout.
/// alpha = 0 short-circuits to the sample mean.
TailEvaluation evar_sample(const Vector& losses, double alpha);

/// Distortion measure on a sample: sorted losses weighted by per-bucket
/// integrals of gamma. zeta is returned in the original scenario order.
DistortionEvaluation distortion_sample(const Vector& losses, const GammaFn& gamma);

/// Value, subgradient in v, and scenario weights of v -> rho(L(v)) on a
/// scenario set.
struct RiskEvaluation {
    double value = 0.0;
    Vector subgradient;
    Vector zeta;
    double t_star = 0.0;  // meaningful for ES / EVaR
};

RiskEvaluation evaluate_risk(const RiskSpec& spec, const ScenarioMatrix& sm, const Vector& v);

/// phi(Phi^{-1}(alpha)) / (1 - alpha); zero at alpha = 0.
double es_kappa(double alpha);

/// sqrt(-2 log(1 - alpha)), the Gaussian EVaR multiplier obtained by
/// minimizing the EVaR definition for a Gaussian loss.
double evar_kappa(double alpha);

/// Closed-form Gaussian ES for a loss with the given mean and deviation.
double es_gaussian(double mu_l, double sigma_l, double alpha);

double evar_gaussian(double mu_l, double sigma_l, double alpha);

/// Closed-form Gaussian marginal risks -mu_i + kappa (Sigma v)_i / sigma_L
/// for ES or EVaR. mu and sigma parameterize returns.
Vector gaussian_marginal_risks(const Vector& mu, const Matrix& sigma, const Vector& v,
                               double alpha, RiskKind kind);

/// Empirical distortion marginal risks via the rank transform:
/// MR_i = (1/N) sum_j xi_ij * gamma(rank_j / (N+1)).
Vector distortion_marginal_risks_mc(const ScenarioMatrix& sm, const Vector& v,
                                    const GammaFn& gamma);

}  // namespace rb
