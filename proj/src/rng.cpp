#include "rb/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rb {

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// Acklam's rational approximation for the normal quantile, followed by a
// Halley refinement step against erfc.
double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("norm_quantile: p must lie in (0, 1)");
    }
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step.
    double e = norm_cdf(x) - p;
    double u = e / norm_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double Rng::uniform() {
    // 53-bit mantissa, shifted into the open interval.
    const std::uint64_t bits = engine_() >> 11;
    double u = (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    return u;
}

double Rng::normal() {
    return norm_quantile(uniform());
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) {
        throw std::domain_error("Rng::gamma: shape must be positive");
    }
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
        double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze method.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, vcube;
        do {
            x = normal();
            vcube = 1.0 + c * x;
        } while (vcube <= 0.0);
        vcube = vcube * vcube * vcube;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * vcube;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - vcube + std::log(vcube))) {
            return d * vcube;
        }
    }
}

double Rng::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

double Rng::chi_squared(double nu) {
    return 2.0 * gamma(0.5 * nu);
}

}  // namespace rb
