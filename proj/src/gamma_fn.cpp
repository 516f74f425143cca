#include "rb/gamma_fn.hpp"

#include <cmath>
#include <utility>

namespace rb {

namespace {

// 16-point Gauss-Legendre nodes and weights on [-1, 1].
const double kGlNodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double kGlWeights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double gl16(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) {
        s += kGlWeights[i] * f(mid + half * kGlNodes[i]);
    }
    return half * s;
}

}  // namespace

GammaFn::GammaFn(std::function<double(double)> density,
                 std::function<double(double)> antiderivative, std::string name)
    : density_(std::move(density)),
      antiderivative_(std::move(antiderivative)),
      name_(std::move(name)) {
    validate();
}

void GammaFn::validate() const {
    const double total = mass(0.0, 1.0);
    if (std::abs(total - 1.0) > 1e-8) {
        throw std::invalid_argument("GammaFn '" + name_ + "': density integrates to " +
                                    std::to_string(total) + ", expected 1");
    }
}

double GammaFn::mass(double a, double b) const {
    a = std::max(0.0, a);
    b = std::min(1.0, b);
    if (b <= a) return 0.0;
    if (antiderivative_) {
        return antiderivative_(b) - antiderivative_(a);
    }
    // Subdivide so that integrable endpoint singularities are resolved.
    double total = 0.0;
    const int pieces = 8;
    for (int i = 0; i < pieces; ++i) {
        const double lo = a + (b - a) * i / pieces;
        const double hi = a + (b - a) * (i + 1) / pieces;
        total += gl16(density_, lo, hi);
    }
    return total;
}

GammaFn GammaFn::expected_shortfall(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("GammaFn::expected_shortfall: alpha must lie in [0, 1)");
    }
    const double scale = 1.0 / (1.0 - alpha);
    return GammaFn([alpha, scale](double u) { return u > alpha ? scale : 0.0; },
                   [alpha, scale](double u) { return u > alpha ? (u - alpha) * scale : 0.0; },
                   "es");
}

GammaFn GammaFn::sqrt_distortion() {
    return GammaFn([](double u) { return 0.5 / std::sqrt(1.0 - u); },
                   [](double u) { return 1.0 - std::sqrt(1.0 - u); }, "sqrt");
}

GammaFn GammaFn::uniform() {
    return GammaFn([](double) { return 1.0; }, [](double u) { return u; }, "uniform");
}

GammaFn GammaFn::from_grid(const Vector& u, const Vector& gamma) {
    if (u.size() != gamma.size() || u.size() < 2) {
        throw std::invalid_argument("GammaFn::from_grid: need matching grids of size >= 2");
    }
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || u[i] > 1.0 || gamma[i] < 0.0) {
            throw std::invalid_argument("GammaFn::from_grid: invalid knot " + std::to_string(i));
        }
        if (i > 0 && !(u[i] > u[i - 1])) {
            throw std::invalid_argument("GammaFn::from_grid: u must be strictly increasing");
        }
    }
    auto interp = [u, gamma](double x) {
        if (x <= u[0]) return gamma[0];
        if (x >= u[u.size() - 1]) return gamma[gamma.size() - 1];
        Eigen::Index lo = 0, hi = u.size() - 1;
        while (hi - lo > 1) {
            const Eigen::Index mid = (lo + hi) / 2;
            (u[mid] <= x ? lo : hi) = mid;
        }
        const double w = (x - u[lo]) / (u[hi] - u[lo]);
        return (1.0 - w) * gamma[lo] + w * gamma[hi];
    };
    // Exact antiderivative of the piecewise-linear interpolant.
    auto anti = [u, gamma, interp](double x) {
        double acc = 0.0;
        if (x <= 0.0) return 0.0;
        double prev_u = 0.0;
        double prev_g = interp(0.0);
        for (Eigen::Index i = 0; i < u.size() && u[i] < x; ++i) {
            if (u[i] <= prev_u) continue;
            acc += 0.5 * (prev_g + gamma[i]) * (u[i] - prev_u);
            prev_u = u[i];
            prev_g = gamma[i];
        }
        if (x > prev_u) {
            acc += 0.5 * (prev_g + interp(x)) * (x - prev_u);
        }
        return acc;
    };
    return GammaFn(interp, anti, "grid");
}

GammaFn GammaFn::analytic(std::function<double(double)> density, std::string name) {
    return GammaFn(std::move(density), nullptr, std::move(name));
}

}  // namespace rb
