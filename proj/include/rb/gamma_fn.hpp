#pragma once

#include "rb/types.hpp"

#include <functional>
#include <string>

namespace rb {

/// Distortion weight function: a nonnegative density gamma on (0,1)
/// integrating to one. Bucket masses use a registered antiderivative when
/// one exists (ES, sqrt distortion, uniform, tabulated grids), otherwise
/// 16-point Gauss-Legendre quadrature, so cut coefficients are
/// deterministic.
class GammaFn {
  public:
    /// gamma(u) = 1{u > alpha} / (1 - alpha).
    static GammaFn expected_shortfall(double alpha);

    /// g(x) = sqrt(x), i.e. gamma(u) = 1 / (2 sqrt(1 - u)).
    static GammaFn sqrt_distortion();

    /// gamma == 1: plain expectation.
    static GammaFn uniform();

    /// Piecewise-linear density through (u_k, gamma_k); u must be strictly
    /// increasing within [0, 1]. Integrated exactly per segment.
    static GammaFn from_grid(const Vector& u, const Vector& gamma);

    /// Analytic density without a registered antiderivative; integration
    /// falls back to quadrature. The density must integrate to one on
    /// (0,1) within 1e-8.
    static GammaFn analytic(std::function<double(double)> density, std::string name);

    double density(double u) const { return density_(u); }

    /// Integral of the density over [a, b] within [0, 1].
    double mass(double a, double b) const;

    const std::string& name() const { return name_; }

  private:
    GammaFn(std::function<double(double)> density,
            std::function<double(double)> antiderivative, std::string name);

    void validate() const;

    std::function<double(double)> density_;
    std::function<double(double)> antiderivative_;  // may be empty
    std::string name_;
};

}  // namespace rb
