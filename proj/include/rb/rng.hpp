#pragma once

#include <cstdint>
#include <random>

namespace rb {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function, via erfc.
double norm_cdf(double x);

/// Standard normal quantile. Rational approximation refined by one
/// Halley step; accurate to close to machine precision on (0, 1).
double norm_quantile(double p);

/// Seedable generator for all sampling in the library. Built on
/// std::mt19937_64 with in-repo transforms (inverse-CDF normals,
/// Marsaglia-Tsang gamma), so a given seed produces the same stream on
/// every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1), endpoints excluded.
    double uniform();

    /// Standard normal via inverse CDF.
    double normal();

    /// Gamma(shape, 1) for shape > 0.
    double gamma(double shape);

    /// Beta(a, b) from a pair of gamma draws.
    double beta(double a, double b);

    /// Chi-squared with nu degrees of freedom.
    double chi_squared(double nu);

  private:
    std::mt19937_64 engine_;
};

}  // namespace rb
