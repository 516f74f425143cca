#pragma once

#include "rb/types.hpp"

#include <cstdint>

namespace rb {

struct GaussianSpec {
    Vector mu;     // expected returns per period
    Matrix sigma;  // covariance matrix of returns

    /// Leading k-asset sub-problem: first k entries of mu and the leading
    /// k x k block of sigma.
    GaussianSpec head(Eigen::Index k) const;
};

struct StudentTSpec {
    Vector mu;
    Matrix sigma;  // dispersion matrix; covariance is sigma * nu / (nu - 2)
    double nu = 5.0;
};

struct ParamGenSpec {
    Eigen::Index d = 100;
    double alpha_B = 1.0;
    double beta_B = 0.0;  // <= 0 means the default d^0.4 * log(d)

    double beta_shape() const;
};

/// Lower-triangular factor A with A A^T = sigma, using a pivoted
/// factorization when the plain Cholesky fails. Diagonal blocks below
/// 1e-10 relative to the largest diagonal entry are treated as zero;
/// genuinely indefinite matrices are rejected.
Matrix covariance_factor(const Matrix& sigma);

/// N Gaussian return draws r ~ N(mu, sigma), stored as losses -r.
/// Deterministic given the seed.
ScenarioMatrix sample_gaussian(const GaussianSpec& spec, Eigen::Index n, std::uint64_t seed);

/// N multivariate Student-t draws r = mu + z * sqrt(nu / W) with
/// z ~ N(0, sigma) and W ~ chi^2_nu, stored as losses -r.
ScenarioMatrix sample_student_t(const StudentTSpec& spec, Eigen::Index n, std::uint64_t seed);

/// Synthetic experiment parameters: sigma = L L^T with L_{ij} iid
/// Beta(alpha_B, beta_B) drawn row-major, then mu_i = sigma_ii * S_i with
/// S_i / 4 iid Beta(2, 5).
GaussianSpec generate_mu_sigma(const ParamGenSpec& spec, std::uint64_t seed);

}  // namespace rb
