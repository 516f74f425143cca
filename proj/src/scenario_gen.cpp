#include "rb/scenario_gen.hpp"

#include "rb/rng.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace rb {

GaussianSpec GaussianSpec::head(Eigen::Index k) const {
    if (k < 1 || k > mu.size()) {
        throw std::invalid_argument("GaussianSpec::head: invalid sub-dimension");
    }
    return GaussianSpec{mu.head(k), sigma.topLeftCorner(k, k)};
}

double ParamGenSpec::beta_shape() const {
    if (beta_B > 0.0) return beta_B;
    const double dd = static_cast<double>(d);
    return std::pow(dd, 0.4) * std::log(dd);
}

Matrix covariance_factor(const Matrix& sigma) {
    if (sigma.rows() != sigma.cols()) {
        throw std::invalid_argument("covariance_factor: matrix not square");
    }
    if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
        throw std::invalid_argument("covariance_factor: matrix not symmetric");
    }
    const Eigen::Index d = sigma.rows();
    const double max_diag = std::max(sigma.diagonal().maxCoeff(), 0.0);
    if (max_diag == 0.0) {
        if (sigma.cwiseAbs().maxCoeff() != 0.0) {
            throw std::invalid_argument("covariance_factor: matrix not PSD");
        }
        return Matrix::Zero(d, d);
    }
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    // Pivoted fallback for rank-deficient input.
    Eigen::LDLT<Matrix> ldlt(sigma);
    if (ldlt.info() != Eigen::Success) {
        throw std::invalid_argument("covariance_factor: factorization failed");
    }
    Vector dvec = ldlt.vectorD();
    const double tol = 1e-10 * max_diag;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (dvec[i] < -tol) {
            throw std::invalid_argument("covariance_factor: matrix not PSD");
        }
        dvec[i] = dvec[i] > tol ? std::sqrt(dvec[i]) : 0.0;
    }
    Matrix l = ldlt.matrixL();
    Matrix a = ldlt.transpositionsP().transpose() * Matrix(l * dvec.asDiagonal());
    return a;
}

namespace {

void validate_spec(const Vector& mu, const Matrix& sigma) {
    if (mu.size() != sigma.rows()) {
        throw std::invalid_argument("sampler: mu and sigma dimensions disagree");
    }
    if (!mu.allFinite() || !sigma.allFinite()) {
        throw std::invalid_argument("sampler: non-finite parameter");
    }
}

}  // namespace

ScenarioMatrix sample_gaussian(const GaussianSpec& spec, Eigen::Index n, std::uint64_t seed) {
    validate_spec(spec.mu, spec.sigma);
    if (n < 1) throw std::invalid_argument("sample_gaussian: need n >= 1");
    const Eigen::Index d = spec.mu.size();
    const Matrix a = covariance_factor(spec.sigma);
    Rng rng(seed);
    Matrix xi(n, d);
    Vector z(d);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.normal();
        xi.row(j) = -(spec.mu + a * z).transpose();
    }
    return ScenarioMatrix(std::move(xi));
}

ScenarioMatrix sample_student_t(const StudentTSpec& spec, Eigen::Index n, std::uint64_t seed) {
    validate_spec(spec.mu, spec.sigma);
    if (n < 1) throw std::invalid_argument("sample_student_t: need n >= 1");
    if (!(spec.nu > 2.0)) {
        throw std::invalid_argument("sample_student_t: need nu > 2 (finite variance)");
    }
    const Eigen::Index d = spec.mu.size();
    const Matrix a = covariance_factor(spec.sigma);
    Rng rng(seed);
    Matrix xi(n, d);
    Vector z(d);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.normal();
        const double w = rng.chi_squared(spec.nu);
        const double scale = std::sqrt(spec.nu / w);
        xi.row(j) = -(spec.mu + scale * (a * z)).transpose();
    }
    return ScenarioMatrix(std::move(xi));
}

GaussianSpec generate_mu_sigma(const ParamGenSpec& spec, std::uint64_t seed) {
    if (spec.d < 1) throw std::invalid_argument("generate_mu_sigma: need d >= 1");
    if (!(spec.alpha_B > 0.0)) {
        throw std::invalid_argument("generate_mu_sigma: alpha_B must be positive");
    }
    const double beta_b = spec.beta_shape();
    Rng rng(seed);
    const Eigen::Index d = spec.d;
    // L is filled row-major so that the stream of draws is well defined.
    Matrix l(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            l(i, j) = rng.beta(spec.alpha_B, beta_b);
        }
    }
    Matrix sigma = l * l.transpose();
    Vector mu(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double s = 4.0 * rng.beta(2.0, 5.0);
        mu[i] = sigma(i, i) * s;
    }
    return GaussianSpec{std::move(mu), std::move(sigma)};
}

}  // namespace rb
