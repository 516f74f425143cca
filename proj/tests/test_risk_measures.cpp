#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "rb/risk_measures.hpp"
#include "rb/rng.hpp"
#include "rb/scenario_gen.hpp"

#include <algorithm>
#include <cmath>

using namespace rb;

namespace {

// Independent oracle for the sample ES: enumerate the Rockafellar-Uryasev
// objective over every sample point as candidate t and take the minimum.
double es_enumeration_oracle(const Vector& losses, double alpha) {
    const double n = static_cast<double>(losses.size());
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < losses.size(); ++k) {
        const double t = losses[k];
        double tail = 0.0;
        for (Eigen::Index j = 0; j < losses.size(); ++j) {
            tail += std::max(losses[j] - t, 0.0);
        }
        best = std::min(best, t + tail / (n * (1.0 - alpha)));
    }
    return best;
}

Vector random_losses(Eigen::Index n, Rng& rng, double lo = -2.0, double hi = 3.0) {
    return test::random_vector(n, rng, lo, hi);
}

}  // namespace

TEST_CASE("es_sample: enumeration example and oracle") {
    Vector losses(10);
    for (int i = 0; i < 10; ++i) losses[i] = i + 1;
    const auto ev = es_sample(losses, 0.8);
    CHECK(ev.value == doctest::Approx(9.5).epsilon(1e-15));
    CHECK(ev.t_star == 8.0);
    CHECK(ev.value == doctest::Approx(es_enumeration_oracle(losses, 0.8)).epsilon(1e-14));
}

TEST_CASE("es_sample equals the enumeration oracle on random samples") {
    Rng rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector losses = random_losses(37, rng);
        const double alpha = 0.95 * rng.uniform();
        const auto ev = es_sample(losses, alpha);
        CHECK(ev.value ==
              doctest::Approx(es_enumeration_oracle(losses, alpha)).epsilon(1e-12));
    }
}

TEST_CASE("es_sample: alpha 0 is the mean; constant losses") {
    Rng rng(5);
    const Vector losses = random_losses(100, rng);
    CHECK(es_sample(losses, 0.0).value == doctest::Approx(losses.mean()).epsilon(1e-13));
    const Vector c = Vector::Constant(50, 3.25);
    for (double alpha : {0.0, 0.4, 0.9, 0.99}) {
        CHECK(es_sample(c, alpha).value == doctest::Approx(3.25).epsilon(1e-14));
    }
    CHECK_THROWS_AS(es_sample(losses, 1.0), std::invalid_argument);
}

TEST_CASE("evar_sample: alpha 0 mean, constant losses, gaussian value") {
    Rng rng(6);
    const Vector losses = random_losses(200, rng);
    CHECK(evar_sample(losses, 0.0).value == doctest::Approx(losses.mean()).epsilon(1e-13));

    const Vector c = Vector::Constant(20, -1.5);
    CHECK(evar_sample(c, 0.9).value == doctest::Approx(-1.5).epsilon(1e-9));

    // Large N(0,1) sample at alpha = 0.95: the population value is
    // sqrt(2 log 20) by direct minimization of t log((1/0.05) e^{1/(2t^2)}).
    GaussianSpec spec{Vector::Zero(1), Matrix::Identity(1, 1)};
    const auto sm = sample_gaussian(spec, 200000, 99);
    const double v = evar_sample(sm.xi().col(0), 0.95).value;
    CHECK(v == doctest::Approx(std::sqrt(2.0 * std::log(20.0))).epsilon(0.02));
}

TEST_CASE("zeta is a probability vector and reproduces the value") {
    Rng rng(33);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector losses = random_losses(64, rng);
        const double alpha = 0.9 * rng.uniform();
        for (int which = 0; which < 3; ++which) {
            Vector zeta;
            double value;
            if (which == 0) {
                auto ev = es_sample(losses, alpha);
                zeta = ev.zeta;
                value = ev.value;
            } else if (which == 1) {
                auto ev = evar_sample(losses, alpha);
                zeta = ev.zeta;
                value = ev.value;
            } else {
                auto ev = distortion_sample(losses, GammaFn::sqrt_distortion());
                zeta = ev.zeta;
                value = ev.value;
            }
            CHECK(zeta.minCoeff() >= 0.0);
            CHECK(zeta.sum() == doctest::Approx(1.0).epsilon(1e-12));
            // EVaR recovers value = E_zeta[losses] only at the exact
            // minimizer; the golden-section t leaves a tiny slack.
            const double tol = which == 1 ? 1e-6 : 1e-10;
            CHECK(zeta.dot(losses) == doctest::Approx(value).epsilon(tol).scale(1.0));
        }
    }
}

TEST_CASE("positive homogeneity and translation") {
    Rng rng(44);
    for (int rep = 0; rep < 10; ++rep) {
        const Vector losses = random_losses(80, rng);
        const double c = 0.1 + 5.0 * rng.uniform();
        const double m = -1.0 + 2.0 * rng.uniform();
        const double alpha = 0.85;
        CHECK(es_sample(c * losses, alpha).value ==
              doctest::Approx(c * es_sample(losses, alpha).value).epsilon(1e-13));
        CHECK(es_sample((losses.array() + m).matrix(), alpha).value ==
              doctest::Approx(es_sample(losses, alpha).value + m).epsilon(1e-12));
        CHECK(evar_sample(c * losses, alpha).value ==
              doctest::Approx(c * evar_sample(losses, alpha).value).epsilon(1e-9));
        const GammaFn g = GammaFn::sqrt_distortion();
        CHECK(distortion_sample(c * losses, g).value ==
              doctest::Approx(c * distortion_sample(losses, g).value).epsilon(1e-13));
        CHECK(distortion_sample((losses.array() + m).matrix(), g).value ==
              doctest::Approx(distortion_sample(losses, g).value + m).epsilon(1e-12));
    }
}

TEST_CASE("monotone in alpha and ES <= EVaR") {
    Rng rng(55);
    const Vector losses = random_losses(150, rng);
    double prev_es = -1e300, prev_evar = -1e300;
    for (double alpha : {0.0, 0.2, 0.5, 0.8, 0.9, 0.95, 0.99}) {
        const double es = es_sample(losses, alpha).value;
        const double ev = evar_sample(losses, alpha).value;
        CHECK(es >= prev_es - 1e-12);
        CHECK(ev >= prev_evar - 1e-9);
        CHECK(es <= ev + 1e-9);
        prev_es = es;
        prev_evar = ev;
    }
}

TEST_CASE("distortion with ES gamma reproduces es_sample exactly") {
    Rng rng(66);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector losses = random_losses(41, rng);
        const double alpha = 0.9 * rng.uniform();
        const auto es = es_sample(losses, alpha);
        const auto dist = distortion_sample(losses, GammaFn::expected_shortfall(alpha));
        CHECK(dist.value == es.value);  // same code path, bitwise
        CHECK((dist.zeta - es.zeta).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("sqrt distortion of U(0,1) tends to 2/3") {
    Rng rng(77);
    Vector losses(100000);
    for (Eigen::Index i = 0; i < losses.size(); ++i) losses[i] = rng.uniform();
    const double v = distortion_sample(losses, GammaFn::sqrt_distortion()).value;
    CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(0.01));
    const Vector c = Vector::Constant(10, 0.4);
    CHECK(distortion_sample(c, GammaFn::sqrt_distortion()).value ==
          doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("gamma grid must integrate to one") {
    Vector u(2), g(2);
    u << 0.0, 1.0;
    g << 1.0, 2.0;  // integrates to 1.5
    CHECK_THROWS_AS(GammaFn::from_grid(u, g), std::invalid_argument);
    g << 1.0, 1.0;
    CHECK_NOTHROW(GammaFn::from_grid(u, g));
}

TEST_CASE("quadrature fallback matches an exact antiderivative") {
    // gamma(u) = 2u, so mass(a, b) = b^2 - a^2 exactly.
    const GammaFn quad = GammaFn::analytic([](double x) { return 2.0 * x; }, "linear");
    CHECK(quad.mass(0.5, 0.7) == doctest::Approx(0.24).epsilon(1e-12));
    CHECK(quad.mass(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("es_gaussian closed form") {
    CHECK(es_gaussian(0.0, 1.0, 0.95) == doctest::Approx(2.0627).epsilon(1e-4));
    CHECK(es_gaussian(1.7, 0.0, 0.9) == 1.7);
    CHECK(es_gaussian(0.3, 2.0, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
    // alpha -> 0 limit agrees with the sample evaluator at alpha = 0.
    GaussianSpec spec{(Vector(1) << -0.1).finished(), Matrix::Identity(1, 1) * 0.04};
    const auto sm = sample_gaussian(spec, 100000, 12);
    CHECK(es_sample(sm.xi().col(0), 0.0).value ==
          doctest::Approx(es_gaussian(0.1, 0.2, 0.0)).epsilon(0.05));
}

TEST_CASE("gaussian marginal risks: symmetry and Euler identity") {
    {
        const Vector mr = gaussian_marginal_risks(Vector::Zero(2), Matrix::Identity(2, 2),
                                                  Vector::Ones(2), 0.95,
                                                  RiskKind::ExpectedShortfall);
        const double expected = es_kappa(0.95) / std::sqrt(2.0);
        CHECK(mr[0] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(mr[1] == doctest::Approx(expected).epsilon(1e-12));
    }
    Rng rng(88);
    for (RiskKind kind : {RiskKind::ExpectedShortfall, RiskKind::EntropicVaR}) {
        const GaussianSpec spec = generate_mu_sigma(ParamGenSpec{5}, 3);
        const Vector v = test::random_vector(5, rng, 0.1, 2.0);
        const Vector mr = gaussian_marginal_risks(spec.mu, spec.sigma, v, 0.95, kind);
        const double sigma_l = std::sqrt(v.dot(spec.sigma * v));
        const double kappa = kind == RiskKind::ExpectedShortfall ? es_kappa(0.95)
                                                                 : evar_kappa(0.95);
        const double rho = -spec.mu.dot(v) + kappa * sigma_l;
        CHECK(v.dot(mr) == doctest::Approx(rho).epsilon(1e-12));
    }
    // Diagonal case: contributions proportional to v_i^2 sigma_i^2.
    {
        Matrix sigma = Matrix::Zero(2, 2);
        sigma(0, 0) = 0.09;
        sigma(1, 1) = 0.25;
        Vector v(2);
        v << 2.0, 0.5;
        const Vector mr = gaussian_marginal_risks(Vector::Zero(2), sigma, v, 0.9,
                                                  RiskKind::ExpectedShortfall);
        const Vector rc = v.cwiseProduct(mr);
        CHECK(rc[0] / rc[1] ==
              doctest::Approx((4.0 * 0.09) / (0.25 * 0.25)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gaussian_marginal_risks(Vector::Zero(2), Matrix::Zero(2, 2),
                                            Vector::Ones(2), 0.9,
                                            RiskKind::ExpectedShortfall),
                    std::invalid_argument);
}

TEST_CASE("distortion marginal risks mc") {
    Rng rng(99);
    // gamma == 1 gives the column means.
    {
        const Matrix xi = test::random_matrix(500, 3, rng);
        const ScenarioMatrix sm(xi);
        const Vector mr =
            distortion_marginal_risks_mc(sm, Vector::Ones(3), GammaFn::uniform());
        const Vector means = xi.colwise().mean();
        CHECK((mr - means).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    // Gaussian scenarios: matches the closed form within MC tolerance.
    {
        Matrix sigma(2, 2);
        sigma << 0.04, 0.01, 0.01, 0.09;
        GaussianSpec spec{Vector::Zero(2), sigma};
        const auto sm = sample_gaussian(spec, 200000, 31);
        Vector v(2);
        v << 1.0, 1.5;
        const double alpha = 0.9;
        const Vector mc =
            distortion_marginal_risks_mc(sm, v, GammaFn::expected_shortfall(alpha));
        const Vector exact =
            gaussian_marginal_risks(spec.mu, spec.sigma, v, alpha, RiskKind::ExpectedShortfall);
        CHECK((mc - exact).lpNorm<Eigen::Infinity>() < 0.02);
    }
    // d = 1 consistency with the sorted-bucket evaluator.
    {
        Rng r2(13);
        Matrix xi = test::random_matrix(20000, 1, r2);
        const ScenarioMatrix sm(xi);
        const GammaFn g = GammaFn::sqrt_distortion();
        const double mc = distortion_marginal_risks_mc(sm, Vector::Ones(1), g)[0];
        const double exact = distortion_sample(xi.col(0), g).value;
        CHECK(mc == doctest::Approx(exact).epsilon(0.02));
    }
}

TEST_CASE("subgradients match central finite differences") {
    Rng rng(123);
    const Matrix xi = test::random_matrix(400, 4, rng);
    const ScenarioMatrix sm(xi);
    const RiskSpec specs[] = {RiskSpec::es(0.9), RiskSpec::evar(0.9),
                              RiskSpec::distortion(GammaFn::sqrt_distortion())};
    for (const RiskSpec& spec : specs) {
        int checked = 0;
        for (int rep = 0; rep < 40 && checked < 8; ++rep) {
            const Vector v = test::random_vector(4, rng, 0.5, 2.0);
            // Stay away from order-statistic ties.
            const Vector losses = portfolio_losses(sm, v);
            Vector sorted = losses;
            std::sort(sorted.data(), sorted.data() + sorted.size());
            double min_gap = 1e300;
            for (Eigen::Index j = 1; j < sorted.size(); ++j) {
                min_gap = std::min(min_gap, sorted[j] - sorted[j - 1]);
            }
            if (min_gap < 1e-5) continue;
            const RiskEvaluation ev = evaluate_risk(spec, sm, v);
            const Vector fd = test::central_difference(
                [&](const Vector& x) { return evaluate_risk(spec, sm, x).value; }, v, 1e-6);
            CHECK((fd - ev.subgradient).lpNorm<Eigen::Infinity>() <
                  1e-4 * std::max(1.0, ev.subgradient.lpNorm<Eigen::Infinity>()));
            ++checked;
        }
        CHECK(checked >= 5);
    }
}
