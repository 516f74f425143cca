#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "rb/master_problem.hpp"
#include "rb/rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace rb;
constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {

// Brute-force LP oracle: enumerate basic points formed by intersecting every
// choice of n active constraints (rows of Ax >= b plus bound hyperplanes),
// keep the feasible ones, return the best objective. Exponential, so n <= 4.
struct OracleResult {
    bool feasible = false;
    double objective = 0.0;
};

OracleResult lp_vertex_oracle(const lp::Problem& p) {
    const Eigen::Index n = p.c.size();
    const Eigen::Index m = p.a.rows();
    // Candidate hyperplanes: each row of A (a^T x = b), each bound.
    std::vector<Vector> normals;
    std::vector<double> offsets;
    for (Eigen::Index i = 0; i < m; ++i) {
        normals.push_back(p.a.row(i).transpose());
        offsets.push_back(p.b[i]);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        Vector e = Vector::Zero(n);
        e[j] = 1.0;
        normals.push_back(e);
        offsets.push_back(p.lower[j]);
        if (std::isfinite(p.upper[j])) {
            normals.push_back(e);
            offsets.push_back(p.upper[j]);
        }
    }
    const auto total = static_cast<Eigen::Index>(normals.size());
    auto feasible = [&](const Vector& x) {
        for (Eigen::Index i = 0; i < m; ++i) {
            if (p.a.row(i).dot(x) < p.b[i] - 1e-8) return false;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (x[j] < p.lower[j] - 1e-8) return false;
            if (x[j] > p.upper[j] + 1e-8) return false;
        }
        return true;
    };
    OracleResult best;
    std::vector<Eigen::Index> pick(static_cast<std::size_t>(n));
    // Iterate over all n-subsets of hyperplanes.
    std::function<void(Eigen::Index, Eigen::Index)> recurse = [&](Eigen::Index start,
                                                                  Eigen::Index depth) {
        if (depth == n) {
            Matrix a(n, n);
            Vector b(n);
            for (Eigen::Index k = 0; k < n; ++k) {
                a.row(k) = normals[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])]
                               .transpose();
                b[k] = offsets[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])];
            }
            Eigen::FullPivLU<Matrix> lu(a);
            if (!lu.isInvertible()) return;
            const Vector x = lu.solve(b);
            if (!feasible(x)) return;
            const double obj = p.c.dot(x);
            if (!best.feasible || obj < best.objective) {
                best.feasible = true;
                best.objective = obj;
            }
            return;
        }
        for (Eigen::Index i = start; i < total; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            recurse(i + 1, depth + 1);
        }
    };
    recurse(0, 0);
    return best;
}

lp::Problem random_lp(Eigen::Index n, Eigen::Index m, Rng& rng) {
    lp::Problem p;
    p.a = test::random_matrix(m, n, rng);
    p.c = test::random_vector(n, rng);
    p.lower = Vector::Zero(n);
    p.upper = test::random_vector(n, rng, 0.5, 3.0);
    // Choose b so a known box point is feasible: ensures boundedness via the
    // finite box and usually feasibility.
    const Vector x0 = test::random_vector(n, rng, 0.1, 0.4);
    p.b = p.a * x0 - test::random_vector(m, rng, 0.0, 1.0);
    return p;
}

}  // namespace

TEST_CASE("lp: hand-checked examples") {
    {
        // min -x, 0 <= x <= 2, no rows: optimum at the upper bound.
        lp::Problem p;
        p.a = Matrix::Zero(0, 1);
        p.b = Vector::Zero(0);
        p.c = (Vector(1) << -1.0).finished();
        p.lower = Vector::Zero(1);
        p.upper = (Vector(1) << 2.0).finished();
        const auto s = lp::solve(p);
        REQUIRE(s.status == lp::Status::Optimal);
        CHECK(s.x[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(s.objective == doctest::Approx(-2.0).epsilon(1e-12));
    }
    {
        // min x + y s.t. x + y >= 1, x,y >= 0: objective 1 on the facet.
        lp::Problem p;
        p.a = Matrix::Ones(1, 2);
        p.b = (Vector(1) << 1.0).finished();
        p.c = Vector::Ones(2);
        p.lower = Vector::Zero(2);
        p.upper = Vector::Constant(2, kInf);
        const auto s = lp::solve(p);
        REQUIRE(s.status == lp::Status::Optimal);
        CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.x.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        // min -x - 2y s.t. x + y >= 0 (slack), x <= 1, y <= 1 via bounds.
        lp::Problem p;
        p.a = Matrix::Ones(1, 2);
        p.b = (Vector(1) << 0.0).finished();
        p.c = (Vector(2) << -1.0, -2.0).finished();
        p.lower = Vector::Zero(2);
        p.upper = Vector::Ones(2);
        const auto s = lp::solve(p);
        REQUIRE(s.status == lp::Status::Optimal);
        CHECK(s.objective == doctest::Approx(-3.0).epsilon(1e-12));
    }
}

TEST_CASE("lp: infeasible and unbounded detection") {
    {
        // x >= 2 with x <= 1.
        lp::Problem p;
        p.a = Matrix::Ones(1, 1);
        p.b = (Vector(1) << 2.0).finished();
        p.c = Vector::Ones(1);
        p.lower = Vector::Zero(1);
        p.upper = Vector::Ones(1);
        CHECK(lp::solve(p).status == lp::Status::Infeasible);
    }
    {
        // min -x, x >= 0, no upper bound.
        lp::Problem p;
        p.a = Matrix::Zero(0, 1);
        p.b = Vector::Zero(0);
        p.c = (Vector(1) << -1.0).finished();
        p.lower = Vector::Zero(1);
        p.upper = Vector::Constant(1, kInf);
        CHECK(lp::solve(p).status == lp::Status::Unbounded);
    }
}

TEST_CASE("lp: agrees with the vertex-enumeration oracle") {
    Rng rng(301);
    int optimal = 0, infeasible = 0;
    for (int rep = 0; rep < 120; ++rep) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform() * 3);  // 2..4
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.uniform() * 5);
        const lp::Problem p = random_lp(n, m, rng);
        const auto s = lp::solve(p);
        const auto oracle = lp_vertex_oracle(p);
        if (oracle.feasible) {
            REQUIRE(s.status == lp::Status::Optimal);
            CHECK(s.objective ==
                  doctest::Approx(oracle.objective).epsilon(1e-7).scale(1.0));
            ++optimal;
        } else {
            CHECK(s.status == lp::Status::Infeasible);
            ++infeasible;
        }
    }
    CHECK(optimal >= 60);  // the construction should mostly be feasible
}

TEST_CASE("lp: solution is feasible and satisfies bounds") {
    Rng rng(302);
    for (int rep = 0; rep < 40; ++rep) {
        const lp::Problem p = random_lp(3, 4, rng);
        const auto s = lp::solve(p);
        if (s.status != lp::Status::Optimal) continue;
        CHECK(((p.a * s.x) - p.b).minCoeff() > -1e-8);
        CHECK((s.x - p.lower).minCoeff() > -1e-12);
        CHECK((p.upper - s.x).minCoeff() > -1e-12);
    }
}

TEST_CASE("master: single cut z >= sum v_i with equal budgets") {
    // With z >= sum_i v_i and the log-budget constraint, the optimum of the
    // relaxation is v = 1 (geometric mean constraint is tight there), z = d.
    const Eigen::Index d = 3;
    SolverConfig cfg;
    CutStore store(d, /*with_t=*/false, /*z_nonneg=*/false, 1e-6, 1e3,
                   /*t_bound=*/0.0, /*z_lower=*/-1e12);
    Cut cut;
    cut.intercept = 0.0;
    cut.coef_v = Vector::Ones(d);
    store.add_objective_cut(cut);
    const auto res = solve_master(store, BudgetVector::equal(d), cfg);
    REQUIRE(res.status == MasterStatus::Optimal);
    // Kelley refines the log constraint to 1e-9, which locates the optimum
    // to about the square root of that.
    for (Eigen::Index i = 0; i < d; ++i) {
        CHECK(res.v[i] == doctest::Approx(1.0).epsilon(2e-4));
    }
    CHECK(res.z == doctest::Approx(3.0).epsilon(2e-4));
    // The returned point respects the true log constraint to the Kelley tol.
    CHECK(res.v.array().log().sum() / 3.0 > -1e-8);
}

TEST_CASE("master: unequal budgets shift the one-cut optimum") {
    // min sum v_i s.t. sum b_i log v_i >= 0 has the closed-form solution
    // v_i = b_i / gmean where gmean = prod b_i^{b_i} ... verify via KKT:
    // v_i proportional to b_i, with the constraint active.
    const Eigen::Index d = 2;
    Vector braw(2);
    braw << 0.2, 0.8;
    const BudgetVector budgets{braw};
    SolverConfig cfg;
    CutStore store(d, false, false, 1e-6, 1e3, 0.0, -1e12);
    Cut cut;
    cut.intercept = 0.0;
    cut.coef_v = Vector::Ones(d);
    store.add_objective_cut(cut);
    const auto res = solve_master(store, budgets, cfg);
    REQUIRE(res.status == MasterStatus::Optimal);
    // KKT: v_i = lambda b_i; constraint: sum b_i log(lambda b_i) = 0
    // => log lambda = -sum b_i log b_i.
    const double lambda = std::exp(-(0.2 * std::log(0.2) + 0.8 * std::log(0.8)));
    CHECK(res.v[0] == doctest::Approx(lambda * 0.2).epsilon(5e-4));
    CHECK(res.v[1] == doctest::Approx(lambda * 0.8).epsilon(5e-4));
}

TEST_CASE("master: adding cuts never lowers the optimum") {
    Rng rng(303);
    const Eigen::Index d = 3;
    SolverConfig cfg;
    CutStore store(d, false, false, 1e-6, 1e3, 0.0, -1e12);
    Cut first;
    first.intercept = 0.0;
    first.coef_v = Vector::Ones(d);
    store.add_objective_cut(first);
    double prev = -kInf;
    for (int k = 0; k < 8; ++k) {
        const auto res = solve_master(store, BudgetVector::equal(d), cfg);
        REQUIRE(res.status == MasterStatus::Optimal);
        CHECK(res.z >= prev - 1e-7);
        prev = res.z;
        Cut extra;
        extra.coef_v = test::random_vector(d, rng, 0.0, 2.0);
        extra.intercept = rng.uniform();
        store.add_objective_cut(extra);
    }
}

TEST_CASE("master: log cuts are valid outer approximations") {
    // Every tangent cut must be satisfied by every point of the true
    // feasible set {v > 0 : sum b_i log v_i >= 0} (concavity of log).
    Rng rng(304);
    const Eigen::Index d = 4;
    const BudgetVector budgets = BudgetVector::equal(d);
    CutStore store(d, false, false, 1e-6, 1e3, 0.0, -1e12);
    for (int k = 0; k < 10; ++k) {
        store.add_log_cut(test::random_vector(d, rng, 0.2, 3.0), budgets);
    }
    const Vector b = budgets.proportions();
    for (int rep = 0; rep < 200; ++rep) {
        Vector v = test::random_vector(d, rng, 0.05, 5.0);
        const double g = b.dot(v.array().log().matrix());
        if (g < 0.0) continue;  // only feasible points must satisfy the cuts
        for (const LogCut& cut : store.log_cuts()) {
            CHECK(cut.a.dot(v) >= cut.rhs - 1e-10);
        }
    }
    // Dedup: re-adding an existing linearization point is a no-op.
    const Vector v0 = Vector::Ones(d);
    CHECK(store.add_log_cut(v0, budgets));
    const auto before = store.log_cuts().size();
    CHECK_FALSE(store.add_log_cut(v0, budgets));
    CHECK(store.log_cuts().size() == before);
}

TEST_CASE("master: es mode carries t in the objective") {
    // One cut z >= -t binds z + t >= 0, so min t + z = 0 with t free.
    const Eigen::Index d = 2;
    SolverConfig cfg;
    CutStore store(d, /*with_t=*/true, /*z_nonneg=*/true, 1e-6, 1e3,
                   /*t_bound=*/50.0, /*z_lower=*/0.0);
    Cut cut;
    cut.intercept = 0.0;
    cut.coef_v = Vector::Zero(d);
    cut.coef_t = -1.0;
    store.add_objective_cut(cut);
    const auto res = solve_master(store, BudgetVector::equal(d), cfg);
    REQUIRE(res.status == MasterStatus::Optimal);
    CHECK(res.t + res.z == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    CHECK(res.z >= -1e-12);  // stabilization keeps z nonnegative
}

TEST_CASE("master: box bound reported active") {
    // A cut rewarding large v pushes it to the box; flag must be set.
    const Eigen::Index d = 2;
    SolverConfig cfg;
    CutStore store(d, false, false, 1e-6, /*box=*/10.0, 0.0, -1e12);
    Cut cut;
    cut.intercept = 0.0;
    cut.coef_v = Vector::Constant(d, -1.0);  // z >= -sum v_i
    store.add_objective_cut(cut);
    const auto res = solve_master(store, BudgetVector::equal(d), cfg);
    REQUIRE(res.status == MasterStatus::Optimal);
    CHECK(res.box_active);
    CHECK(res.v.maxCoeff() == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("cut store rejects bad geometry") {
    CHECK_THROWS_AS(CutStore(2, false, false, /*floor=*/2.0, /*box=*/1e3, 0.0, -1e12),
                    std::invalid_argument);
    CHECK_THROWS_AS(CutStore(2, false, false, 1e-6, /*box=*/0.5, 0.0, -1e12),
                    std::invalid_argument);
    CHECK_THROWS_AS(CutStore(2, false, false, -1.0, 1e3, 0.0, -1e12),
                    std::invalid_argument);
}
