#include "rb/master_problem.hpp"

#include "rb/sgd_es.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace rb {

namespace {
constexpr int kMaxKelley = 4000;

// Tangent budget for a single call. Approximating the log surface tightly
// needs exponentially many planes as the dimension grows, so a call gives
// up after this many refinements and returns the projected point: it is
// exactly feasible, the LP value stays a valid lower bound, and the
// accumulated tangents persist into the next call.
int kelley_budget(Eigen::Index d) {
    return std::max(60, static_cast<int>(2000 / d));
}
}  // namespace

CutStore::CutStore(Eigen::Index d, bool with_t, bool z_nonneg, double floor, double box_bound,
                   double t_bound, double z_lower)
    : d_(d), with_t_(with_t), z_nonneg_(z_nonneg), floor_(floor), box_bound_(box_bound),
      t_bound_(t_bound), z_lower_(z_lower) {
    if (d < 1) throw std::invalid_argument("CutStore: need at least one asset");
    if (!(floor > 0.0) || !(box_bound > floor) || floor >= 1.0 || box_bound <= 1.0) {
        // The all-ones start point must be interior.
        throw std::invalid_argument("CutStore: need 0 < floor < 1 < box_bound");
    }
}

void CutStore::add_objective_cut(Cut cut) {
    if (cut.coef_v.size() != d_ || !cut.coef_v.allFinite() || !std::isfinite(cut.intercept) ||
        !std::isfinite(cut.coef_t)) {
        throw std::invalid_argument("CutStore: invalid cut");
    }
    cuts_.push_back(std::move(cut));
}

bool CutStore::add_log_cut(const Vector& v0, const BudgetVector& budgets) {
    // A tangent at distance delta from an existing linearization point only
    // improves the outer approximation by O(delta^2), so nearby duplicates
    // add nothing but degenerate near-parallel rows.
    for (const Vector& prev : log_points_) {
        if ((prev - v0).lpNorm<Eigen::Infinity>() <= 1e-8) return false;
    }
    const Vector& b = budgets.values();
    // sum_i B_i [log v0_i + (v_i - v0_i)/v0_i] >= 0
    LogCut cut;
    cut.a = b.cwiseQuotient(v0);
    cut.rhs = b.sum();
    for (Eigen::Index i = 0; i < d_; ++i) {
        cut.rhs -= b[i] * std::log(v0[i]);
    }
    log_cuts_.push_back(std::move(cut));
    log_points_.push_back(v0);
    return true;
}

void CutStore::dump(std::ostream& out) const {
    out << "# master problem: " << d_ << " assets, " << cuts_.size() << " objective cuts, "
        << log_cuts_.size() << " log cuts\n";
    out << "# variables: v[0.." << d_ - 1 << "]";
    if (with_t_) out << ", t";
    out << ", z\n";
    for (const Cut& c : cuts_) {
        out << "z >= " << c.intercept;
        for (Eigen::Index i = 0; i < d_; ++i) out << " + " << c.coef_v[i] << "*v" << i;
        if (with_t_) out << " + " << c.coef_t << "*t";
        out << "\n";
    }
    for (const LogCut& c : log_cuts_) {
        bool first = true;
        for (Eigen::Index i = 0; i < d_; ++i) {
            out << (first ? "" : " + ") << c.a[i] << "*v" << i;
            first = false;
        }
        out << " >= " << c.rhs << "\n";
    }
    for (Eigen::Index i = 0; i < d_; ++i) {
        out << floor_ << " <= v" << i << " <= " << box_bound_ << "\n";
    }
    if (with_t_) out << -t_bound_ << " <= t <= " << t_bound_ << "\n";
    out << "z >= " << (z_nonneg_ ? 0.0 : z_lower_) << "\n";
}

namespace {

// Column data of the master LP: variables v, optional t, and z.
void master_columns(const CutStore& store, bool with_t, Vector& c, Vector& lower,
                    Vector& upper) {
    const Eigen::Index d = store.n_assets();
    const Eigen::Index zi = d + (with_t ? 1 : 0);
    const Eigen::Index n = zi + 1;
    c.setZero(n);
    lower.setZero(n);
    upper.setZero(n);
    lower.head(d).setConstant(store.floor());
    upper.head(d).setConstant(store.box_bound());
    if (with_t) {
        lower[d] = -store.t_bound();
        upper[d] = store.t_bound();
        c[d] = 1.0;
    }
    lower[zi] = store.z_nonneg() ? 0.0 : store.z_lower();
    upper[zi] = std::numeric_limits<double>::infinity();
    c[zi] = 1.0;
}

// Deterministic per-row relaxation in [1e-11, 2e-11] (relative). Shifting
// each right-hand side down by a distinct tiny amount makes the vertices of
// the cut polyhedron generic: without it, hundreds of near-parallel cuts
// meet at one point and the simplex cycles on the degenerate vertex. The
// perturbed LP contains the true one, so its value stays a valid lower
// bound, and the solution moves by no more than the perturbation scale.
double row_relaxation(Eigen::Index r) {
    std::uint64_t h = static_cast<std::uint64_t>(r) + 0x9e3779b97f4a7c15ull;
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    return 1e-11 * (1.0 + static_cast<double>(h % 1024) / 1024.0);
}

// Full-problem row r: objective cuts first, log cuts after. Writes the
// constraint a^T x >= b over the master's column layout (v, optional t, z).
void fill_row(const CutStore& store, bool with_t, Eigen::Index r, Vector& a, double& b) {
    const Eigen::Index d = store.n_assets();
    const Eigen::Index zi = d + (with_t ? 1 : 0);
    const auto n_cuts = static_cast<Eigen::Index>(store.objective_cuts().size());
    a.setZero(zi + 1);
    if (r < n_cuts) {
        const Cut& c = store.objective_cuts()[static_cast<std::size_t>(r)];
        a.head(d) = -c.coef_v;
        if (with_t) a[d] = -c.coef_t;
        a[zi] = 1.0;
        b = c.intercept;
    } else {
        const LogCut& c = store.log_cuts()[static_cast<std::size_t>(r - n_cuts)];
        a.head(d) = c.a;
        b = c.rhs;
    }
    b -= row_relaxation(r) * (1.0 + std::abs(b));
}

// Maintains a small active subset of the cut rows inside an incremental
// simplex: only a handful of rows can bind at an optimum (the LP has few
// columns), so appending violated rows to a warm basis until none remain
// gives the exact full-problem optimum at a fraction of the dense cost.
class ActiveSetLP {
  public:
    ActiveSetLP(const CutStore& store, bool with_t, Vector c, Vector lower, Vector upper)
        : store_(store), with_t_(with_t),
          inc_(std::move(c), std::move(lower), std::move(upper)) {}

    bool contains(Eigen::Index r) const {
        return r < static_cast<Eigen::Index>(added_.size()) &&
               added_[static_cast<std::size_t>(r)];
    }

    void add(Eigen::Index r) {
        if (contains(r)) return;
        if (r >= static_cast<Eigen::Index>(added_.size())) {
            added_.resize(static_cast<std::size_t>(r) + 1, 0);
        }
        added_[static_cast<std::size_t>(r)] = 1;
        Vector a;
        double b;
        fill_row(store_, with_t_, r, a, b);
        inc_.add_row(a, b);
    }

    // Re-optimizes and folds in violated rows until the solution satisfies
    // every row of the full problem.
    lp::Solution solve(int* lp_solves) {
        for (;;) {
            lp::Solution sol = inc_.reoptimize();
            ++*lp_solves;
            if (sol.status != lp::Status::Optimal) return sol;
            const auto n_cuts = static_cast<Eigen::Index>(store_.objective_cuts().size());
            const auto m = n_cuts + static_cast<Eigen::Index>(store_.log_cuts().size());
            bool dirty = false;
            Vector a;
            double b;
            for (Eigen::Index r = 0; r < m; ++r) {
                if (contains(r)) continue;
                fill_row(store_, with_t_, r, a, b);
                if (a.dot(sol.x) - b < -1e-9 * (1.0 + std::abs(b))) {
                    add(r);
                    dirty = true;
                }
            }
            if (!dirty) return sol;
        }
    }

  private:
    const CutStore& store_;
    bool with_t_;
    lp::Incremental inc_;
    std::vector<char> added_;
};

double log_constraint_value(const Vector& v, const BudgetVector& budgets, double floor) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        s += budgets.values()[i] * std::log(std::max(v[i], floor));
    }
    return s;
}

}  // namespace

MasterResult solve_master(CutStore& store, const BudgetVector& budgets,
                          const SolverConfig& cfg) {
    if (budgets.size() != store.n_assets()) {
        throw std::invalid_argument("solve_master: budget dimension mismatch");
    }
    if (store.objective_cuts().empty() && !store.z_nonneg()) {
        throw std::invalid_argument("solve_master: no objective cut and z unbounded below");
    }
    const Eigen::Index d = store.n_assets();
    const bool with_t = store.with_t();

    // Seed the log constraint with the tangent at the all-ones point.
    if (store.log_cuts().empty()) {
        store.add_log_cut(Vector::Ones(d), budgets);
    }

    MasterResult res;
    // The active set starts from the rows that were (nearly) binding at the
    // previous optimum plus the most recent cuts; earlier rows fold in on
    // demand when the solution violates them. Hot rows are encoded stably:
    // e >= 0 is objective cut e, e < 0 is log cut -(e + 1), so the entries
    // survive cuts added between calls.
    Vector c, lower, upper;
    master_columns(store, with_t, c, lower, upper);
    ActiveSetLP active(store, with_t, std::move(c), std::move(lower), std::move(upper));
    const auto n_cuts = static_cast<Eigen::Index>(store.objective_cuts().size());
    const auto n_logs = static_cast<Eigen::Index>(store.log_cuts().size());
    for (const Eigen::Index e : store.hot_rows()) {
        const Eigen::Index r = e >= 0 ? e : n_cuts + (-e - 1);
        if ((e >= 0 && e < n_cuts) || (e < 0 && -e - 1 < n_logs)) active.add(r);
    }
    const Eigen::Index recent = store.hot_rows().empty() ? 32 : 4;
    for (Eigen::Index r = std::max<Eigen::Index>(0, n_cuts - recent); r < n_cuts; ++r) {
        active.add(r);
    }
    for (Eigen::Index r = std::max<Eigen::Index>(0, n_logs - recent); r < n_logs; ++r) {
        active.add(n_cuts + r);
    }
    for (int it = 0; it < kMaxKelley; ++it) {
        lp::Solution sol = active.solve(&res.lp_solves);
        if (sol.status == lp::Status::Infeasible) {
            res.status = MasterStatus::Infeasible;
            return res;
        }
        if (sol.status != lp::Status::Optimal) {
            if (sol.status == lp::Status::IterationLimit && it > 0) {
                // The warm simplex stalled numerically after many appends.
                // The previous iterate's bound and projection remain valid,
                // so settle for them; the next call starts from a fresh
                // factorization.
                if (log_constraint_value(res.v, budgets, store.floor()) < 0.0) {
                    res.v = project_log_simplex(res.v.cwiseMax(store.floor()), budgets);
                }
                res.status = MasterStatus::Optimal;
                res.box_active =
                    (res.v.maxCoeff() >= store.box_bound() - 1e-6 * store.box_bound());
                res.floor_distance = (res.v.array() - store.floor()).minCoeff();
                return res;
            }
            res.status = sol.status == lp::Status::Unbounded ? MasterStatus::Unbounded
                                                             : MasterStatus::InnerIterationLimit;
            return res;
        }
        res.v = sol.x.head(d);
        res.t = with_t ? sol.x[d] : 0.0;
        res.z = sol.x[d + (with_t ? 1 : 0)];
        res.kelley_iterations = it + 1;

        const double violation = log_constraint_value(res.v, budgets, store.floor());
        bool accept = violation >= -cfg.master_feasibility || it + 1 >= kelley_budget(d);
        if (!accept) {
            // Tangent at the Euclidean projection of the LP point onto the
            // constraint set: the supporting hyperplane there separates the
            // LP point along the normal direction, which cuts far more
            // deeply than a tangent at the (possibly extreme) point itself.
            // A repeated tangent point means the LP point has stopped
            // moving, so further refinement is futile: settle for the
            // projection in that case.
            const Vector clipped = res.v.cwiseMax(store.floor());
            if (store.add_log_cut(project_log_simplex(clipped, budgets), budgets)) {
                active.add(n_cuts + static_cast<Eigen::Index>(store.log_cuts().size()) - 1);
            } else {
                accept = true;
            }
        }
        if (accept) {
            // Replace the near-feasible LP point by its Euclidean projection
            // onto the log-constraint set: the projection is exactly
            // feasible while t and z keep their LP values, which remain
            // valid lower bounds from the outer approximation.
            // Cache the rows near-active at the LP point to seed the next
            // call's active set.
            {
                std::vector<std::pair<double, Eigen::Index>> scored;
                const auto total = n_cuts + static_cast<Eigen::Index>(store.log_cuts().size());
                Vector a;
                double b;
                for (Eigen::Index r = 0; r < total; ++r) {
                    fill_row(store, with_t, r, a, b);
                    const double slack = a.dot(sol.x) - b;
                    if (slack <= 1e-7 * (1.0 + std::abs(b))) scored.emplace_back(slack, r);
                }
                const auto cap = static_cast<std::size_t>(2 * (d + 2));
                if (scored.size() > cap) {
                    std::nth_element(scored.begin(),
                                     scored.begin() + static_cast<std::ptrdiff_t>(cap),
                                     scored.end());
                    scored.resize(cap);
                }
                store.hot_rows().clear();
                for (const auto& [slack, r] : scored) {
                    store.hot_rows().push_back(r < n_cuts ? r : -(r - n_cuts) - 1);
                }
            }
            if (violation < 0.0) {
                res.v = project_log_simplex(res.v.cwiseMax(store.floor()), budgets);
                // Leave the supporting tangent at the projection for the
                // next call.
                store.add_log_cut(res.v, budgets);
            }
            res.status = MasterStatus::Optimal;
            res.box_active =
                (res.v.maxCoeff() >= store.box_bound() - 1e-6 * store.box_bound());
            res.floor_distance = (res.v.array() - store.floor()).minCoeff();
            return res;
        }
    }
    res.status = MasterStatus::InnerIterationLimit;
    return res;
}

}  // namespace rb
