#include "rb/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace rb::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr double kFeasTol = 1e-8;

enum class VarState { Basic, AtLower, AtUpper };


}  // namespace

namespace detail {

// Bounded-variable primal simplex over rows that arrive one at a time.
// Columns: structural (n) first, then one surplus column per row plus an
// artificial column for rows that the current point violates. Appended
// rows are eliminated against the current basis, so the basis stays valid
// and re-optimization after an append repairs only the new violations.
struct Simplex {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    Eigen::Index n, m = 0, ntot;
    Vector c;             // structural objective
    RowMajor tab;         // m x ntot, B^{-1} * A_all; row-major for pivots
    Vector rhs;           // B^{-1} * b
    Vector lo, up;        // per-column bounds
    Vector xval;          // current value of every column's variable
    std::vector<VarState> state;
    std::vector<Eigen::Index> basis;      // basic column per row
    std::vector<Eigen::Index> fresh_art;  // artificials not yet driven out
    int iterations = 0;
    bool bland = false;
    int degenerate_streak = 0;

    Simplex(Vector cost, Vector lower, Vector upper)
        : n(cost.size()), ntot(n), c(std::move(cost)), lo(std::move(lower)),
          up(std::move(upper)) {
        if (lo.size() != n || up.size() != n) {
            throw std::invalid_argument("lp: bound dimension mismatch");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(lo[j])) {
                throw std::invalid_argument("lp: lower bound " + std::to_string(j) +
                                            " must be finite");
            }
        }
        tab.resize(0, n);
        rhs.resize(0);
        xval = lo;
        state.assign(static_cast<std::size_t>(n), VarState::AtLower);
    }

    void grow_columns(Eigen::Index extra) {
        tab.conservativeResize(m, ntot + extra);
        tab.rightCols(extra).setZero();
        lo.conservativeResize(ntot + extra);
        up.conservativeResize(ntot + extra);
        xval.conservativeResize(ntot + extra);
        lo.tail(extra).setZero();
        up.tail(extra).setConstant(kInf);
        xval.tail(extra).setZero();
        for (Eigen::Index k = 0; k < extra; ++k) state.push_back(VarState::AtLower);
        ntot += extra;
    }

    // Appends a^T x >= b. The current basic solution is kept; the row gets
    // its surplus as the basic variable when the point satisfies it and an
    // artificial otherwise.
    void add_row(const Vector& a, double b) {
        if (a.size() != n) throw std::invalid_argument("lp: row dimension mismatch");
        const double slack_val = a.dot(xval.head(n)) - b;
        const bool violated = slack_val < 0.0;
        const Eigen::Index scol = ntot;
        const Eigen::Index acol = violated ? ntot + 1 : -1;
        grow_columns(violated ? 2 : 1);

        // Transform the row into the current basis: eliminate every basic
        // column. Basic columns are unit columns of the tableau, so a single
        // pass in any order suffices.
        Vector trow = Vector::Zero(ntot);
        trow.head(n) = a;
        double bnew = b;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double f = trow[basis[static_cast<std::size_t>(i)]];
            if (f != 0.0) {
                trow -= f * tab.row(i).transpose();
                bnew -= f * rhs[i];
            }
        }
        trow[scol] = -1.0;
        Eigen::Index bcol;
        if (violated) {
            trow[acol] = 1.0;
            bcol = acol;
            fresh_art.push_back(acol);
        } else {
            // Flip the row so the basic surplus column carries +1.
            trow = -trow;
            bnew = -bnew;
            bcol = scol;
        }
        tab.conservativeResize(m + 1, ntot);
        tab.row(m) = trow.transpose();
        rhs.conservativeResize(m + 1);
        rhs[m] = bnew;
        basis.push_back(bcol);
        state[static_cast<std::size_t>(bcol)] = VarState::Basic;
        xval[bcol] = std::abs(slack_val);
        ++m;
    }

    // Recomputes basic values from the tableau to shed the drift that the
    // incremental updates accumulate: x_B = B^{-1} b - sum_nonbasic col_j x_j.
    void resync() {
        Vector xb = rhs;
        for (Eigen::Index j = 0; j < ntot; ++j) {
            if (state[static_cast<std::size_t>(j)] == VarState::Basic) continue;
            if (xval[j] != 0.0) xb -= tab.col(j) * xval[j];
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            xval[basis[static_cast<std::size_t>(i)]] = xb[i];
        }
    }

    Vector reduced_costs(const Vector& cost) const {
        Vector rc = cost;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double cb = cost[basis[static_cast<std::size_t>(i)]];
            if (cb != 0.0) rc -= cb * tab.row(i).transpose();
        }
        return rc;
    }

    // Returns Optimal when no improving candidate remains.
    Status iterate(const Vector& cost, int max_iterations) {
        while (iterations < max_iterations) {
            const Vector rc = reduced_costs(cost);
            Eigen::Index enter = -1;
            double best = kCostTol;
            double dir = 0.0;
            for (Eigen::Index j = 0; j < ntot; ++j) {
                const auto sj = state[static_cast<std::size_t>(j)];
                if (sj == VarState::Basic) continue;
                if (up[j] - lo[j] <= 0.0) continue;  // fixed
                double score = 0.0, d = 0.0;
                if (sj == VarState::AtLower && rc[j] < -kCostTol) {
                    score = -rc[j];
                    d = 1.0;
                } else if (sj == VarState::AtUpper && rc[j] > kCostTol) {
                    score = rc[j];
                    d = -1.0;
                } else {
                    continue;
                }
                if (bland) {
                    enter = j;
                    dir = d;
                    break;
                }
                if (score > best) {
                    best = score;
                    enter = j;
                    dir = d;
                }
            }
            if (enter < 0) {
                resync();
                return Status::Optimal;
            }
            if (iterations > 0 && iterations % 64 == 0) resync();

            // Ratio test.
            double theta = up[enter] - lo[enter];  // bound flip limit
            Eigen::Index leave_row = -1;
            bool leave_to_upper = false;
            for (Eigen::Index i = 0; i < m; ++i) {
                const double delta = dir * tab(i, enter);
                const Eigen::Index bj = basis[static_cast<std::size_t>(i)];
                if (delta > kPivotTol) {
                    const double room = (xval[bj] - lo[bj]) / delta;
                    if (room < theta - 1e-12 ||
                        (bland && leave_row >= 0 && room <= theta + 1e-12 &&
                         bj < basis[static_cast<std::size_t>(leave_row)])) {
                        theta = std::max(room, 0.0);
                        leave_row = i;
                        leave_to_upper = false;
                    }
                } else if (delta < -kPivotTol && up[bj] < kInf) {
                    const double room = (up[bj] - xval[bj]) / (-delta);
                    if (room < theta - 1e-12 ||
                        (bland && leave_row >= 0 && room <= theta + 1e-12 &&
                         bj < basis[static_cast<std::size_t>(leave_row)])) {
                        theta = std::max(room, 0.0);
                        leave_row = i;
                        leave_to_upper = true;
                    }
                }
            }
            if (!std::isfinite(theta)) return Status::Unbounded;

            ++iterations;
            if (theta <= 1e-12) {
                if (++degenerate_streak > 60) bland = true;
            } else {
                degenerate_streak = 0;
            }

            // Move the entering variable and update basic values.
            if (theta > 0.0) {
                for (Eigen::Index i = 0; i < m; ++i) {
                    xval[basis[static_cast<std::size_t>(i)]] -= dir * theta * tab(i, enter);
                }
                xval[enter] += dir * theta;
            }
            if (leave_row < 0) {
                // Pure bound flip.
                state[static_cast<std::size_t>(enter)] =
                    dir > 0.0 ? VarState::AtUpper : VarState::AtLower;
                xval[enter] = dir > 0.0 ? up[enter] : lo[enter];
                continue;
            }
            const Eigen::Index leave = basis[static_cast<std::size_t>(leave_row)];
            state[static_cast<std::size_t>(leave)] =
                leave_to_upper ? VarState::AtUpper : VarState::AtLower;
            xval[leave] = leave_to_upper ? up[leave] : lo[leave];
            state[static_cast<std::size_t>(enter)] = VarState::Basic;
            basis[static_cast<std::size_t>(leave_row)] = enter;

            // Pivot.
            const double piv = tab(leave_row, enter);
            tab.row(leave_row) /= piv;
            rhs[leave_row] /= piv;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (i == leave_row) continue;
                const double f = tab(i, enter);
                if (f != 0.0) {
                    tab.row(i) -= f * tab.row(leave_row);
                    rhs[i] -= f * rhs[leave_row];
                }
            }
        }
        return Status::IterationLimit;
    }

    Solution reoptimize(int max_iterations) {
        if (max_iterations <= 0) {
            max_iterations = 20000 + 200 * static_cast<int>(m + n);
        }
        max_iterations += iterations;
        Solution out;

        if (!fresh_art.empty()) {
            Vector phase1 = Vector::Zero(ntot);
            for (const Eigen::Index j : fresh_art) phase1[j] = 1.0;
            bland = false;
            degenerate_streak = 0;
            const Status st = iterate(phase1, max_iterations);
            out.iterations = iterations;
            if (st == Status::IterationLimit) {
                out.status = Status::IterationLimit;
                return out;
            }
            double infeas = 0.0;
            for (const Eigen::Index j : fresh_art) infeas += xval[j];
            if (infeas > kFeasTol) {
                out.status = Status::Infeasible;
                return out;
            }
            // Freeze the artificials at zero from here on.
            for (const Eigen::Index j : fresh_art) {
                up[j] = 0.0;
                xval[j] = 0.0;
            }
            fresh_art.clear();
        }

        Vector phase2 = Vector::Zero(ntot);
        phase2.head(n) = c;
        bland = false;
        degenerate_streak = 0;
        const Status st = iterate(phase2, max_iterations);
        out.iterations = iterations;
        if (st != Status::Optimal) {
            out.status = st;
            return out;
        }
        out.x = xval.head(n);
        out.objective = c.dot(out.x);
        out.status = Status::Optimal;
        return out;
    }
};

}  // namespace detail

Incremental::Incremental(Vector c, Vector lower, Vector upper)
    : impl_(std::make_unique<detail::Simplex>(std::move(c), std::move(lower),
                                              std::move(upper))) {}
Incremental::~Incremental() = default;
Incremental::Incremental(Incremental&&) noexcept = default;
Incremental& Incremental::operator=(Incremental&&) noexcept = default;

void Incremental::add_row(const Vector& a, double b) { impl_->add_row(a, b); }

Eigen::Index Incremental::n_rows() const { return impl_->m; }

Solution Incremental::reoptimize(int max_iterations) {
    return impl_->reoptimize(max_iterations);
}

Solution solve(const Problem& p, int max_iterations) {
    const Eigen::Index m = p.a.rows();
    const Eigen::Index n = p.a.cols();
    if (p.b.size() != m || p.c.size() != n || p.lower.size() != n || p.upper.size() != n) {
        throw std::invalid_argument("lp::solve: dimension mismatch");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (p.upper[j] < p.lower[j]) {
            Solution s;
            s.status = Status::Infeasible;
            return s;
        }
    }
    detail::Simplex sx(p.c, p.lower, p.upper);
    for (Eigen::Index i = 0; i < m; ++i) {
        sx.add_row(p.a.row(i).transpose(), p.b[i]);
    }
    return sx.reoptimize(max_iterations);
}

}  // namespace rb::lp
