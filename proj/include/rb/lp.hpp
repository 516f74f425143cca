#pragma once

#include "rb/types.hpp"

#include <memory>

namespace rb::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

/// min c^T x  subject to  A x >= b,  lower <= x <= upper.
/// Every lower bound must be finite; upper bounds may be +infinity.
struct Problem {
    Matrix a;
    Vector b;
    Vector c;
    Vector lower;
    Vector upper;
};

struct Solution {
    Vector x;
    double objective = 0.0;
    Status status = Status::Optimal;
    int iterations = 0;
};

/// Dense bounded-variable two-phase primal simplex. Dantzig pricing with a
/// Bland's-rule fallback after a streak of degenerate pivots.
Solution solve(const Problem& problem, int max_iterations = 0);

namespace detail {
struct Simplex;
}

/// Simplex with row appends: rows added after a solve keep the current
/// basis, so re-optimization only repairs the handful of newly violated
/// constraints instead of starting from scratch.
class Incremental {
  public:
    /// min c^T x over lower <= x <= upper; constraints arrive via add_row.
    Incremental(Vector c, Vector lower, Vector upper);
    ~Incremental();
    Incremental(Incremental&&) noexcept;
    Incremental& operator=(Incremental&&) noexcept;

    /// Appends the constraint a^T x >= b.
    void add_row(const Vector& a, double b);
    Eigen::Index n_rows() const;

    /// Re-optimizes from the current basis; cumulative iteration count is
    /// reported in the solution.
    Solution reoptimize(int max_iterations = 0);

  private:
    std::unique_ptr<detail::Simplex> impl_;
};

}  // namespace rb::lp
