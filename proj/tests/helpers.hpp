#pragma once

#include "rb/rng.hpp"
#include "rb/types.hpp"

#include <functional>

namespace rb::test {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = lo + (hi - lo) * rng.uniform();
        }
    }
    return m;
}

inline Vector random_vector(Eigen::Index n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = lo + (hi - lo) * rng.uniform();
    return v;
}

/// Central finite-difference gradient of f at x.
inline Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                                 double h = 1e-6) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

}  // namespace rb::test
