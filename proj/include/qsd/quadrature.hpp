#pragma once

#include <functional>

namespace qsd {

struct QuadResult {
    double value = 0;
    double abs_error = 0;  // achieved error estimate
    bool converged = false;
    int intervals = 0;
};

// Globally adaptive Gauss-Kronrod 7/15 on [a, b]. Subdivides the interval
// with the largest error estimate until the total satisfies
// max(rel_tol * |value|, abs_tol) or the interval budget runs out (in which
// case converged = false and abs_error reports what was achieved).
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, double abs_tol = 0.0,
                        int max_intervals = 4000);

// Variant for integrands with integrable algebraic singularities at the
// domain ends: the outer quarters are mapped by x = a + u^2 and x = b - u^2,
// whose Jacobian 2u regularizes inverse-square-root blowups.
QuadResult integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                       double b, double rel_tol = 1e-10,
                                       double abs_tol = 0.0, int max_intervals = 4000);

}  // namespace qsd
