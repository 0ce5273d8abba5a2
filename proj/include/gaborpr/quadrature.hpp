#pragma once

#include <complex>
#include <functional>

namespace gaborpr {

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate;
    int intervals;
};

// Adaptive 7/15-point Gauss-Kronrod quadrature of a complex integrand over
// [a, b]. Bisects the interval with the largest error estimate until the total
// estimate is <= max(abs_tol, rel_tol * |value|); throws QuadratureError if
// max_intervals is reached first.
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f,
                           double a, double b, double rel_tol, double abs_tol,
                           int max_intervals = 4096);

}  // namespace gaborpr
