#pragma once

#include <functional>
#include <vector>

namespace beurlab {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_floor = 1e-14;
    int max_depth = 60;
    int max_intervals = 20000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration over the finite
/// interval [a, b] (b < a gives the negated integral). Throws
/// NonconvergenceError when the error target cannot be met within the
/// subdivision limits.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same as integrate() but splits [a, b] at the given interior points first.
QuadratureResult integrate(const std::function<double(double)>& f, const std::vector<double>& points,
                           const QuadratureOptions& opts = {});

/// Integral of f over [a, b] with 0 < a, b, computed in the variable s = log w.
/// Suited to integrands that vary over several decades.
QuadratureResult integrate_log(const std::function<double(double)>& f, double a, double b,
                               const QuadratureOptions& opts = {});

}  // namespace beurlab
