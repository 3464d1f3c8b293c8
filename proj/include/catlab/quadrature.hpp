#pragma once

#include <functional>
#include <stdexcept>

namespace catlab {

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod 15(7) on [a,b]. Recurses on the local error
// estimate until |I15-I7| <= tol * max(1,|I|) on every subinterval.
double gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, int max_depth = 60);

// Brute-force interval-halving composite Simpson. No smoothness tricks;
// keeps halving a subinterval until the two-level estimates agree.
// Slow near endpoint singularities but robust. Used as an oracle.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-12, int max_depth = 48);

} // namespace catlab
