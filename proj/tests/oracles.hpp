#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Plain interval-halving Simpson (no Gauss-Kronrod machinery).
inline double simpson_halving(const std::function<double(double)>& f, double a, double b,
                              double tol = 1e-13, int depth = 40) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double x0, double x1, double f0, double fm, double f1, double t,
            int d) -> double {
        double m = 0.5 * (x0 + x1);
        double whole = (x1 - x0) / 6.0 * (f0 + 4 * fm + f1);
        double fl = f(0.5 * (x0 + m)), fr = f(0.5 * (m + x1));
        double left = (m - x0) / 6.0 * (f0 + 4 * fl + fm);
        double right = (x1 - m) / 6.0 * (fm + 4 * fr + f1);
        if (d <= 0 || std::abs(left + right - whole) < t) return left + right;
        return rec(x0, m, f0, fl, fm, 0.5 * t, d - 1) +
               rec(m, x1, fm, fr, f1, 0.5 * t, d - 1);
    };
    return rec(a, b, f(a), f(0.5 * (a + b)), f(b), tol, depth);
}

// Interval-halving Simpson oracle for S(n) = int_1^inf df / sqrt(f^{2(n-1)}-1),
// split at f=2: head with f = 1+v^2 (removes the sqrt endpoint), tail with
// f = 1/u. Both integrands are smooth; the substitutions and the base rule
// differ from the implementation path.
inline double endpoint_S_bruteforce(int n) {
    const int m = 2 * (n - 1);
    auto head = [m](double v) {
        if (v == 0.0) return 2.0 / std::sqrt(static_cast<double>(m));
        double den = std::expm1(m * std::log1p(v * v)); // (1+v^2)^m - 1, stable
        return 2.0 * v / std::sqrt(den);
    };
    auto tail = [n, m](double u) {
        return std::pow(u, n - 3) / std::sqrt(1.0 - std::pow(u, m));
    };
    return simpson_halving(head, 0.0, 1.0) + simpson_halving(tail, 0.0, 0.5);
}

// Same oracle flavor for the truncated integral int_1^F df / sqrt(f^{2(n-1)}-1),
// used to cross-check the height quadrature z(rho) at F = <rho>.
inline double height_truncated_oracle(int n, double F) {
    const int m = 2 * (n - 1);
    auto head = [m](double v) {
        if (v == 0.0) return 2.0 / std::sqrt(static_cast<double>(m));
        double den = std::expm1(m * std::log1p(v * v));
        return 2.0 * v / std::sqrt(den);
    };
    return simpson_halving(head, 0.0, std::sqrt(F - 1.0));
}

// Closed Beta-function form, S = B(1/2 - 1/(2(n-1)), 1/2) / (2(n-1)).
inline double endpoint_S_beta(int n) {
    double p = 0.5 - 0.5 / (n - 1.0), q = 0.5;
    double lb = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
    return std::exp(lb) / (2.0 * (n - 1.0));
}

// least-squares slope of y against x
inline double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = static_cast<int>(x.size());
    for (int i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// slope of log(err) vs log(h) across a refinement ladder
inline double convergence_slope(const std::vector<double>& h, const std::vector<double>& err) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < h.size(); ++i) {
        lx.push_back(std::log(h[i]));
        ly.push_back(std::log(err[i]));
    }
    return lsq_slope(lx, ly);
}

} // namespace oracle
