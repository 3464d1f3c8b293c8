#include "catlab/sphere.hpp"

#include <cmath>

namespace catlab {

double sphere_area(int n) {
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double sphere_monomial_moment(int n, const MultiIndex& alpha) {
    int deg = 0;
    for (int i = 0; i < n; ++i) {
        if (alpha[i] % 2 != 0) return 0.0;
        deg += alpha[i];
    }
    for (int i = n; i < MAX_AMBIENT; ++i)
        if (alpha[i] != 0) return 0.0;
    // work in logs to stay stable for large degrees
    double lg = 0.0;
    for (int i = 0; i < n; ++i) lg += std::lgamma(0.5 * (alpha[i] + 1.0));
    lg -= std::lgamma(0.5 * (n + deg));
    return 2.0 * std::exp(lg);
}

std::vector<double> SphereChart::point(const std::vector<double>& theta) const {
    std::vector<double> x(n, 0.0);
    double s = 1.0;
    for (int i = 0; i < n - 1; ++i) {
        x[i] = s * std::cos(theta[i]);
        s *= std::sin(theta[i]);
    }
    x[n - 1] = s;
    return x;
}

std::vector<std::vector<double>> SphereChart::jacobian(const std::vector<double>& theta) const {
    // dx_i/dtheta_a computed from the product form
    std::vector<std::vector<double>> J(n - 1, std::vector<double>(n, 0.0));
    for (int a = 0; a < n - 1; ++a) {
        for (int i = 0; i < n; ++i) {
            // x_i = prod_{k<i} sin t_k * (cos t_i if i<n-1 else 1)
            if (a > i) continue; // x_i does not involve theta_a for a > i
            double v = 1.0;
            for (int k = 0; k < std::min(i, n - 1); ++k) {
                double f = std::sin(theta[k]);
                if (k == a) f = std::cos(theta[k]);
                v *= f;
            }
            if (i < n - 1) {
                double f = std::cos(theta[i]);
                if (i == a) f = -std::sin(theta[i]);
                v *= f;
            }
            J[a][i] = v;
        }
    }
    return J;
}

} // namespace catlab
