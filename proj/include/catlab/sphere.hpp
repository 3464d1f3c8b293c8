#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace catlab {

// Monomial exponent vector for polynomials in the ambient coordinates of
// S^{n-1} subset R^n. Supports n <= MAX_AMBIENT.
constexpr int MAX_AMBIENT = 8;
using MultiIndex = std::array<std::uint8_t, MAX_AMBIENT>;

inline int mi_degree(const MultiIndex& a) {
    int d = 0;
    for (auto e : a) d += e;
    return d;
}

// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
double sphere_area(int n);

// Exact moment of a monomial over the round unit sphere:
//   int_{S^{n-1}} x^alpha dS = 2 prod_i Gamma((alpha_i+1)/2) / Gamma((n+|alpha|)/2)
// when every alpha_i is even, 0 otherwise.
double sphere_monomial_moment(int n, const MultiIndex& alpha);

// Standard polar chart Theta: (theta_1..theta_{n-1}) -> S^{n-1} in R^n,
//   x_1 = cos t1, x_2 = sin t1 cos t2, ..., x_n = sin t1 ... sin t_{n-1},
// together with the chart derivatives dTheta/dtheta_a and the round metric
// g_ab = dTheta_a . dTheta_b in this chart.
struct SphereChart {
    int n;
    explicit SphereChart(int n_) : n(n_) {}
    std::vector<double> point(const std::vector<double>& theta) const;
    // columns: dTheta/dtheta_a, a = 0..n-2
    std::vector<std::vector<double>> jacobian(const std::vector<double>& theta) const;
};

} // namespace catlab
