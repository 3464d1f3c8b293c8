#pragma once

#include <map>
#include <memory>
#include <vector>

#include "catlab/errors.hpp"
#include "catlab/sphere.hpp"

namespace catlab {

// Shared radial grid for leaf fields. Cell-centered, uniform, symmetric:
// rho_i = -rho_max + (i + 1/2) h.
struct LeafGrid {
    int n;          // ambient sphere dimension parameter (S^{n-1})
    double rho_max;
    int N;
    double h;
    std::vector<double> rho;
    LeafGrid(int n_, double rho_max_, int N_);
};
using LeafGridPtr = std::shared_ptr<const LeafGrid>;

// Function on the leaf represented as u(rho, omega) = sum_a c_a(rho) Theta^a,
// with Theta the ambient coordinates of S^{n-1} and each radial coefficient
// sampled on the shared grid. Angular operations (products, the sphere
// Laplacian, tangential gradient contractions, sphere integrals) are exact;
// radial derivatives are finite differences on the grid.
class Field {
public:
    Field() = default;
    explicit Field(LeafGridPtr g) : grid_(std::move(g)) {}

    static Field radial(LeafGridPtr g, std::vector<double> c); // monomial 1
    static Field monomial(LeafGridPtr g, const MultiIndex& a, std::vector<double> c);
    static Field zero(LeafGridPtr g) { return Field(std::move(g)); }

    const LeafGridPtr& grid() const { return grid_; }
    bool empty() const { return terms_.empty(); }
    int max_degree() const;
    const std::map<MultiIndex, std::vector<double>>& terms() const { return terms_; }

    Field& add_term(const MultiIndex& a, const std::vector<double>& c, double scale = 1.0);

    Field operator+(const Field& o) const;
    Field operator-(const Field& o) const;
    Field operator*(double s) const;
    Field& operator+=(const Field& o);

    // pointwise product; terms with negligible radial magnitude are dropped
    Field mul(const Field& o) const;
    Field mul_radial(const std::vector<double>& c) const;

    Field deriv_rho() const;            // 2nd-order central differences
    Field laplace_sphere() const;       // exact on the representation
    // G(f,g) = round-metric contraction of tangential gradients, exact
    static Field grad_sphere_dot(const Field& f, const Field& g);

    // int u v  drho domega  (exact sphere moments, midpoint sum in rho)
    static double pair(const Field& u, const Field& v);
    double integral() const; // int u drho domega

    double eval(int i, const std::vector<double>& theta_point) const; // Theta given
    double sup_abs() const;
    // sup over |rho| <= r0 of the radial l-infinity of all terms combined
    double sup_abs_interior(double r0) const;

    void prune(double tol = 1e-300);

private:
    LeafGridPtr grid_;
    std::map<MultiIndex, std::vector<double>> terms_;
    void check_same(const Field& o) const;
};

// First-order state on a leaf: (psi, psi_dot) with the sqrt|h| weight
// convention baked into psi_dot. Carries the modulation coefficients.
struct FirstOrderState {
    Field psi;
    Field psi_dot;
    double time = 0.0;
};

// symplectic form Omega(u,v) = int (u1 v2 - u2 v1) drho domega
double symplectic_form(const FirstOrderState& u, const FirstOrderState& v);

} // namespace catlab
