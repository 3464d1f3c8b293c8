#pragma once

#include <limits>
#include <string>
#include <vector>

#include "catlab/errors.hpp"

namespace catlab {

// The n-dimensional Riemannian catenoid in the rho parametrization:
// radius <rho> = sqrt(1+rho^2), height z(rho) from quadrature, metric
//   g_rr = rho^2 <rho>^{2(n-2)} / (<rho>^{2(n-1)} - 1),
// volume weight w = sqrt(g_rr) <rho>^{n-1}, |II|^2 = n(n-1) <rho>^{-2n}.
//
// All metric coefficients come from closed forms; only z needs quadrature.
// The removable singularity of g_rr at rho=0 is eliminated exactly by the
// binomial polynomial q(x) = ((1+x)^{n-1}-1)/x.
class CatenoidGeometry {
public:
    CatenoidGeometry(int n, double rho_max, int N);

    int n() const { return n_; }
    double rho_max() const { return rho_max_; }
    int grid_count() const { return static_cast<int>(grid_.size()); }
    double endpoint_S() const { return S_; } // inf sentinel when n == 2

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& height() const { return z_; }
    const std::vector<double>& g_rr() const { return g_rr_; }
    const std::vector<double>& volume_weight() const { return w_; }
    const std::vector<double>& second_fundamental_sq() const { return ii_sq_; }

    // closed forms, valid at any rho
    double radius(double rho) const;           // <rho>
    double q_poly(double x) const;              // ((1+x)^{n-1}-1)/x, exact
    double g_rr_at(double rho) const;
    double weight_at(double rho) const;         // sqrt(g_rr) <rho>^{n-1}
    double flux_coeff_at(double rho) const;     // <rho>^{n-1} / sqrt(g_rr)
    double ii_sq_at(double rho) const;          // n(n-1) <rho>^{-2n}
    double height_at(double rho) const;         // z(rho), odd, by quadrature
    double dz_drho(double rho) const;           // smooth even integrand of z

    std::string to_json() const;
    void write_csv(const std::string& path) const; // (rho, z, g_rr, |II|^2)

private:
    int n_;
    double rho_max_;
    double S_;
    std::vector<double> grid_, z_, g_rr_, w_, ii_sq_;
    std::vector<double> binom_; // binomial coefficients of q_poly
};

// S(n) = int_1^inf df / sqrt(f^{2(n-1)} - 1), n >= 3. Computed by the
// f = 1/u substitution followed by u = 1 - v^2 (removes the endpoint
// singularity) and adaptive Gauss-Kronrod. Throws DivergentIntegral for n=2.
double endpoint_S(int n, double rel_tol = 1e-12);

struct PrincipalCurvatures {
    double lambda1;
    double lambda_bar;
    double ii_sq;
};
PrincipalCurvatures second_fundamental(const CatenoidGeometry& g, double rho);

// Ambient Lorentz boost Lambda_ell on R^{1+(n+1)} with ell in R^n embedded
// as (ell, 0), and its n x n spatial part A_ell = gamma P_ell + P_ell_perp.
struct BoostData {
    int n;
    std::vector<double> ell;
    double gamma;
    std::vector<std::vector<double>> Lambda; // (n+2) x (n+2)
    std::vector<std::vector<double>> A;      // n x n
};
BoostData boost(const std::vector<double>& ell);

std::vector<double> apply_matrix(const std::vector<std::vector<double>>& M,
                                 const std::vector<double>& x);

// Catenoid end as a graph over the hyperplane: Q(r), Q'(r), Q''(r) for the
// geometric radius r >= 1, with Q'(r) = 1 / sqrt(r^{2(n-1)} - 1).
struct GraphProfile {
    int n;
    double S;
    double Q(double r) const;
    double Qp(double r) const;
    double Qpp(double r) const;
};
GraphProfile graph_profile(const CatenoidGeometry& g);

// Point of the boosted and translated Lorentzian catenoid
//   Lambda_{-ell0} (t, F(rho,omega)) + (0, a0),
// with F(rho,omega) = (<rho> Theta(omega), Z(rho)) and omega given in the
// polar chart of S^{n-1}. Returns the ambient R^{1+(n+1)} point.
std::vector<double> boosted_catenoid_point(const CatenoidGeometry& g,
                                           const std::vector<double>& a0,
                                           const std::vector<double>& ell0,
                                           double t, double rho,
                                           const std::vector<double>& omega);

} // namespace catlab
