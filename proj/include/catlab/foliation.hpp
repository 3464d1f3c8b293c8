#pragma once

#include <functional>
#include <vector>

#include "catlab/errors.hpp"
#include "catlab/sphere.hpp"

namespace catlab {

// C^2 smoothed minimum: m(x,y) = (x + y - rho_d(x-y))/2 with
// rho_d(s) = delta1 * rhohat(s/delta1), rhohat(s) = |s| for |s| >= 1 and the
// convex even quartic 3/8 + 3 s^2/4 - s^4/8 on [-1,1].
struct SmoothedMin {
    double delta1;
    explicit SmoothedMin(double d1) : delta1(d1) {}
    double operator()(double x, double y) const;
    double rhohat(double s) const;
};

// Boost/translation parameter curves sigma -> xi(sigma), ell(sigma) in R^n,
// stored as samples with monotone cubic (Fritsch-Carlson) interpolation.
// Derivatives come from the interpolant.
class ParameterCurves {
public:
    ParameterCurves(int n, std::vector<double> sigma,
                    std::vector<std::vector<double>> xi,
                    std::vector<std::vector<double>> ell, double R = 20.0,
                    double delta1 = 1.0);

    static ParameterCurves constant(int n, const std::vector<double>& xi0,
                                    const std::vector<double>& ell0, double R = 20.0,
                                    double delta1 = 1.0);
    // xi(sigma) = xi0 + sigma*ell with constant ell (pdot = 0 configuration)
    static ParameterCurves comoving(int n, const std::vector<double>& xi0,
                                    const std::vector<double>& ell0, double R = 20.0,
                                    double delta1 = 1.0);

    int dim() const { return n_; }
    double R() const { return R_; }
    double delta1() const { return delta1_; }

    std::vector<double> xi(double s) const;
    std::vector<double> ell(double s) const;
    std::vector<double> xi_dot(double s) const;
    std::vector<double> ell_dot(double s) const;
    double gamma(double s) const;
    double gamma_dot(double s) const;
    std::vector<double> eta(double s) const;       // xi - gamma R ell
    std::vector<double> eta_dot_sigma(double s) const;
    double dtau_dsigma(double s) const;            // 1 - gamma' R
    double tau_of_sigma(double s) const { return s - gamma(s) * R_; }
    double sigma_of_tau(double tau) const;         // inverse by bisection
    // eta' = d eta / d tau
    std::vector<double> eta_prime(double s) const;

private:
    int n_;
    double R_, delta1_;
    std::vector<double> s_;
    std::vector<std::vector<double>> xi_, ell_;   // [sample][component]
    std::vector<std::vector<double>> dxi_, dell_; // Hermite slopes
    void eval(const std::vector<std::vector<double>>& v,
              const std::vector<std::vector<double>>& dv, double s,
              std::vector<double>* out, std::vector<double>* dout) const;
};

// sigma(X) = m(X^0, sigma_temp(X)) where sigma_temp is the root of
// X^0 - s + gamma R = sqrt(|X' - xi + gamma R ell|^2 + 1).
double sigma_temp_at(const std::vector<double>& X, const ParameterCurves& pc);
double sigma_at(const std::vector<double>& X, const ParameterCurves& pc);

// Leaf chart: x' = eta(tau) + r Theta(theta); x^0 from the hyperboloidal or
// flat branch, blended by the smoothed minimum in the transition band.
// Returns the (1+n)-dimensional point on the {X^{n+1}=S} slice.
std::vector<double> leaf_point(double sigma, double r, const std::vector<double>& theta,
                               const ParameterCurves& pc);
// purely hyperboloidal branch (x^0 = tau + <r>), used in the exterior
std::vector<double> leaf_point_hyp(double sigma, double r, const std::vector<double>& theta,
                                   const ParameterCurves& pc);

struct FrameVectors {
    std::vector<double> L, Lbar, T;           // ambient (1+n) components
    std::vector<std::vector<double>> Omega;   // n(n-1)/2 rotations, (j,k) lexicographic
    double r_tilde;                           // |y'|
    // coefficients of L in the (tau, r, theta) coordinate basis
    std::vector<double> L_coords;
};

FrameVectors frame_at(double sigma, double r, const std::vector<double>& theta,
                      const ParameterCurves& pc);

// Minkowski inner product on the (1+n)-dimensional slice
double minkowski_dot(const std::vector<double>& a, const std::vector<double>& b);

struct FoliationMetric {
    // components in (tau, r, theta^a): index 0 = tau, 1 = r, 2.. = theta
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> m0_inv; // leading inverse
    double sqrt_det;                         // |det m|^{1/2}
};
FoliationMetric minkowski_in_foliation(double sigma, double r,
                                       const std::vector<double>& theta,
                                       const ParameterCurves& pc);

// ambient vector fields of the frame, as functions of the ambient point
// (defined on the hyperboloidal region through sigma_temp)
using AmbientField = std::function<std::vector<double>(const std::vector<double>&)>;
AmbientField frame_field(const ParameterCurves& pc, char which, int j = 0, int k = 1);

// finite-difference commutator [X,Y] at a point, componentwise
std::vector<double> commutator_check(const AmbientField& X, const AmbientField& Y,
                                     const std::vector<double>& point, double step);

} // namespace catlab
