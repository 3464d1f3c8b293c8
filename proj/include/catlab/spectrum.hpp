#pragma once

#include <optional>
#include <vector>

#include "catlab/geometry.hpp"

namespace catlab {

enum class Parity { Full, Even, Odd };

// Discrete stability operator of one spherical-harmonic sector, in flux form
//   (H u)_i = (1/(w_i h^2)) [ a_{i+1}(u_{i+1}-u_i) - a_i(u_i-u_{i-1}) ] + V_eff u_i
// on a cell-centered grid (cells between edge rho values), with
//   V_eff = |II|^2 - lh(lh+n-2) <rho>^{-2},
// Dirichlet conditions at the outer edges and reflection (even/odd) at rho=0
// for the half-line parities. Exactly symmetric in the w-weighted product.
class SectorOperator {
public:
    SectorOperator(const CatenoidGeometry& g, int harmonic_index, Parity parity, int N);

    int size() const { return static_cast<int>(cells_.size()); }
    double spacing() const { return h_; }
    int harmonic_index() const { return lh_; }
    Parity parity() const { return parity_; }
    const std::vector<double>& cells() const { return cells_; }
    const std::vector<double>& weights() const { return w_; }

    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    double weighted_inner(const std::vector<double>& u, const std::vector<double>& v) const;

    // symmetric tridiagonal representation (similarity by diag(sqrt w))
    void symmetric_tridiagonal(std::vector<double>& diag, std::vector<double>& off) const;

    // map a symmetric-coordinates vector back to a w-normalized grid function
    std::vector<double> desymmetrize(const std::vector<double>& v) const;

private:
    int lh_;
    Parity parity_;
    double h_;
    std::vector<double> cells_, w_, veff_;
    std::vector<double> a_edge_; // size cells+1
    double refl_sign_;           // +1 even, -1 odd, 0 full line
};

struct Eigenpair {
    double value;
    std::vector<double> vector; // w-normalized
};

// all eigenvalues, ascending
std::vector<double> all_eigenvalues(const SectorOperator& op);

// `count` largest eigenpairs, sorted descending by eigenvalue
std::vector<Eigenpair> eigen_solve(const SectorOperator& op, int count);

Eigenpair smallest_magnitude_pair(const SectorOperator& op);

// Independent oracle: bisection on lambda of the shooting defect obtained by
// integrating the flux-form radial ODE (u, p = a u')' inward from rho_max
// with a WKB-decaying start; defect = p(0) (even) or u(0) (odd).
double shooting_eigenvalue(const CatenoidGeometry& g, int harmonic_index, Parity parity,
                           double lam_lo, double lam_hi, double tol = 1e-12,
                           double rk_step = 0.002);

// Explicit zero modes: radial profiles of e_j (harmonic sector 1) and
// e_{n+1} (sector 0, odd) on the given rho samples.
std::vector<double> zero_mode_translation(const CatenoidGeometry& g,
                                          const std::vector<double>& rho);
std::vector<double> zero_mode_axis(const CatenoidGeometry& g,
                                   const std::vector<double>& rho);

// Bound-state data of the full operator: the unstable pair and the discrete
// zero-mode approximations, plus the continuous-spectrum projector P_c.
struct SpectralData {
    int n;
    double mu_sq;
    std::vector<double> phi_mu;        // lh=0 even sector, w-normalized
    SectorOperator op_even0;           // the sector operator phi_mu lives on
    std::vector<std::vector<double>> bound_states_even0; // projector set for lh=0 even
};

SpectralData compute_spectral_data(const CatenoidGeometry& g, int N);

// P_c: subtract w-projections onto the sector's bound states. Idempotent.
std::vector<double> project_continuous(const std::vector<double>& state,
                                       const SpectralData& sd);

// least-squares slope of log|phi| against arclength over rho in [lo, hi]
double fit_exponential_rate(const SectorOperator& op, const std::vector<double>& phi,
                            const CatenoidGeometry& g, double lo = 10.0, double hi = 30.0);

} // namespace catlab
