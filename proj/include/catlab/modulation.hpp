#pragma once

#include <vector>

#include "catlab/field.hpp"
#include "catlab/geometry.hpp"
#include "catlab/smoother.hpp"
#include "catlab/spectrum.hpp"

namespace catlab {

// Frozen-parameter leaf machinery at boost ell: the metric blocks
//   h_00 = -gamma^{-2}, h_{0j} = gamma^{-1} u_j, h_{ij} = hr_{ij} - u_i u_j
// (u_j = ell . d_j F, hr the Riemannian catenoid metric) have the closed
// inverse
//   (h^{-1})^{00} = -gamma^2 (1-q), (h^{-1})^{0j} = gamma v^j,
//   (h^{-1})^{ij} = hr^{ij},  sqrt|h| = gamma^{-1} w,
// with v = hr^{-1} u and q = |ell|^2 - <rho>^{-2(n-1)} s^2, s = ell.Theta.
// The matrix operator M, the linear operator L, the generalized
// eigenfunctions and the momentum variable are all built from these.
class LeafOperator {
public:
    LeafOperator(const CatenoidGeometry& g, LeafGridPtr grid, std::vector<double> ell);

    const LeafGridPtr& grid() const { return grid_; }
    const CatenoidGeometry& geometry() const { return *geom_; }
    const std::vector<double>& ell() const { return ell_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& weight() const { return w_; }

    // M psi_vec, four-block structure
    FirstOrderState apply(const FirstOrderState& st) const;
    // L = (1/sqrt|h|) d_j (sqrt|h| (hbar^{-1})^{jk} d_k) + |II|^2
    Field apply_L(const Field& u) const;

    // phi_1..phi_n (kernel) and phi_{n+1}..phi_{2n} (generalized kernel)
    std::vector<FirstOrderState> generalized_eigenfunctions() const;

    // pointwise coefficient of the B psi subtraction in the momentum variable
    Field b_coefficient() const;

    // linear-order momentum map and its inverse
    Field momentum_variable(const Field& psi, const Field& dt_psi,
                            const std::vector<double>& xi_dot,
                            const std::vector<double>& ell_dot) const;
    Field dt_psi_from_momentum(const Field& psi, const Field& psi_dot,
                               const std::vector<double>& xi_dot,
                               const std::vector<double>& ell_dot) const;

    // nu^i as a Field (i < n: Theta^i <rho>^{1-n}); i == n: axis component
    Field nu_component(int i) const;
    Field sqrt_h() const; // gamma^{-1} w as a radial field

    // directional derivative along v and helper fields, exposed for tests
    Field drift(const Field& u) const; // v . grad u
    const Field& s_field() const { return s_; }
    const Field& one_minus_q() const { return one_minus_q_; }
    const Field& P_field() const { return P_; } // 1/(1-q)

private:
    const CatenoidGeometry* geom_;
    LeafGridPtr grid_;
    std::vector<double> ell_;
    double gamma_, ell2_;
    // radial closed forms on the grid
    std::vector<double> w_, winv_, dlnw_, A_, Ap_, alpha_, alphap_;
    std::vector<double> br_inv_, br_inv2_, ii_sq_, br_pow_;  // br_pow = <rho>^{1-n}
    std::vector<double> dbr_pow2_; // d/drho <rho>^{-2(n-1)}
    Field s_, q_, one_minus_q_, P_, Pp_; // Pp = d/drho P (analytic)
    Field d2_, d2_inv_;                  // D2 = 1 + gamma^2 (ell.nu)^2

    Field second_deriv(const Field& u) const;
    Field reciprocal(const Field& a) const; // 1/a for a = const + small
    friend class ModulationTracker;
};

// Truncated test functions: Z_i = chi phi_i, Z_{n+i} = chi phi_{n+i}, and the
// unstable/stable pair Z_pm = c_pm (chi phi_mu, -+ mu sqrt|h| chi phi_mu).
struct TestFunctionSet {
    double R1;
    double mu;
    double c_plus, c_minus;
    std::vector<double> chi; // cutoff samples on the grid
    std::vector<FirstOrderState> Z; // 2n entries
    FirstOrderState Zplus, Zminus;
};

// chi: 7th-order smoothstep (C^3) equal to 1 on |rho| <= R1, 0 on >= 2 R1
std::vector<double> cutoff_c3(const LeafGridPtr& grid, double R1);

TestFunctionSet truncate_test_functions(const LeafOperator& op, double R1,
                                        const SpectralData& sd);

// phi_mu transferred from the spectral half-grid to the leaf grid (even mirror)
std::vector<double> phi_mu_on_leaf(const SpectralData& sd, const LeafGridPtr& grid);

// d_ij = int chi nu^i nu^j gamma w (1-q) drho domega (positive orientation)
std::vector<std::vector<double>> d_matrix(const LeafOperator& op,
                                          const TestFunctionSet& tf);

// Time series bookkeeping of the modulation quantities. The tracker consumes
// states at a fixed cadence dt, computes the projections
//   N_k = Omega(psi_vec, M Z_k),  Omega_k = Upomega_k + omega_k,
// with Upomega = S~(N + F_omega), omega damped at rate beta (the linear
// backend takes F_omega = 0), and records pdot = D^{-1}(S N - beta omega).
struct ModulationSeries {
    double dt = 0.0;
    double beta = 1.0;
    std::vector<double> time;
    std::vector<std::vector<double>> N;       // [2n][steps]
    std::vector<std::vector<double>> Upomega; // [2n][steps]
    std::vector<std::vector<double>> omega;   // [2n][steps]
    std::vector<std::vector<double>> Omega;   // [2n][steps], = Upomega + omega
    std::vector<std::vector<double>> p_dot;   // [2n][steps]
};

class ModulationTracker {
public:
    ModulationTracker(const LeafOperator& op, const TestFunctionSet& tf,
                      double dt, double beta);

    // optional synthetic source feeding the omega damping equation (stands in
    // for S F_omega, which vanishes in the linear backend)
    void push(const FirstOrderState& st, const std::vector<double>* omega_source = nullptr);
    const ModulationSeries& series() const { return series_; }

private:
    const LeafOperator* op_;
    const TestFunctionSet* tf_;
    std::vector<FirstOrderState> MZ_; // precomputed M Z_k
    std::vector<std::vector<double>> Dmat_, Dinv_;
    Smoother smoother_;
    ModulationSeries series_;
};

// exact exponential-damping update for d/dt omega = -beta omega - src
double omega_damping_step(double omega, double src, double beta, double dt);

// Right-hand sides of the a_pm equations:
//   d/dt(e^{-mu t} a_+) = -S(e^{-mu t} F_+),  d/dt(e^{mu t} a_-) = S(e^{mu t} F_-),
// with F_pm assembled from the linear-order pairings.
struct UnstablePairRhs {
    double F_plus;
    double F_minus;
};
UnstablePairRhs aplus_aminus_rhs(const LeafOperator& op, const TestFunctionSet& tf,
                                 const FirstOrderState& phi_vec, double a_plus,
                                 double a_minus);

// a_pm extracted from a state by the symplectic pairings:
// a_+ = Omega(psi, Z_-), a_- = -Omega(psi, Z_+)
double project_a_plus(const TestFunctionSet& tf, const FirstOrderState& psi);
double project_a_minus(const TestFunctionSet& tf, const FirstOrderState& psi);

} // namespace catlab
