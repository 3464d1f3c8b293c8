#include "catlab/spectrum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace catlab {

SectorOperator::SectorOperator(const CatenoidGeometry& g, int harmonic_index,
                               Parity parity, int N)
    : lh_(harmonic_index), parity_(parity) {
    if (N < 64) throw InvalidDimension("sector operator needs N >= 64");
    const int n = g.n();
    const double rho_max = g.rho_max();
    double lo = (parity == Parity::Full) ? -rho_max : 0.0;
    h_ = (rho_max - lo) / N;
    cells_.resize(N);
    w_.resize(N);
    veff_.resize(N);
    a_edge_.resize(N + 1);
    for (int i = 0; i < N; ++i) {
        double r = lo + (i + 0.5) * h_;
        cells_[i] = r;
        w_[i] = g.weight_at(r);
        double br2 = 1.0 + r * r;
        veff_[i] = g.ii_sq_at(r) - lh_ * (lh_ + n - 2) / br2;
    }
    for (int i = 0; i <= N; ++i) a_edge_[i] = g.flux_coeff_at(lo + i * h_);
    refl_sign_ = (parity == Parity::Even) ? 1.0 : (parity == Parity::Odd ? -1.0 : 0.0);
}

void SectorOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const int N = size();
    out.resize(N);
    const double h2 = h_ * h_;
    for (int i = 0; i < N; ++i) {
        double um, up;
        if (i == 0) {
            if (parity_ == Parity::Full)
                um = -u[0]; // Dirichlet at the outer edge (value 0 on the edge)
            else
                um = refl_sign_ * u[0]; // reflection through rho = 0
        } else {
            um = u[i - 1];
        }
        up = (i == N - 1) ? -u[N - 1] : u[i + 1];
        double flux = a_edge_[i + 1] * (up - u[i]) - a_edge_[i] * (u[i] - um);
        out[i] = flux / (w_[i] * h2) + veff_[i] * u[i];
    }
}

double SectorOperator::weighted_inner(const std::vector<double>& u,
                                      const std::vector<double>& v) const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += w_[i] * u[i] * v[i];
    return s * h_;
}

void SectorOperator::symmetric_tridiagonal(std::vector<double>& diag,
                                           std::vector<double>& off) const {
    const int N = size();
    const double h2 = h_ * h_;
    diag.resize(N);
    off.resize(N - 1);
    for (int i = 0; i < N; ++i) {
        double am = a_edge_[i], ap = a_edge_[i + 1];
        double d = -(am + ap);
        if (i == 0 && parity_ != Parity::Full) {
            // reflection: flux through the rho=0 edge is 0 (even) or doubled (odd)
            d = (parity_ == Parity::Even) ? -ap : -(2.0 * am + ap);
        }
        if (i == 0 && parity_ == Parity::Full) d = -(2.0 * am + ap);
        if (i == N - 1) d = -(am + 2.0 * ap);
        diag[i] = d / (w_[i] * h2) + veff_[i];
    }
    for (int i = 0; i + 1 < N; ++i)
        off[i] = a_edge_[i + 1] / (h2 * std::sqrt(w_[i] * w_[i + 1]));
}

std::vector<double> SectorOperator::desymmetrize(const std::vector<double>& v) const {
    std::vector<double> u(v.size());
    for (size_t i = 0; i < v.size(); ++i) u[i] = v[i] / std::sqrt(w_[i]);
    double nrm = std::sqrt(weighted_inner(u, u));
    size_t imax = 0;
    for (size_t i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
    if (u[imax] < 0.0) nrm = -nrm;
    for (auto& x : u) x /= nrm;
    return u;
}

namespace {

std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    lapack_int info = LAPACKE_dsterf(static_cast<lapack_int>(d.size()), d.data(), e.data());
    if (info != 0) throw EigenFailure("dsterf failed");
    return d;
}

} // namespace

std::vector<double> all_eigenvalues(const SectorOperator& op) {
    std::vector<double> d, e;
    op.symmetric_tridiagonal(d, e);
    return tridiag_eigenvalues(d, e);
}

std::vector<Eigenpair> eigen_solve(const SectorOperator& op, int count) {
    const int N = op.size();
    count = std::min(count, N);
    std::vector<double> d, e;
    op.symmetric_tridiagonal(d, e);
    std::vector<double> w(N), z(static_cast<size_t>(N) * count);
    std::vector<lapack_int> isuppz(2 * std::max(1, count));
    lapack_int m = 0;
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', N, d.data(), e.data(),
                                     0.0, 0.0, N - count + 1, N, 1e-14, &m, w.data(),
                                     z.data(), N, isuppz.data());
    if (info != 0 || m != count) throw EigenFailure("dstevr failed");
    std::vector<Eigenpair> out(count);
    for (int k = 0; k < count; ++k) {
        int src = count - 1 - k; // descending
        out[k].value = w[src];
        std::vector<double> v(N);
        for (int i = 0; i < N; ++i) v[i] = z[static_cast<size_t>(src) * N + i];
        out[k].vector = op.desymmetrize(v);
    }
    return out;
}

Eigenpair smallest_magnitude_pair(const SectorOperator& op) {
    std::vector<double> ev = all_eigenvalues(op);
    int best = 0;
    for (size_t i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i]) < std::abs(ev[best])) best = static_cast<int>(i);
    const int N = op.size();
    std::vector<double> d, e;
    op.symmetric_tridiagonal(d, e);
    std::vector<double> w(N), z(N);
    std::vector<lapack_int> isuppz(2);
    lapack_int m = 0;
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', N, d.data(), e.data(),
                                     0.0, 0.0, best + 1, best + 1, 1e-14, &m, w.data(),
                                     z.data(), N, isuppz.data());
    if (info != 0 || m != 1) throw EigenFailure("dstevr failed");
    return {w[0], op.desymmetrize(z)};
}

double shooting_eigenvalue(const CatenoidGeometry& g, int harmonic_index, Parity parity,
                           double lam_lo, double lam_hi, double tol, double rk_step) {
    const int n = g.n();
    const double rho_max = g.rho_max();
    auto a = [&g](double r) { return g.flux_coeff_at(r); };
    auto w = [&g](double r) { return g.weight_at(r); };
    auto veff = [&](double r) {
        return g.ii_sq_at(r) - harmonic_index * (harmonic_index + n - 2) / (1.0 + r * r);
    };
    // flux variables: u' = p/a, p' = w (lam - V) u  (so that (a u')' = w(V-lam)u
    // becomes H u = lam u); integrate inward with RK4.
    auto defect = [&](double lam) {
        double kap = std::sqrt(std::max(lam, 1e-12));
        double u = 1.0, p = -a(rho_max) * kap;
        double r = rho_max;
        int steps = static_cast<int>(std::ceil(rho_max / rk_step));
        double hstep = -rho_max / steps;
        for (int s = 0; s < steps; ++s) {
            auto f = [&](double rr, double uu, double pp, double& du, double& dp) {
                du = pp / a(rr);
                dp = w(rr) * (lam - veff(rr)) * uu;
            };
            double k1u, k1p, k2u, k2p, k3u, k3p, k4u, k4p;
            f(r, u, p, k1u, k1p);
            f(r + 0.5 * hstep, u + 0.5 * hstep * k1u, p + 0.5 * hstep * k1p, k2u, k2p);
            f(r + 0.5 * hstep, u + 0.5 * hstep * k2u, p + 0.5 * hstep * k2p, k3u, k3p);
            f(r + hstep, u + hstep * k3u, p + hstep * k3p, k4u, k4p);
            u += hstep / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
            p += hstep / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
            r += hstep;
            // renormalize to avoid overflow of the growing mode
            double m = std::max(std::abs(u), std::abs(p));
            if (m > 1e100) {
                u /= m;
                p /= m;
            }
        }
        double scale = std::max(std::abs(u), std::abs(p));
        return (parity == Parity::Even ? p : u) / scale;
    };
    double flo = defect(lam_lo), fhi = defect(lam_hi);
    if (flo * fhi > 0.0) throw EigenFailure("shooting oracle: no sign change in bracket");
    double lo = lam_lo, hi = lam_hi;
    while (hi - lo > tol * std::max(1.0, std::abs(hi))) {
        double mid = 0.5 * (lo + hi);
        double fm = defect(mid);
        if (fm == 0.0) return mid;
        if (fm * flo < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> zero_mode_translation(const CatenoidGeometry& g,
                                          const std::vector<double>& rho) {
    std::vector<double> u(rho.size());
    for (size_t i = 0; i < rho.size(); ++i)
        u[i] = std::pow(g.radius(rho[i]), 1 - g.n());
    return u;
}

std::vector<double> zero_mode_axis(const CatenoidGeometry& g,
                                   const std::vector<double>& rho) {
    // sqrt(<rho>^{2(n-1)} - 1)/<rho>^{n-1} = rho sqrt(q(rho^2)) / <rho>^{n-1}, odd
    std::vector<double> u(rho.size());
    for (size_t i = 0; i < rho.size(); ++i) {
        double r = rho[i];
        u[i] = r * std::sqrt(g.q_poly(r * r)) * std::pow(g.radius(r), 1 - g.n());
    }
    return u;
}

SpectralData compute_spectral_data(const CatenoidGeometry& g, int N) {
    SectorOperator op(g, 0, Parity::Even, N);
    auto pairs = eigen_solve(op, 1);
    SpectralData sd{g.n(), pairs[0].value, pairs[0].vector, op, {}};
    if (sd.mu_sq <= 0.0) throw EigenFailure("expected a positive eigenvalue in lh=0 even");
    sd.bound_states_even0.push_back(sd.phi_mu);
    return sd;
}

std::vector<double> project_continuous(const std::vector<double>& state,
                                       const SpectralData& sd) {
    std::vector<double> out = state;
    for (const auto& b : sd.bound_states_even0) {
        double c = sd.op_even0.weighted_inner(out, b);
        for (size_t i = 0; i < out.size(); ++i) out[i] -= c * b[i];
    }
    return out;
}

double fit_exponential_rate(const SectorOperator& op, const std::vector<double>& phi,
                            const CatenoidGeometry& g, double lo, double hi) {
    // arclength s(rho) by cumulative midpoint sum along the cells
    const auto& cells = op.cells();
    std::vector<double> s(cells.size(), 0.0);
    for (size_t i = 1; i < cells.size(); ++i) {
        double mid = 0.5 * (cells[i] + cells[i - 1]);
        s[i] = s[i - 1] + std::sqrt(g.g_rr_at(mid)) * (cells[i] - cells[i - 1]);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] < lo || cells[i] > hi) continue;
        double a = std::abs(phi[i]);
        if (a < 1e-280) throw FitWindowTooFar("eigenfunction below noise floor in window");
        double x = s[i], y = std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 8) throw FitWindowTooFar("window contains too few samples");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace catlab
