#include "catlab/foliation.hpp"

#include <cmath>

namespace catlab {

namespace {
double norm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return s;
}

// (1+n) boost Lambda_{-ell} acting on (x^0, x'); ell in R^n
std::vector<std::vector<double>> lambda_minus(const std::vector<double>& ell) {
    const int n = static_cast<int>(ell.size());
    double e2 = norm2(ell);
    double g = 1.0 / std::sqrt(1.0 - e2);
    std::vector<std::vector<double>> M(n + 1, std::vector<double>(n + 1, 0.0));
    M[0][0] = g;
    for (int i = 0; i < n; ++i) {
        M[0][i + 1] = g * ell[i];
        M[i + 1][0] = g * ell[i];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double p = (e2 > 0) ? ell[i] * ell[j] / e2 : 0.0;
            M[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + (g - 1.0) * p;
        }
    return M;
}

std::vector<double> matvec(const std::vector<std::vector<double>>& M,
                           const std::vector<double>& x) {
    std::vector<double> y(M.size(), 0.0);
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] += M[i][j] * x[j];
    return y;
}

// solve small dense system by Gauss elimination with partial pivoting
std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int n = static_cast<int>(A.size());
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        std::swap(A[p], A[c]);
        std::swap(b[p], b[c]);
        for (int r = c + 1; r < n; ++r) {
            double f = A[r][c] / A[c][c];
            for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= A[r][k] * x[k];
        x[r] = s / A[r][r];
    }
    return x;
}
} // namespace

double SmoothedMin::rhohat(double s) const {
    double a = std::abs(s);
    if (a >= 1.0) return a;
    double s2 = s * s;
    return 0.375 + 0.75 * s2 - 0.125 * s2 * s2;
}

double SmoothedMin::operator()(double x, double y) const {
    return 0.5 * (x + y - delta1 * rhohat((x - y) / delta1));
}

ParameterCurves::ParameterCurves(int n, std::vector<double> sigma,
                                 std::vector<std::vector<double>> xi,
                                 std::vector<std::vector<double>> ell, double R,
                                 double delta1)
    : n_(n), R_(R), delta1_(delta1), s_(std::move(sigma)), xi_(std::move(xi)),
      ell_(std::move(ell)) {
    const int m = static_cast<int>(s_.size());
    if (m < 2) throw GridError("need at least two samples");
    auto slopes = [&](const std::vector<std::vector<double>>& v) {
        // Fritsch-Carlson monotone cubic slopes, per component
        std::vector<std::vector<double>> d(m, std::vector<double>(n_, 0.0));
        for (int c = 0; c < n_; ++c) {
            std::vector<double> del(m - 1);
            for (int i = 0; i + 1 < m; ++i)
                del[i] = (v[i + 1][c] - v[i][c]) / (s_[i + 1] - s_[i]);
            d[0][c] = del[0];
            d[m - 1][c] = del[m - 2];
            for (int i = 1; i + 1 < m; ++i) {
                if (del[i - 1] * del[i] <= 0.0)
                    d[i][c] = 0.0;
                else {
                    double w1 = 2 * (s_[i + 1] - s_[i]) + (s_[i] - s_[i - 1]);
                    double w2 = (s_[i + 1] - s_[i]) + 2 * (s_[i] - s_[i - 1]);
                    d[i][c] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
                }
            }
        }
        return d;
    };
    dxi_ = slopes(xi_);
    dell_ = slopes(ell_);
    for (int i = 0; i < m; ++i)
        if (norm2(ell_[i]) >= 1.0) throw SuperluminalBoost("|ell| must stay below 1");
}

ParameterCurves ParameterCurves::constant(int n, const std::vector<double>& xi0,
                                          const std::vector<double>& ell0, double R,
                                          double delta1) {
    return ParameterCurves(n, {-1e4, 1e4}, {xi0, xi0}, {ell0, ell0}, R, delta1);
}

ParameterCurves ParameterCurves::comoving(int n, const std::vector<double>& xi0,
                                          const std::vector<double>& ell0, double R,
                                          double delta1) {
    std::vector<double> xiA(n), xiB(n);
    for (int i = 0; i < n; ++i) {
        xiA[i] = xi0[i] - 1e4 * ell0[i];
        xiB[i] = xi0[i] + 1e4 * ell0[i];
    }
    return ParameterCurves(n, {-1e4, 1e4}, {xiA, xiB}, {ell0, ell0}, R, delta1);
}

void ParameterCurves::eval(const std::vector<std::vector<double>>& v,
                           const std::vector<std::vector<double>>& dv, double s,
                           std::vector<double>* out, std::vector<double>* dout) const {
    const int m = static_cast<int>(s_.size());
    int i = 0;
    while (i + 2 < m && s_[i + 1] < s) ++i;
    double hseg = s_[i + 1] - s_[i];
    double t = (s - s_[i]) / hseg;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    double g00 = (6 * t2 - 6 * t) / hseg, g10 = (3 * t2 - 4 * t + 1) / hseg;
    double g01 = (-6 * t2 + 6 * t) / hseg, g11 = (3 * t2 - 2 * t) / hseg;
    if (out) out->resize(n_);
    if (dout) dout->resize(n_);
    for (int c = 0; c < n_; ++c) {
        if (out)
            (*out)[c] = h00 * v[i][c] + h10 * hseg * dv[i][c] + h01 * v[i + 1][c] +
                        h11 * hseg * dv[i + 1][c];
        if (dout)
            (*dout)[c] = g00 * v[i][c] + g10 * hseg * dv[i][c] + g01 * v[i + 1][c] +
                         g11 * hseg * dv[i + 1][c];
    }
}

std::vector<double> ParameterCurves::xi(double s) const {
    std::vector<double> o;
    eval(xi_, dxi_, s, &o, nullptr);
    return o;
}
std::vector<double> ParameterCurves::ell(double s) const {
    std::vector<double> o;
    eval(ell_, dell_, s, &o, nullptr);
    return o;
}
std::vector<double> ParameterCurves::xi_dot(double s) const {
    std::vector<double> o;
    eval(xi_, dxi_, s, nullptr, &o);
    return o;
}
std::vector<double> ParameterCurves::ell_dot(double s) const {
    std::vector<double> o;
    eval(ell_, dell_, s, nullptr, &o);
    return o;
}
double ParameterCurves::gamma(double s) const {
    return 1.0 / std::sqrt(1.0 - norm2(ell(s)));
}
double ParameterCurves::gamma_dot(double s) const {
    auto l = ell(s);
    auto ld = ell_dot(s);
    double g = 1.0 / std::sqrt(1.0 - norm2(l));
    double dotp = 0;
    for (int i = 0; i < n_; ++i) dotp += l[i] * ld[i];
    return g * g * g * dotp;
}
std::vector<double> ParameterCurves::eta(double s) const {
    auto x = xi(s);
    auto l = ell(s);
    double g = gamma(s);
    for (int i = 0; i < n_; ++i) x[i] -= g * R_ * l[i];
    return x;
}
std::vector<double> ParameterCurves::eta_dot_sigma(double s) const {
    auto xd = xi_dot(s);
    auto l = ell(s);
    auto ld = ell_dot(s);
    double g = gamma(s), gd = gamma_dot(s);
    for (int i = 0; i < n_; ++i) xd[i] -= R_ * (gd * l[i] + g * ld[i]);
    return xd;
}
double ParameterCurves::dtau_dsigma(double s) const { return 1.0 - gamma_dot(s) * R_; }

std::vector<double> ParameterCurves::eta_prime(double s) const {
    auto ed = eta_dot_sigma(s);
    double dt = dtau_dsigma(s);
    for (auto& v : ed) v /= dt;
    return ed;
}

double ParameterCurves::sigma_of_tau(double tau) const {
    double lo = tau, hi = tau;
    auto f = [&](double s) { return tau_of_sigma(s) - tau; };
    double step = std::max(1.0, R_);
    while (f(hi) < 0) hi += step;
    while (f(lo) > 0) lo -= step;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1 + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double sigma_temp_at(const std::vector<double>& X, const ParameterCurves& pc) {
    const int n = pc.dim();
    auto f = [&](double s) {
        auto xi = pc.xi(s);
        auto l = pc.ell(s);
        double g = pc.gamma(s);
        double d2 = 1.0;
        for (int i = 0; i < n; ++i) {
            double v = X[1 + i] - xi[i] + g * pc.R() * l[i];
            d2 += v * v;
        }
        return X[0] - s + g * pc.R() - std::sqrt(d2);
    };
    // f is decreasing in s for timelike eta; bracket by geometric growth
    double lo = X[0], hi = X[0];
    double step = std::max(1.0, pc.R());
    int guard = 0;
    while (f(lo) < 0) {
        lo -= step;
        step *= 2;
        if (++guard > 60) throw NoBracket("sigma_temp: no bracket below");
    }
    step = std::max(1.0, pc.R());
    guard = 0;
    while (f(hi) > 0) {
        hi += step;
        step *= 2;
        if (++guard > 60) throw NoBracket("sigma_temp: no bracket above");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1 + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double sigma_at(const std::vector<double>& X, const ParameterCurves& pc) {
    SmoothedMin m(pc.delta1());
    return m(X[0], sigma_temp_at(X, pc));
}

std::vector<double> leaf_point_hyp(double sigma, double r, const std::vector<double>& theta,
                                   const ParameterCurves& pc) {
    const int n = pc.dim();
    double tau = pc.tau_of_sigma(sigma);
    auto et = pc.eta(sigma);
    SphereChart chart(n);
    auto Th = chart.point(theta);
    std::vector<double> x(n + 1);
    x[0] = tau + std::sqrt(1.0 + r * r);
    for (int i = 0; i < n; ++i) x[1 + i] = et[i] + r * Th[i];
    return x;
}

std::vector<double> leaf_point(double sigma, double r, const std::vector<double>& theta,
                               const ParameterCurves& pc) {
    const int n = pc.dim();
    double tau = pc.tau_of_sigma(sigma);
    auto et = pc.eta(sigma);
    SphereChart chart(n);
    auto Th = chart.point(theta);
    std::vector<double> x(n + 1, 0.0);
    for (int i = 0; i < n; ++i) x[1 + i] = et[i] + r * Th[i];
    // x^0 solves m(x^0, sigma_temp(x)) = sigma; bracket between the flat and
    // hyperboloidal branch values
    double x0_flat = sigma;
    double x0_hyp = tau + std::sqrt(1.0 + r * r);
    double lo = std::min(x0_flat, x0_hyp) - 2.0 * pc.delta1();
    double hi = std::max(x0_flat, x0_hyp) + 2.0 * pc.delta1();
    auto g = [&](double x0) {
        x[0] = x0;
        return sigma_at(x, pc) - sigma;
    };
    double glo = g(lo), ghi = g(hi);
    if (glo > 0 || ghi < 0) throw NoBracket("leaf_point: sigma not bracketed");
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1 + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
    }
    x[0] = 0.5 * (lo + hi);
    return x;
}

double minkowski_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = -a[0] * b[0];
    for (size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

FrameVectors frame_at(double sigma, double r, const std::vector<double>& theta,
                      const ParameterCurves& pc) {
    const int n = pc.dim();
    auto l = pc.ell(sigma);
    double g = pc.gamma(sigma);
    SphereChart chart(n);
    auto Th = chart.point(theta);

    // y' = r A_ell Theta - gamma <r> ell
    std::vector<double> yp(n);
    double e2 = norm2(l);
    double lTh = 0;
    for (int i = 0; i < n; ++i) lTh += l[i] * Th[i];
    for (int i = 0; i < n; ++i) {
        double ath = Th[i] + (e2 > 0 ? (g - 1.0) * lTh * l[i] / e2 : 0.0);
        yp[i] = r * ath - g * std::sqrt(1.0 + r * r) * l[i];
    }
    double rt = std::sqrt(norm2(yp));

    auto Lm = lambda_minus(l);
    FrameVectors F;
    F.r_tilde = rt;
    std::vector<double> vT(n + 1, 0.0), vL(n + 1, 0.0), vLb(n + 1, 0.0);
    vT[0] = 1.0;
    vL[0] = 1.0;
    vLb[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        vL[1 + i] = yp[i] / rt;
        vLb[1 + i] = -yp[i] / rt;
    }
    F.T = matvec(Lm, vT);
    F.L = matvec(Lm, vL);
    F.Lbar = matvec(Lm, vLb);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            std::vector<double> w(n + 1, 0.0);
            w[1 + k] = yp[j];
            w[1 + j] = -yp[k];
            F.Omega.push_back(matvec(Lm, w));
        }

    // L in the (tau, r, theta) basis: solve [d_tau | d_r | d_a] c = L
    auto ep = pc.eta_prime(sigma);
    auto J = chart.jacobian(theta);
    std::vector<std::vector<double>> B(n + 1, std::vector<double>(n + 1, 0.0));
    for (int row = 0; row <= n; ++row) {
        // column 0: d_tau = (1, eta')
        B[row][0] = (row == 0) ? 1.0 : ep[row - 1];
        // column 1: d_r = (r/<r>, Theta)
        B[row][1] = (row == 0) ? r / std::sqrt(1.0 + r * r) : Th[row - 1];
        // columns 2..: d_a = (0, r Theta_a)
        for (int a = 0; a + 2 <= n; ++a)
            B[row][2 + a] = (row == 0) ? 0.0 : r * J[a][row - 1];
    }
    F.L_coords = solve_dense(B, F.L);
    return F;
}

FoliationMetric minkowski_in_foliation(double sigma, double r,
                                       const std::vector<double>& theta,
                                       const ParameterCurves& pc) {
    const int n = pc.dim();
    const int d = n + 1; // (tau, r, theta^1..theta^{n-1})
    auto ep = pc.eta_prime(sigma);
    SphereChart chart(n);
    auto Th = chart.point(theta);
    auto J = chart.jacobian(theta);
    double br = std::sqrt(1.0 + r * r);
    double eps2 = norm2(ep);
    double gt2 = 1.0 - eps2; // tilde-gamma^{-2}
    double The = 0.0;
    for (int i = 0; i < n; ++i) The += Th[i] * ep[i];

    FoliationMetric M;
    M.m.assign(d, std::vector<double>(d, 0.0));
    M.m0_inv.assign(d, std::vector<double>(d, 0.0));

    std::vector<double> Ja_e(n - 1, 0.0); // Theta_a . eta'
    std::vector<std::vector<double>> gab(n - 1, std::vector<double>(n - 1, 0.0));
    for (int a = 0; a < n - 1; ++a) {
        for (int i = 0; i < n; ++i) Ja_e[a] += J[a][i] * ep[i];
        for (int b = 0; b < n - 1; ++b)
            for (int i = 0; i < n; ++i) gab[a][b] += J[a][i] * J[b][i];
    }

    M.m[0][0] = -gt2;
    // exact pullback: -r/<r> + Theta.eta' (the displayed -1 + <r>^{-2} + ... is
    // the leading form; the sign of Theta.eta' follows the matrix form)
    M.m[0][1] = M.m[1][0] = -r / br + The;
    for (int a = 0; a < n - 1; ++a) M.m[0][2 + a] = M.m[2 + a][0] = r * Ja_e[a];
    M.m[1][1] = 1.0 / (br * br);
    for (int a = 0; a < n - 1; ++a)
        for (int b = 0; b < n - 1; ++b) M.m[2 + a][2 + b] = r * r * gab[a][b];

    // leading inverse (m0^{-1})
    double om = 1.0 - The;
    M.m0_inv[0][1] = M.m0_inv[1][0] = -1.0 / om;
    M.m0_inv[1][1] = (1.0 + The) / om;
    // gab inverse
    std::vector<std::vector<double>> gin(n - 1, std::vector<double>(n - 1, 0.0));
    {
        // invert the small sphere-chart metric
        std::vector<std::vector<double>> A = gab;
        for (int i = 0; i < n - 1; ++i) gin[i][i] = 1.0;
        for (int c = 0; c < n - 1; ++c) {
            int p = c;
            for (int rr = c + 1; rr < n - 1; ++rr)
                if (std::abs(A[rr][c]) > std::abs(A[p][c])) p = rr;
            std::swap(A[p], A[c]);
            std::swap(gin[p], gin[c]);
            double piv = A[c][c];
            for (int k = 0; k < n - 1; ++k) {
                A[c][k] /= piv;
                gin[c][k] /= piv;
            }
            for (int rr = 0; rr < n - 1; ++rr) {
                if (rr == c) continue;
                double f = A[rr][c];
                for (int k = 0; k < n - 1; ++k) {
                    A[rr][k] -= f * A[c][k];
                    gin[rr][k] -= f * gin[c][k];
                }
            }
        }
    }
    std::vector<double> The_up(n - 1, 0.0); // (g^{-1})^{ab} Theta_b . eta'
    for (int a = 0; a < n - 1; ++a)
        for (int b = 0; b < n - 1; ++b) The_up[a] += gin[a][b] * Ja_e[b];
    for (int a = 0; a < n - 1; ++a) {
        M.m0_inv[1][2 + a] = M.m0_inv[2 + a][1] = The_up[a] / (r * om);
        for (int b = 0; b < n - 1; ++b) M.m0_inv[2 + a][2 + b] = gin[a][b] / (r * r);
    }

    // |m|^{1/2} from the exact components (the closed displayed form is
    // leading order in <r>^{-2}; see the tests for the comparison)
    double det = 1.0;
    {
        std::vector<std::vector<double>> A = M.m;
        for (int c = 0; c < d; ++c) {
            int p = c;
            for (int rr = c + 1; rr < d; ++rr)
                if (std::abs(A[rr][c]) > std::abs(A[p][c])) p = rr;
            if (p != c) {
                std::swap(A[p], A[c]);
                det = -det;
            }
            det *= A[c][c];
            for (int rr = c + 1; rr < d; ++rr) {
                double f = A[rr][c] / A[c][c];
                for (int k = c; k < d; ++k) A[rr][k] -= f * A[c][k];
            }
        }
    }
    M.sqrt_det = std::sqrt(std::abs(det));
    return M;
}

AmbientField frame_field(const ParameterCurves& pc, char which, int j, int k) {
    return [&pc, which, j, k](const std::vector<double>& X) {
        const int n = pc.dim();
        double st = sigma_temp_at(X, pc);
        auto l = pc.ell(st);
        double g = pc.gamma(st);
        auto xi = pc.xi(st);
        // y = Lambda_ell (x - (0, xi - sigma ell))
        std::vector<double> sh(n + 1);
        sh[0] = X[0];
        for (int i = 0; i < n; ++i) sh[1 + i] = X[1 + i] - xi[i] + st * l[i];
        std::vector<double> ml(n);
        for (int i = 0; i < n; ++i) ml[i] = -l[i];
        auto Lp = lambda_minus(ml); // Lambda_{+ell}
        auto y = matvec(Lp, sh);
        std::vector<double> yp(y.begin() + 1, y.end());
        double rt = std::sqrt(norm2(yp));
        std::vector<double> v(n + 1, 0.0);
        if (which == 'T') {
            v[0] = 1.0;
        } else if (which == 'L' || which == 'B') {
            v[0] = 1.0;
            double sgn = (which == 'L') ? 1.0 : -1.0;
            for (int i = 0; i < n; ++i) v[1 + i] = sgn * yp[i] / rt;
        } else { // rotation Omega_{jk}
            v[1 + k] = yp[j];
            v[1 + j] = -yp[k];
        }
        auto Lm = lambda_minus(l);
        return matvec(Lm, v);
    };
}

std::vector<double> commutator_check(const AmbientField& X, const AmbientField& Y,
                                     const std::vector<double>& point, double step) {
    const int d = static_cast<int>(point.size());
    auto jac = [&](const AmbientField& F) {
        std::vector<std::vector<double>> J(d, std::vector<double>(d, 0.0));
        for (int nu = 0; nu < d; ++nu) {
            auto pp = point, pm = point;
            pp[nu] += step;
            pm[nu] -= step;
            auto fp = F(pp), fm = F(pm);
            for (int mu = 0; mu < d; ++mu) J[mu][nu] = (fp[mu] - fm[mu]) / (2 * step);
        }
        return J;
    };
    auto JX = jac(X), JY = jac(Y);
    auto x0 = X(point), y0 = Y(point);
    std::vector<double> c(d, 0.0);
    for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu)
            c[mu] += JY[mu][nu] * x0[nu] - JX[mu][nu] * y0[nu];
    return c;
}

} // namespace catlab
