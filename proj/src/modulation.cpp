#include "catlab/modulation.hpp"

#include <cmath>

namespace catlab {

namespace {
double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// linear-function field s_u = sum_i u_i Theta^i
Field linear_theta(const LeafGridPtr& grid, const std::vector<double>& u) {
    Field f(grid);
    std::vector<double> one(grid->N, 1.0);
    for (int i = 0; i < grid->n; ++i) {
        if (u[i] == 0.0) continue;
        MultiIndex a{};
        a[i] = 1;
        f.add_term(a, one, u[i]);
    }
    return f;
}

// A_{-ell} x = gamma P_ell x + P_perp x
std::vector<double> a_minus_ell(const std::vector<double>& ell, double gamma,
                                const std::vector<double>& x) {
    double e2 = dot(ell, ell);
    std::vector<double> y = x;
    if (e2 > 0.0) {
        double c = (gamma - 1.0) * dot(ell, x) / e2;
        for (size_t i = 0; i < y.size(); ++i) y[i] += c * ell[i];
    }
    return y;
}
} // namespace

LeafOperator::LeafOperator(const CatenoidGeometry& g, LeafGridPtr grid,
                           std::vector<double> ell)
    : geom_(&g), grid_(std::move(grid)), ell_(std::move(ell)) {
    const int n = g.n();
    const int N = grid_->N;
    ell2_ = dot(ell_, ell_);
    if (ell2_ >= 1.0) throw SuperluminalBoost("|ell| must be < 1");
    gamma_ = 1.0 / std::sqrt(1.0 - ell2_);

    w_.resize(N);
    winv_.resize(N);
    dlnw_.resize(N);
    A_.resize(N);
    Ap_.resize(N);
    alpha_.resize(N);
    alphap_.resize(N);
    br_inv_.resize(N);
    br_inv2_.resize(N);
    ii_sq_.resize(N);
    br_pow_.resize(N);
    dbr_pow2_.resize(N);

    // q polynomial and its derivative
    auto qp = [&g](double x) { return g.q_poly(x); };
    auto qprime = [&g, n](double x) {
        // d/dx sum_{k=1}^{n-1} C(n-1,k) x^{k-1}
        double v = 0.0, c = 1.0;
        std::vector<double> bin;
        for (int k = 1; k <= n - 1; ++k) {
            c = (k == 1) ? (n - 1) : c * (n - k) / k;
            bin.push_back(c);
        }
        for (int k = n - 1; k >= 2; --k) v = v * x + (k - 1) * bin[k - 1];
        return v;
    };

    for (int i = 0; i < N; ++i) {
        double r = grid_->rho[i];
        double x = r * r;
        double br = std::sqrt(1.0 + x);
        double q = qp(x), dq = qprime(x);
        double sq = std::sqrt(q);
        // w = <rho>^{2n-3}/sqrt(q); A = <rho> sqrt(q); alpha = rho q / <rho>^{2n-3}
        w_[i] = std::pow(br, 2 * n - 3) / sq;
        winv_[i] = 1.0 / w_[i];
        dlnw_[i] = (2 * n - 3) * r / (br * br) - r * dq / q;
        A_[i] = br * sq;
        Ap_[i] = r * sq / br + br * r * dq / sq;
        alpha_[i] = r * q / std::pow(br, 2 * n - 3);
        alphap_[i] = (q + 2 * x * dq) / std::pow(br, 2 * n - 3) -
                     (2 * n - 3) * x * q / std::pow(br, 2 * n - 1);
        br_inv_[i] = 1.0 / br;
        br_inv2_[i] = 1.0 / (br * br);
        ii_sq_[i] = g.ii_sq_at(r);
        br_pow_[i] = std::pow(br, 1 - n);
        dbr_pow2_[i] = -2.0 * (n - 1) * r * std::pow(br, -2 * n);
    }

    // s = ell . Theta ; q = |ell|^2 - <rho>^{-2(n-1)} s^2 ; P = 1/(1-q)
    s_ = linear_theta(grid_, ell_);
    std::vector<double> brm2(N);
    for (int i = 0; i < N; ++i) brm2[i] = br_pow_[i] * br_pow_[i]; // <rho>^{2-2n}
    Field s2 = s_.mul(s_);
    q_ = Field::radial(grid_, std::vector<double>(N, ell2_)) - s2.mul_radial(brm2);
    one_minus_q_ = Field::radial(grid_, std::vector<double>(N, 1.0)) - q_;
    P_ = reciprocal(one_minus_q_);
    // dP/drho = P^2 dq/drho with dq/drho = -s^2 (2-2n) rho <rho>^{-2n}
    std::vector<double> dbrm2(N);
    for (int i = 0; i < N; ++i) {
        double r = grid_->rho[i];
        double br = std::sqrt(1.0 + r * r);
        dbrm2[i] = (2.0 - 2.0 * n) * r * std::pow(br, -2 * n);
    }
    Field dq = s2.mul_radial(dbrm2) * (-1.0);
    Pp_ = P_.mul(P_).mul(dq);

    // D2 = 1 + gamma^2 (ell.nu)^2 = 1 + gamma^2 <rho>^{2-2n} s^2
    std::vector<double> g2brm2(N);
    for (int i = 0; i < N; ++i) g2brm2[i] = gamma_ * gamma_ * brm2[i];
    d2_ = Field::radial(grid_, std::vector<double>(N, 1.0)) + s2.mul_radial(g2brm2);
    d2_inv_ = reciprocal(d2_);
}

Field LeafOperator::reciprocal(const Field& a) const {
    // write a = c0 + b with c0 the angular-constant part; 1/a by Neumann
    // series, valid while |b/c0| < 1 pointwise (true for |ell| < 0.5 here)
    MultiIndex zero{};
    std::vector<double> c0(grid_->N, 0.0);
    Field b(grid_);
    for (const auto& [idx, c] : a.terms()) {
        if (idx == zero)
            c0 = c;
        else
            b.add_term(idx, c);
    }
    std::vector<double> c0inv(grid_->N);
    for (int i = 0; i < grid_->N; ++i) c0inv[i] = 1.0 / c0[i];
    Field x = b.mul_radial(c0inv) * (-1.0); // -b/c0
    Field result = Field::radial(grid_, std::vector<double>(grid_->N, 1.0));
    Field powx = x;
    for (int k = 1; k <= 64; ++k) {
        result += powx;
        if (powx.sup_abs() < 1e-17) break;
        powx = powx.mul(x);
        if (k == 64) throw ModulationSingular("reciprocal series did not converge");
    }
    return result.mul_radial(c0inv);
}

Field LeafOperator::second_deriv(const Field& u) const {
    Field f(grid_);
    const double h2 = grid_->h * grid_->h;
    for (const auto& [a, c] : u.terms()) {
        const int N = static_cast<int>(c.size());
        std::vector<double> d(N, 0.0);
        for (int i = 1; i + 1 < N; ++i) d[i] = (c[i + 1] - 2 * c[i] + c[i - 1]) / h2;
        if (N >= 4) {
            d[0] = (2 * c[0] - 5 * c[1] + 4 * c[2] - c[3]) / h2;
            d[N - 1] = (2 * c[N - 1] - 5 * c[N - 2] + 4 * c[N - 3] - c[N - 4]) / h2;
        }
        f.add_term(a, d);
    }
    return f;
}

Field LeafOperator::drift(const Field& u) const {
    // v.grad u = alpha s du/drho + <rho>^{-1} G(s, u)
    Field radial_part = u.deriv_rho().mul_radial(alpha_).mul(s_);
    Field ang = Field::grad_sphere_dot(s_, u).mul_radial(br_inv_);
    return radial_part + ang;
}

Field LeafOperator::apply_L(const Field& u) const {
    // Delta part with analytic coefficient derivatives
    Field lap = second_deriv(u).mul_radial(A_) + u.deriv_rho().mul_radial(Ap_);
    lap = lap.mul_radial(winv_);
    lap += u.laplace_sphere().mul_radial(br_inv2_);
    Field out = lap + u.mul_radial(ii_sq_);
    if (ell2_ > 0.0) {
        // div_h( v P (v.grad u) ): radial (1/w) d_rho(w alpha s f) + angular
        Field f = P_.mul(drift(u));
        Field rad = f.deriv_rho().mul_radial(alpha_).mul(s_);
        std::vector<double> coef(grid_->N);
        for (int i = 0; i < grid_->N; ++i) coef[i] = alphap_[i] + alpha_[i] * dlnw_[i];
        rad += f.mul_radial(coef).mul(s_);
        Field ang = (Field::grad_sphere_dot(f, s_) -
                     s_.mul(f) * static_cast<double>(grid_->n - 1))
                        .mul_radial(br_inv_);
        out += rad + ang;
    }
    return out;
}

FirstOrderState LeafOperator::apply(const FirstOrderState& st) const {
    FirstOrderState out;
    out.time = st.time;
    const int N = grid_->N;
    // M11 = (1/gamma) P (v.grad .), zero at ell = 0
    Field m11 = (ell2_ > 0.0) ? P_.mul(drift(st.psi)) * (1.0 / gamma_)
                              : Field::zero(grid_);
    // M12 = -(1/(gamma w)) P
    std::vector<double> gw(N);
    for (int i = 0; i < N; ++i) gw[i] = -1.0 / (gamma_ * w_[i]);
    Field m12 = P_.mul(st.psi_dot).mul_radial(gw);
    out.psi = m11 + m12;

    // M21 = -sqrt|h| L = -(w/gamma) L
    std::vector<double> mw(N);
    for (int i = 0; i < N; ++i) mw[i] = -w_[i] / gamma_;
    Field m21 = apply_L(st.psi).mul_radial(mw);
    // M22 = -d_j(c^j .), c = -(1/gamma) alpha s P e_rho - (1/gamma) P v_ang
    Field m22 = Field::zero(grid_);
    if (ell2_ > 0.0) {
        Field f = st.psi_dot;
        // radial: (1/gamma)[ (alpha' s P + alpha s P') f + alpha s P f' ]
        Field rad = f.deriv_rho().mul_radial(alpha_).mul(P_).mul(s_);
        rad += f.mul_radial(alphap_).mul(P_).mul(s_);
        rad += f.mul_radial(alpha_).mul(Pp_).mul(s_);
        // angular: (1/gamma) <rho>^{-1} (G(P f, s) - (n-1) s P f)
        Field pf = P_.mul(f);
        Field ang = (Field::grad_sphere_dot(pf, s_) -
                     s_.mul(pf) * static_cast<double>(grid_->n - 1))
                        .mul_radial(br_inv_);
        m22 = (rad + ang) * (1.0 / gamma_);
    }
    out.psi_dot = m21 + m22;
    return out;
}

Field LeafOperator::nu_component(int i) const {
    const int n = grid_->n;
    if (i < n) {
        MultiIndex a{};
        a[i] = 1;
        return Field::monomial(grid_, a, br_pow_);
    }
    // axis component: rho sqrt(q)/<rho>^{n-1}, odd in rho
    std::vector<double> c(grid_->N);
    for (int k = 0; k < grid_->N; ++k) {
        double r = grid_->rho[k];
        c[k] = r * std::sqrt(geom_->q_poly(r * r)) * br_pow_[k];
    }
    return Field::radial(grid_, c);
}

Field LeafOperator::sqrt_h() const {
    std::vector<double> c(grid_->N);
    for (int i = 0; i < grid_->N; ++i) c[i] = w_[i] / gamma_;
    return Field::radial(grid_, c);
}

std::vector<FirstOrderState> LeafOperator::generalized_eigenfunctions() const {
    const int n = grid_->n;
    const int N = grid_->N;
    std::vector<FirstOrderState> out(2 * n);

    // (gamma-1)/|ell|^2 = gamma^2/(1+gamma), exact and stable at ell = 0
    const double cg = gamma_ * gamma_ / (1.0 + gamma_);

    // ell.nu = <rho>^{1-n} s ; ell.F = <rho> s
    Field ell_nu = s_.mul_radial(br_pow_);
    std::vector<double> br(N);
    for (int i = 0; i < N; ++i) br[i] = std::sqrt(1.0 + grid_->rho[i] * grid_->rho[i]);
    Field ell_F = s_.mul_radial(br);

    std::vector<double> gw1q(N); // -gamma w (1-q) multiplies phi_i in dot phi_{n+i}
    for (int i = 0; i < N; ++i) gw1q[i] = w_[i];

    for (int i = 0; i < n; ++i) {
        Field nui = nu_component(i);
        std::vector<double> elli(n, 0.0);
        elli[i] = 1.0;
        // phi_i = cg (ell.nu) ell^i + nu^i
        Field phi = nui;
        if (ell2_ > 0.0) phi += ell_nu * (cg * ell_[i]);
        // dot phi_i = sqrt|h|(h^{-1})^{0j} d_j phi = w (v.grad phi)
        Field dphi = (ell2_ > 0.0) ? drift(phi).mul_radial(w_) : Field::zero(grid_);
        out[i] = {phi, dphi, 0.0};

        // phi_{n+i} = -gamma (ell.F) nu^i - gamma cg (ell.F)(ell.nu) ell^i
        Field phin = Field::zero(grid_);
        if (ell2_ > 0.0) {
            phin = ell_F.mul(nui) * (-gamma_);
            phin += ell_F.mul(ell_nu) * (-gamma_ * cg * ell_[i]);
        }
        // dot phi_{n+i} = w (v.grad phi_{n+i}) - gamma w (1-q) phi_i
        Field dphin = (ell2_ > 0.0) ? drift(phin).mul_radial(w_) : Field::zero(grid_);
        dphin = dphin - one_minus_q_.mul(phi).mul_radial(gw1q) * gamma_;
        out[n + i] = {phin, dphin, 0.0};
    }
    return out;
}

Field LeafOperator::b_coefficient() const {
    if (ell2_ == 0.0) return Field::zero(grid_);
    const int n = grid_->n;
    const int N = grid_->N;
    // D2 = 1 + gamma^2 (ell.nu)^2,  E0 = gamma (ell.nu)/D2
    Field ell_nu = s_.mul_radial(br_pow_);
    Field E0 = ell_nu.mul(d2_inv_) * gamma_;
    // B/sqrt|h| = -gamma (v.grad D2)/(2 D2^2)
    //             + gamma^3 (1-q) E0 (v.grad E0)
    //             - 2 gamma^2 E0 II(v,v) / D2
    Field t1 = drift(d2_).mul(d2_inv_).mul(d2_inv_) * (-0.5 * gamma_);
    Field t2 = one_minus_q_.mul(E0).mul(drift(E0)) * (gamma_ * gamma_ * gamma_);
    // II(v,v) = lambda1 g_rr (alpha s)^2 + lambda_bar (|ell|^2 - s^2)
    std::vector<double> l1grr(N), lbar(N);
    for (int i = 0; i < N; ++i) {
        double r = grid_->rho[i];
        auto pc = second_fundamental(*geom_, r);
        l1grr[i] = pc.lambda1 * geom_->g_rr_at(r) * alpha_[i] * alpha_[i];
        lbar[i] = pc.lambda_bar;
    }
    Field iivv = s_.mul(s_).mul_radial(l1grr);
    Field ells2 = Field::radial(grid_, std::vector<double>(N, ell2_)) - s_.mul(s_);
    iivv += ells2.mul_radial(lbar);
    Field t3 = E0.mul(iivv).mul(d2_inv_) * (-2.0 * gamma_ * gamma_);
    Field total = (t1 + t2 + t3).mul(sqrt_h());
    return total;
}

Field LeafOperator::momentum_variable(const Field& psi, const Field& dt_psi,
                                      const std::vector<double>& xi_dot,
                                      const std::vector<double>& ell_dot) const {
    // psi_dot = sqrt|h| (h^{-1})^{00} (dt_psi + K_eta) + sqrt|h| (h^{-1})^{0j} d_j psi
    // with K_eta = eta((ell_dot.grad_ell + (xi_dot-ell).grad_xi) Psi, N)
    const int N = grid_->N;
    Field keta = Field::zero(grid_);
    // (xi_dot - ell) . N = <rho>^{1-n} s_{A_{-ell}(xi_dot-ell)} / D2
    std::vector<double> dxi(grid_->n);
    for (int i = 0; i < grid_->n; ++i) dxi[i] = xi_dot[i] - ell_[i];
    bool any = false;
    for (double v : dxi) any = any || v != 0.0;
    if (any) {
        auto Ad = a_minus_ell(ell_, gamma_, dxi);
        keta += linear_theta(grid_, Ad).mul_radial(br_pow_).mul(d2_inv_);
    }
    bool anyl = false;
    for (double v : ell_dot) anyl = anyl || v != 0.0;
    if (anyl && ell2_ > 0.0) {
        // grad_ell Psi contracted with ell_dot:
        //  -(2 (ell.F) c2' (ell_dot.ell) ell + c2 (ell_dot.F) ell + c2 (ell.F) ell_dot)
        // paired against N = A_{-ell} nu / D2
        double c2 = gamma_ / (1.0 + gamma_);
        double c2p = std::pow(gamma_, 3) / (2.0 * (1.0 + gamma_) * (1.0 + gamma_));
        std::vector<double> br(N);
        for (int i = 0; i < N; ++i) br[i] = std::sqrt(1.0 + grid_->rho[i] * grid_->rho[i]);
        Field ell_F = s_.mul_radial(br);
        Field elld_F = linear_theta(grid_, ell_dot).mul_radial(br);
        Field ell_nu = s_.mul_radial(br_pow_);
        auto Aed = a_minus_ell(ell_, gamma_, ell_dot);
        Field Aed_nu = linear_theta(grid_, Aed).mul_radial(br_pow_);
        Field term = ell_F * (2.0 * c2p * dot(ell_dot, ell_) * gamma_);
        term = term.mul(ell_nu); // with A_{-ell} ell . nu = gamma (ell.nu)
        term += elld_F.mul(ell_nu) * (c2 * gamma_);
        term += ell_F.mul(Aed_nu) * c2;
        keta = keta - term.mul(d2_inv_);
    } else if (anyl) {
        // ell = 0: grad_ell Psi . ell_dot pairs to zero against N
    }
    std::vector<double> sh00(N);
    for (int i = 0; i < N; ++i) sh00[i] = -gamma_ * w_[i]; // sqrt|h| (h^{-1})^{00} / (1-q)
    Field lead = one_minus_q_.mul(dt_psi + keta).mul_radial(sh00);
    Field driftpart = (ell2_ > 0.0) ? drift(psi).mul_radial(w_) : Field::zero(grid_);
    return lead + driftpart;
}

Field LeafOperator::dt_psi_from_momentum(const Field& psi, const Field& psi_dot,
                                         const std::vector<double>& xi_dot,
                                         const std::vector<double>& ell_dot) const {
    // invert the linear-order map
    const int N = grid_->N;
    Field driftpart = (ell2_ > 0.0) ? drift(psi).mul_radial(w_) : Field::zero(grid_);
    Field rhs = psi_dot - driftpart;
    std::vector<double> inv(N);
    for (int i = 0; i < N; ++i) inv[i] = -1.0 / (gamma_ * w_[i]);
    Field lead = P_.mul(rhs).mul_radial(inv); // (1-q)^{-1} restores dt_psi + K
    Field keta = momentum_variable(Field::zero(grid_), Field::zero(grid_), xi_dot, ell_dot);
    // momentum_variable(0,0,...) = sqrt|h|(h^{-1})^{00} K_eta; undo the factor
    Field keta_plain = P_.mul(keta).mul_radial(inv);
    return lead - keta_plain;
}

std::vector<double> cutoff_c3(const LeafGridPtr& grid, double R1) {
    std::vector<double> chi(grid->N);
    for (int i = 0; i < grid->N; ++i) {
        double a = std::abs(grid->rho[i]);
        if (a <= R1) {
            chi[i] = 1.0;
        } else if (a >= 2.0 * R1) {
            chi[i] = 0.0;
        } else {
            double t = (a - R1) / R1;
            double t4 = t * t * t * t;
            chi[i] = 1.0 - (35 * t4 - 84 * t4 * t + 70 * t4 * t * t - 20 * t4 * t * t * t);
        }
    }
    return chi;
}

std::vector<double> phi_mu_on_leaf(const SpectralData& sd, const LeafGridPtr& grid) {
    const auto& half = sd.op_even0.cells();
    const double hh = sd.op_even0.spacing();
    if (std::abs(grid->h - hh) > 1e-12 || grid->N != 2 * static_cast<int>(half.size()))
        throw GridError("leaf grid must be the mirrored spectral grid");
    std::vector<double> out(grid->N);
    const int Nh = static_cast<int>(half.size());
    for (int i = 0; i < Nh; ++i) {
        out[Nh + i] = sd.phi_mu[i];
        out[Nh - 1 - i] = sd.phi_mu[i]; // even mirror
    }
    return out;
}

TestFunctionSet truncate_test_functions(const LeafOperator& op, double R1,
                                        const SpectralData& sd) {
    const auto& grid = op.grid();
    TestFunctionSet tf;
    tf.R1 = R1;
    tf.mu = std::sqrt(sd.mu_sq);
    tf.chi = cutoff_c3(grid, R1);

    auto phis = op.generalized_eigenfunctions();
    tf.Z.resize(phis.size());
    for (size_t k = 0; k < phis.size(); ++k) {
        tf.Z[k].psi = phis[k].psi.mul_radial(tf.chi);
        tf.Z[k].psi_dot = phis[k].psi_dot.mul_radial(tf.chi);
    }

    std::vector<double> pm = phi_mu_on_leaf(sd, grid);
    std::vector<double> chipm(grid->N), wchipm(grid->N);
    double mass_full = 0.0, mass_cut = 0.0;
    for (int i = 0; i < grid->N; ++i) {
        chipm[i] = tf.chi[i] * pm[i];
        wchipm[i] = op.weight()[i] * chipm[i];
        mass_full += op.weight()[i] * pm[i] * pm[i];
        mass_cut += op.weight()[i] * chipm[i] * chipm[i];
    }
    if (mass_cut < 0.999 * mass_full)
        throw TruncationLoss("chi phi_mu keeps less than 99.9% of the norm");

    // Z_pm = c_pm (chi phi_mu, -+ mu sqrt|h| chi phi_mu); at ell=0 sqrt|h| = w.
    // Omega(Z_+, Z_-) = c_+ c_- 2 mu int w (chi phi_mu)^2 drho domega = 1.
    Field base = Field::radial(grid, chipm);
    Field wbase = Field::radial(grid, wchipm);
    double mass = Field::pair(base, wbase);
    double c = 1.0 / std::sqrt(2.0 * tf.mu * mass);
    tf.c_plus = tf.c_minus = c;
    tf.Zplus = {base * c, wbase * (-tf.mu * c), 0.0};
    tf.Zminus = {base * c, wbase * (tf.mu * c), 0.0};
    return tf;
}

std::vector<std::vector<double>> d_matrix(const LeafOperator& op,
                                          const TestFunctionSet& tf) {
    const int n = op.grid()->n;
    std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
    // d_ij = int chi nu^i nu^j gamma w (1-q) drho domega
    std::vector<double> gw(op.grid()->N);
    for (int i = 0; i < op.grid()->N; ++i) gw[i] = op.gamma() * op.weight()[i];
    for (int i = 0; i < n; ++i) {
        Field a = op.nu_component(i).mul_radial(tf.chi);
        for (int j = i; j < n; ++j) {
            Field b = op.nu_component(j).mul_radial(gw);
            double v = Field::pair(a, op.one_minus_q().mul(b));
            D[i][j] = D[j][i] = v;
        }
    }
    return D;
}

namespace {
std::vector<std::vector<double>> invert_small(std::vector<std::vector<double>> A) {
    const int n = static_cast<int>(A.size());
    std::vector<std::vector<double>> I(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) I[i][i] = 1.0;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        if (std::abs(A[p][c]) < 1e-12) throw ModulationSingular("D matrix is singular");
        std::swap(A[p], A[c]);
        std::swap(I[p], I[c]);
        double piv = A[c][c];
        for (int k = 0; k < n; ++k) {
            A[c][k] /= piv;
            I[c][k] /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = A[r][c];
            for (int k = 0; k < n; ++k) {
                A[r][k] -= f * A[c][k];
                I[r][k] -= f * I[c][k];
            }
        }
    }
    return I;
}
} // namespace

ModulationTracker::ModulationTracker(const LeafOperator& op, const TestFunctionSet& tf,
                                     double dt, double beta)
    : op_(&op), tf_(&tf) {
    const int n2 = static_cast<int>(tf.Z.size());
    MZ_.resize(n2);
    for (int k = 0; k < n2; ++k) MZ_[k] = op.apply(tf.Z[k]);
    Dmat_ = d_matrix(op, tf);
    Dinv_ = invert_small(Dmat_);
    series_.dt = dt;
    series_.beta = beta;
    series_.N.assign(n2, {});
    series_.Upomega.assign(n2, {});
    series_.omega.assign(n2, {});
    series_.Omega.assign(n2, {});
    series_.p_dot.assign(n2, {});
}

double omega_damping_step(double omega, double src, double beta, double dt) {
    double decay = std::exp(-beta * dt);
    return omega * decay - src * (1.0 - decay) / beta;
}

void ModulationTracker::push(const FirstOrderState& st,
                             const std::vector<double>* omega_source) {
    const int n2 = static_cast<int>(MZ_.size());
    const int n = n2 / 2;
    const double dt = series_.dt;
    series_.time.push_back(st.time);
    for (int k = 0; k < n2; ++k) {
        double Nk = symplectic_form(st, MZ_[k]);
        series_.N[k].push_back(Nk);
        // Upomega = S~ N, recomputed causally over the stored history
        double up = smoother_.apply_tilde_at(series_.N[k], dt,
                                             static_cast<int>(series_.N[k].size()) - 1);
        series_.Upomega[k].push_back(up);
        double src = omega_source ? (*omega_source)[k] : 0.0;
        double om = series_.omega[k].empty()
                        ? 0.0 // omega(0) = 0
                        : omega_damping_step(series_.omega[k].back(), src, series_.beta, dt);
        series_.omega[k].push_back(om);
        series_.Omega[k].push_back(up + om);
    }
    // pdot = blockdiag(D,D)^{-1} (S N - beta omega)
    std::vector<double> rhs(n2);
    for (int k = 0; k < n2; ++k) {
        double sn = smoother_.apply_at(series_.N[k], dt,
                                       static_cast<int>(series_.N[k].size()) - 1);
        rhs[k] = sn - series_.beta * series_.omega[k].back();
    }
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < n; ++i) {
            double v = 0.0;
            for (int j = 0; j < n; ++j) v += Dinv_[i][j] * rhs[b * n + j];
            series_.p_dot[b * n + i].push_back(v);
        }
}

UnstablePairRhs aplus_aminus_rhs(const LeafOperator& op, const TestFunctionSet& tf,
                                 const FirstOrderState& phi_vec, double a_plus,
                                 double a_minus) {
    // -F_+ = Omega(F1, Z_-) - Omega(phi, M Z_- + mu Z_-)
    //        + a_+ Omega(M Z_+ - mu Z_+, Z_+) + a_- Omega(M Z_- + mu Z_-, Z_-)
    // linear backend: F1 = 0
    const double mu = tf.mu;
    FirstOrderState MZm = op.apply(tf.Zminus);
    FirstOrderState MZp = op.apply(tf.Zplus);
    FirstOrderState Rm{MZm.psi + tf.Zminus.psi * mu, MZm.psi_dot + tf.Zminus.psi_dot * mu, 0.0};
    FirstOrderState Rp{MZp.psi - tf.Zplus.psi * mu, MZp.psi_dot - tf.Zplus.psi_dot * mu, 0.0};
    double Fp = -(-symplectic_form(phi_vec, Rm) + a_plus * symplectic_form(Rp, tf.Zplus) +
                  a_minus * symplectic_form(Rm, tf.Zminus));
    double Fm = -symplectic_form(phi_vec, Rp) + a_plus * symplectic_form(Rp, tf.Zplus) +
                a_minus * symplectic_form(Rm, tf.Zplus);
    return {Fp, Fm};
}

double project_a_plus(const TestFunctionSet& tf, const FirstOrderState& psi) {
    return symplectic_form(psi, tf.Zminus);
}

double project_a_minus(const TestFunctionSet& tf, const FirstOrderState& psi) {
    return -symplectic_form(psi, tf.Zplus);
}

} // namespace catlab
