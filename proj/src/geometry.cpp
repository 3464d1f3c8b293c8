#include "catlab/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "catlab/quadrature.hpp"
#include "catlab/sphere.hpp"

namespace catlab {

namespace {
std::vector<double> binomials(int m) {
    // C(m,1) .. C(m,m)
    std::vector<double> c(m);
    double v = 1.0;
    for (int k = 1; k <= m; ++k) {
        v = v * (m - k + 1) / k;
        c[k - 1] = v;
    }
    return c;
}
} // namespace

CatenoidGeometry::CatenoidGeometry(int n, double rho_max, int N)
    : n_(n), rho_max_(rho_max) {
    if (n < 2) throw InvalidDimension("catenoid requires n >= 2");
    if (N < 16) throw InvalidDimension("grid count must be >= 16");
    if (rho_max <= 1.0) throw InvalidDimension("rho_max must exceed 1");
    binom_ = binomials(n - 1);

    S_ = (n == 2) ? std::numeric_limits<double>::infinity() : catlab::endpoint_S(n);

    grid_.resize(N + 1);
    const double h = 2.0 * rho_max / N;
    // exactly symmetric grid so z can mirror bitwise
    for (int i = 0; i <= N; ++i) {
        if (2 * i < N)
            grid_[i] = -rho_max + h * i;
        else if (2 * i == N)
            grid_[i] = 0.0;
        else
            grid_[i] = -(-rho_max + h * (N - i));
    }

    // z on the nonnegative half by cumulative Gauss-Kronrod, mirrored exactly
    const int half = N / 2; // N even gives rho=0 on the grid
    std::vector<double> zpos(grid_.size(), 0.0);
    z_.assign(grid_.size(), 0.0);
    auto integrand = [this](double r) { return dz_drho(r); };
    // index of first nonnegative node
    int i0 = 0;
    while (grid_[i0] < 0.0) ++i0;
    double acc = (grid_[i0] > 0.0) ? gauss_kronrod(integrand, 0.0, grid_[i0]) : 0.0;
    z_[i0] = acc;
    for (int i = i0 + 1; i < static_cast<int>(grid_.size()); ++i) {
        acc += gauss_kronrod(integrand, grid_[i - 1], grid_[i]);
        z_[i] = acc;
    }
    for (int i = i0 - 1; i >= 0; --i) {
        // mirror: z(-rho) = -z(rho) exactly when the grid is symmetric
        int j = static_cast<int>(grid_.size()) - 1 - i;
        if (std::abs(grid_[i] + grid_[j]) < 1e-14)
            z_[i] = -z_[j];
        else
            z_[i] = z_[i + 1] - gauss_kronrod(integrand, grid_[i], grid_[i + 1]);
    }
    (void)half;

    g_rr_.resize(grid_.size());
    w_.resize(grid_.size());
    ii_sq_.resize(grid_.size());
    for (size_t i = 0; i < grid_.size(); ++i) {
        g_rr_[i] = g_rr_at(grid_[i]);
        w_[i] = weight_at(grid_[i]);
        ii_sq_[i] = ii_sq_at(grid_[i]);
        if (!std::isfinite(z_[i])) throw QuadratureFailure("non-finite z sample");
    }
}

double CatenoidGeometry::radius(double rho) const { return std::sqrt(1.0 + rho * rho); }

double CatenoidGeometry::q_poly(double x) const {
    // ((1+x)^{n-1} - 1)/x = sum_{k=1}^{n-1} C(n-1,k) x^{k-1}, exact for integer n
    double v = 0.0;
    for (int k = n_ - 1; k >= 1; --k) v = v * x + binom_[k - 1];
    return v;
}

double CatenoidGeometry::g_rr_at(double rho) const {
    double br = radius(rho);
    return std::pow(br, 2 * (n_ - 2)) / q_poly(rho * rho);
}

double CatenoidGeometry::weight_at(double rho) const {
    return std::sqrt(g_rr_at(rho)) * std::pow(radius(rho), n_ - 1);
}

double CatenoidGeometry::flux_coeff_at(double rho) const {
    return std::pow(radius(rho), n_ - 1) / std::sqrt(g_rr_at(rho));
}

double CatenoidGeometry::ii_sq_at(double rho) const {
    return n_ * (n_ - 1) * std::pow(radius(rho), -2 * n_);
}

double CatenoidGeometry::dz_drho(double rho) const {
    // dZ/drho = 1/(<rho> sqrt(q(rho^2))), smooth and even
    return 1.0 / (radius(rho) * std::sqrt(q_poly(rho * rho)));
}

double CatenoidGeometry::height_at(double rho) const {
    if (rho == 0.0) return 0.0;
    double v = gauss_kronrod([this](double r) { return dz_drho(r); }, 0.0, std::abs(rho));
    return rho > 0 ? v : -v;
}

std::string CatenoidGeometry::to_json() const {
    std::ostringstream os;
    os.precision(17);
    auto arr = [&os](const char* name, const std::vector<double>& v) {
        os << "\"" << name << "\":[";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "]";
    };
    os << "{\"n\":" << n_ << ",\"rho_max\":" << rho_max_
       << ",\"N\":" << grid_.size() - 1 << ",\"S\":";
    if (std::isinf(S_))
        os << "\"inf\"";
    else
        os << S_;
    os << ",";
    arr("rho", grid_);
    os << ",";
    arr("z", z_);
    os << ",";
    arr("g_rr", g_rr_);
    os << ",";
    arr("II_sq", ii_sq_);
    os << "}";
    return os.str();
}

void CatenoidGeometry::write_csv(const std::string& path) const {
    std::ofstream f(path);
    f.precision(17);
    f << "rho,z,g_rr,II_sq\n";
    for (size_t i = 0; i < grid_.size(); ++i)
        f << grid_[i] << "," << z_[i] << "," << g_rr_[i] << "," << ii_sq_[i] << "\n";
}

double endpoint_S(int n, double rel_tol) {
    if (n == 2) throw DivergentIntegral("S diverges for n = 2 (I = R)");
    if (n < 2) throw InvalidDimension("n >= 2 required");
    // S = int_0^1 u^{n-3} / sqrt(1 - u^{2(n-1)}) du     (f = 1/u)
    //   = int_0^1 2 (1-v^2)^{n-3} / sqrt(P(1-v^2)) dv   (u = 1-v^2)
    // with P(u) = sum_{k=0}^{2n-3} u^k, since 1-u^{2(n-1)} = (1-u) P(u).
    const int m = 2 * (n - 1);
    auto f = [n, m](double v) {
        double u = 1.0 - v * v;
        double P = 0.0;
        for (int k = m - 1; k >= 0; --k) P = P * u + 1.0;
        return 2.0 * std::pow(u, n - 3) / std::sqrt(P);
    };
    return gauss_kronrod(f, 0.0, 1.0, rel_tol);
}

PrincipalCurvatures second_fundamental(const CatenoidGeometry& g, double rho) {
    // lambda_bar = 1/(f sqrt(1+f'^2)) with f = <rho>, 1+f'^2 = <rho>^{2(n-1)}
    const int n = g.n();
    double br = g.radius(rho);
    double lb = 1.0 / (br * std::pow(br, n - 1));
    double l1 = -(n - 1) * lb;
    return {l1, lb, l1 * l1 + (n - 1) * lb * lb};
}

BoostData boost(const std::vector<double>& ell) {
    const int n = static_cast<int>(ell.size());
    double e2 = 0.0;
    for (double v : ell) e2 += v * v;
    if (e2 >= 1.0) throw SuperluminalBoost("|ell| must be < 1");
    BoostData b;
    b.n = n;
    b.ell = ell;
    b.gamma = 1.0 / std::sqrt(1.0 - e2);

    const int d = n + 2; // ambient R^{1+(n+1)}
    b.Lambda.assign(d, std::vector<double>(d, 0.0));
    b.A.assign(n, std::vector<double>(n, 0.0));

    // spatial part on R^{n+1}: gamma P_ell + P_ell_perp, trivial on X^{n+1}
    // (ell embedded as (ell,0));  P_ell = ell ell^T / |ell|^2.
    b.Lambda[0][0] = b.gamma;
    for (int i = 0; i < n; ++i) {
        b.Lambda[0][i + 1] = -b.gamma * ell[i];
        b.Lambda[i + 1][0] = -b.gamma * ell[i];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double p = (e2 > 0.0) ? ell[i] * ell[j] / e2 : 0.0;
            double a = (i == j ? 1.0 : 0.0) + (b.gamma - 1.0) * p;
            b.A[i][j] = a;
            b.Lambda[i + 1][j + 1] = a;
        }
    b.Lambda[d - 1][d - 1] = 1.0;
    return b;
}

std::vector<double> apply_matrix(const std::vector<std::vector<double>>& M,
                                 const std::vector<double>& x) {
    std::vector<double> y(M.size(), 0.0);
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] += M[i][j] * x[j];
    return y;
}

double GraphProfile::Qp(double r) const {
    return 1.0 / std::sqrt(std::pow(r, 2 * (n - 1)) - 1.0);
}

double GraphProfile::Qpp(double r) const {
    double m = n - 1;
    return -m * std::pow(r, 2 * m - 1) * std::pow(std::pow(r, 2 * m) - 1.0, -1.5);
}

double GraphProfile::Q(double r) const {
    // Q(r) = z evaluated at rho = sqrt(r^2-1); smooth route through dz/drho
    if (r <= 1.0) return 0.0;
    double rho = std::sqrt(r * r - 1.0);
    // reuse the smooth even integrand without holding a geometry reference
    const int nn = n;
    auto q = [nn](double x) {
        double v = 0.0, c = 1.0;
        // sum_{k=1}^{n-1} C(n-1,k) x^{k-1}
        std::vector<double> bin;
        for (int k = 1; k <= nn - 1; ++k) {
            c = (k == 1) ? (nn - 1) : c * (nn - k) / k;
            bin.push_back(c);
        }
        for (int k = nn - 1; k >= 1; --k) v = v * x + bin[k - 1];
        return v;
    };
    auto f = [&q](double t) { return 1.0 / (std::sqrt(1.0 + t * t) * std::sqrt(q(t * t))); };
    return gauss_kronrod(f, 0.0, rho);
}

GraphProfile graph_profile(const CatenoidGeometry& g) {
    if (g.n() < 3) throw InvalidDimension("graph profile needs n >= 3");
    return {g.n(), g.endpoint_S()};
}

std::vector<double> boosted_catenoid_point(const CatenoidGeometry& g,
                                           const std::vector<double>& a0,
                                           const std::vector<double>& ell0,
                                           double t, double rho,
                                           const std::vector<double>& omega) {
    const int n = g.n();
    std::vector<double> mell(n);
    for (int i = 0; i < n; ++i) mell[i] = -ell0[i];
    BoostData b = boost(mell); // Lambda_{-ell0}

    SphereChart chart(n);
    std::vector<double> Th = chart.point(omega);
    std::vector<double> X(n + 2, 0.0);
    X[0] = t;
    double br = g.radius(rho);
    for (int i = 0; i < n; ++i) X[1 + i] = br * Th[i];
    X[n + 1] = g.height_at(rho);

    std::vector<double> Y = apply_matrix(b.Lambda, X);
    for (int i = 0; i < n; ++i) Y[1 + i] += a0[i];
    return Y;
}

} // namespace catlab
