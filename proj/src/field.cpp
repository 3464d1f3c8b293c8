#include "catlab/field.hpp"

#include <cmath>

namespace catlab {

LeafGrid::LeafGrid(int n_, double rho_max_, int N_)
    : n(n_), rho_max(rho_max_), N(N_), h(2.0 * rho_max_ / N_), rho(N_) {
    for (int i = 0; i < N; ++i) {
        double r = -rho_max + (i + 0.5) * h;
        // symmetric pairing: mirror the upper half exactly
        rho[i] = r;
    }
    for (int i = 0; i < N / 2; ++i) rho[N - 1 - i] = -rho[i];
}

Field Field::radial(LeafGridPtr g, std::vector<double> c) {
    Field f(std::move(g));
    MultiIndex one{};
    f.terms_[one] = std::move(c);
    return f;
}

Field Field::monomial(LeafGridPtr g, const MultiIndex& a, std::vector<double> c) {
    Field f(std::move(g));
    f.terms_[a] = std::move(c);
    return f;
}

int Field::max_degree() const {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, mi_degree(a));
    return d;
}

void Field::check_same(const Field& o) const {
    if (grid_ && o.grid_ && grid_ != o.grid_) throw GridError("field grid mismatch");
}

Field& Field::add_term(const MultiIndex& a, const std::vector<double>& c, double scale) {
    auto it = terms_.find(a);
    if (it == terms_.end()) {
        auto& dst = terms_[a];
        dst.resize(c.size(), 0.0);
        for (size_t i = 0; i < c.size(); ++i) dst[i] = scale * c[i];
    } else {
        for (size_t i = 0; i < c.size(); ++i) it->second[i] += scale * c[i];
    }
    return *this;
}

Field Field::operator+(const Field& o) const {
    check_same(o);
    Field f = *this;
    if (!f.grid_) f.grid_ = o.grid_;
    for (const auto& [a, c] : o.terms_) f.add_term(a, c);
    return f;
}

Field& Field::operator+=(const Field& o) {
    check_same(o);
    if (!grid_) grid_ = o.grid_;
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
}

Field Field::operator-(const Field& o) const {
    check_same(o);
    Field f = *this;
    if (!f.grid_) f.grid_ = o.grid_;
    for (const auto& [a, c] : o.terms_) f.add_term(a, c, -1.0);
    return f;
}

Field Field::operator*(double s) const {
    Field f = *this;
    for (auto& [a, c] : f.terms_)
        for (auto& v : c) v *= s;
    return f;
}

Field Field::mul(const Field& o) const {
    check_same(o);
    Field f(grid_ ? grid_ : o.grid_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) {
            MultiIndex ab{};
            for (int k = 0; k < MAX_AMBIENT; ++k)
                ab[k] = static_cast<std::uint8_t>(a[k] + b[k]);
            std::vector<double> c(ca.size());
            for (size_t i = 0; i < ca.size(); ++i) c[i] = ca[i] * cb[i];
            f.add_term(ab, c);
        }
    f.prune(1e-300);
    return f;
}

Field Field::mul_radial(const std::vector<double>& c) const {
    Field f(grid_);
    for (const auto& [a, ca] : terms_) {
        std::vector<double> v(ca.size());
        for (size_t i = 0; i < ca.size(); ++i) v[i] = ca[i] * c[i];
        f.terms_[a] = std::move(v);
    }
    return f;
}

Field Field::deriv_rho() const {
    Field f(grid_);
    const double h = grid_->h;
    for (const auto& [a, c] : terms_) {
        const int N = static_cast<int>(c.size());
        std::vector<double> d(N);
        for (int i = 1; i + 1 < N; ++i) d[i] = (c[i + 1] - c[i - 1]) / (2 * h);
        if (N >= 3) {
            d[0] = (-3 * c[0] + 4 * c[1] - c[2]) / (2 * h);
            d[N - 1] = (3 * c[N - 1] - 4 * c[N - 2] + c[N - 3]) / (2 * h);
        }
        f.terms_[a] = std::move(d);
    }
    return f;
}

Field Field::laplace_sphere() const {
    // Delta_S (Theta^a) = sum_i a_i(a_i-1) Theta^{a-2e_i} - d(d+n-2) Theta^a
    const int n = grid_->n;
    Field f(grid_);
    for (const auto& [a, c] : terms_) {
        int d = mi_degree(a);
        f.add_term(a, c, -static_cast<double>(d) * (d + n - 2));
        for (int i = 0; i < n; ++i) {
            if (a[i] >= 2) {
                MultiIndex b = a;
                b[i] -= 2;
                f.add_term(b, c, static_cast<double>(a[i]) * (a[i] - 1));
            }
        }
    }
    f.prune(1e-300);
    return f;
}

Field Field::grad_sphere_dot(const Field& f, const Field& g) {
    f.check_same(g);
    const int n = f.grid_->n;
    Field out(f.grid_);
    for (const auto& [a, ca] : f.terms_)
        for (const auto& [b, cb] : g.terms_) {
            std::vector<double> prod(ca.size());
            for (size_t i = 0; i < ca.size(); ++i) prod[i] = ca[i] * cb[i];
            // grad f . grad g part
            for (int i = 0; i < n; ++i) {
                if (a[i] == 0 || b[i] == 0) continue;
                MultiIndex ab{};
                for (int k = 0; k < MAX_AMBIENT; ++k)
                    ab[k] = static_cast<std::uint8_t>(a[k] + b[k]);
                ab[i] -= 2;
                out.add_term(ab, prod, static_cast<double>(a[i]) * b[i]);
            }
            // -(x.grad f)(x.grad g)
            int da = mi_degree(a), db = mi_degree(b);
            if (da != 0 && db != 0) {
                MultiIndex ab{};
                for (int k = 0; k < MAX_AMBIENT; ++k)
                    ab[k] = static_cast<std::uint8_t>(a[k] + b[k]);
                out.add_term(ab, prod, -static_cast<double>(da) * db);
            }
        }
    out.prune(1e-300);
    return out;
}

double Field::pair(const Field& u, const Field& v) {
    u.check_same(v);
    const auto& g = u.grid_ ? u.grid_ : v.grid_;
    double total = 0.0;
    for (const auto& [a, ca] : u.terms_)
        for (const auto& [b, cb] : v.terms_) {
            MultiIndex ab{};
            for (int k = 0; k < MAX_AMBIENT; ++k)
                ab[k] = static_cast<std::uint8_t>(a[k] + b[k]);
            double mom = sphere_monomial_moment(g->n, ab);
            if (mom == 0.0) continue;
            double s = 0.0;
            for (size_t i = 0; i < ca.size(); ++i) s += ca[i] * cb[i];
            total += mom * s * g->h;
        }
    return total;
}

double Field::integral() const {
    double total = 0.0;
    for (const auto& [a, c] : terms_) {
        double mom = sphere_monomial_moment(grid_->n, a);
        if (mom == 0.0) continue;
        double s = 0.0;
        for (double v : c) s += v;
        total += mom * s * grid_->h;
    }
    return total;
}

double Field::eval(int i, const std::vector<double>& th) const {
    double v = 0.0;
    for (const auto& [a, c] : terms_) {
        double m = 1.0;
        for (int k = 0; k < grid_->n; ++k)
            for (int e = 0; e < a[k]; ++e) m *= th[k];
        v += m * c[i];
    }
    return v;
}

double Field::sup_abs() const {
    // bound: sum of radial sups of |coefficients| (|Theta^a| <= 1)
    double s = 0.0;
    for (const auto& [a, c] : terms_) {
        double m = 0.0;
        for (double v : c) m = std::max(m, std::abs(v));
        s += m;
    }
    return s;
}

double Field::sup_abs_interior(double r0) const {
    double s = 0.0;
    for (const auto& [a, c] : terms_) {
        double m = 0.0;
        for (size_t i = 0; i < c.size(); ++i)
            if (std::abs(grid_->rho[i]) <= r0) m = std::max(m, std::abs(c[i]));
        s += m;
    }
    return s;
}

void Field::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        double m = 0.0;
        for (double v : it->second) m = std::max(m, std::abs(v));
        if (m <= tol)
            it = terms_.erase(it);
        else
            ++it;
    }
}

double symplectic_form(const FirstOrderState& u, const FirstOrderState& v) {
    return Field::pair(u.psi, v.psi_dot) - Field::pair(u.psi_dot, v.psi);
}

} // namespace catlab
