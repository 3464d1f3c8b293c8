#include "catlab/smoother.hpp"

#include <cmath>
#include <map>

#include "catlab/quadrature.hpp"

namespace catlab {

namespace {
double bump_raw(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (s * (1.0 - s)));
}

struct KernelCache {
    std::map<long long, std::vector<double>> k_rows, ktil_rows;
};
KernelCache& cache() {
    static KernelCache c;
    return c;
}
} // namespace

Smoother::Smoother() {
    norm_ = 1.0 / gauss_kronrod(bump_raw, 0.0, 1.0, 1e-14);
}

double Smoother::kernel(double s) const { return norm_ * bump_raw(s); }

double Smoother::kernel_tilde(double s) const {
    if (s < 0.0 || s >= 1.0) return 0.0;
    if (s == 0.0) return -1.0;
    return -gauss_kronrod([this](double x) { return kernel(x); }, s, 1.0, 1e-13);
}

double Smoother::convolve(const std::vector<double>& h, double dt, int i, bool tilde) const {
    // S h(t) = int_0^1 h(t - r) K(r) dr. Per cell [j dt, (j+1) dt] the history
    // is reconstructed by the cubic through four neighboring samples and the
    // kernel moments are integrated exactly, which collapses to one weight
    // row; exact for cubic h, error O(dt^4) otherwise. h is extended
    // constantly to t < 0.
    long long m = std::llround(1.0 / dt);
    if (std::abs(m * dt - 1.0) > 1e-10) throw GridError("dt must divide the unit window");
    if (m < 4) throw GridError("window too coarse");
    if (i < 0 || i >= static_cast<int>(h.size())) throw HistoryError("index outside series");

    auto& rows = tilde ? cache().ktil_rows : cache().k_rows;
    auto it = rows.find(m);
    if (it == rows.end()) {
        std::vector<double> row(m + 1, 0.0);
        for (long long j = 0; j < m; ++j) {
            long long b = std::min(std::max(j - 1, 0LL), m - 3);
            double nodes[4];
            for (int k = 0; k < 4; ++k) nodes[k] = static_cast<double>(b + k) / m;
            for (int k = 0; k < 4; ++k) {
                auto integrand = [&](double r) {
                    double L = 1.0;
                    for (int l = 0; l < 4; ++l)
                        if (l != k) L *= (r - nodes[l]) / (nodes[k] - nodes[l]);
                    return (tilde ? kernel_tilde(r) : kernel(r)) * L;
                };
                row[b + k] += gauss_kronrod(integrand, static_cast<double>(j) / m,
                                            static_cast<double>(j + 1) / m, 1e-14);
            }
        }
        if (!tilde) {
            // make constants exactly reproduced
            double s = 0.0;
            for (double v : row) s += v;
            for (double& v : row) v /= s;
        }
        it = rows.emplace(m, std::move(row)).first;
    }
    const auto& K = it->second;
    auto hv = [&](long long j) { return h[j < 0 ? 0 : j]; };
    double sum = 0.0;
    for (long long j = 0; j <= m; ++j) sum += K[j] * hv(i - j);
    return sum;
}

std::vector<double> Smoother::apply(const std::vector<double>& h, double dt) const {
    std::vector<double> out(h.size());
    for (int i = 0; i < static_cast<int>(h.size()); ++i) out[i] = convolve(h, dt, i, false);
    return out;
}

std::vector<double> Smoother::apply_tilde(const std::vector<double>& h, double dt) const {
    std::vector<double> out(h.size());
    for (int i = 0; i < static_cast<int>(h.size()); ++i) out[i] = convolve(h, dt, i, true);
    return out;
}

double Smoother::apply_at(const std::vector<double>& h, double dt, int i) const {
    return convolve(h, dt, i, false);
}

double Smoother::apply_tilde_at(const std::vector<double>& h, double dt, int i) const {
    return convolve(h, dt, i, true);
}

} // namespace catlab
