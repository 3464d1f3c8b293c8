#pragma once

#include <vector>

#include "catlab/errors.hpp"

namespace catlab {

// Causal time smoothing: S h(t) = int h(s) k(t-s) ds with k a C-infinity
// bump on [0,1] of unit mass, and the companion operator S~ built from
// ktilde(r) = -int_r^inf k, so that (S - I) h = d/dt (S~ h). Series are
// extended constantly to t < 0 (the trivial extension).
class Smoother {
public:
    Smoother();

    double kernel(double s) const;        // k, supported on [0,1]
    double kernel_tilde(double s) const;  // ktilde, supported on [0,1]
    double normalization() const { return norm_; }

    // h given on the uniform grid t_i = i*dt, i = 0..len-1; dt must divide 1.
    // Output has the same length; only samples with t_i >= 0 are meaningful
    // (all of them, given the constant extension below t=0).
    std::vector<double> apply(const std::vector<double>& h, double dt) const;
    std::vector<double> apply_tilde(const std::vector<double>& h, double dt) const;

    // single-time evaluation against a callable history (t - 1 <= s <= t)
    double apply_at(const std::vector<double>& h, double dt, int i) const;
    double apply_tilde_at(const std::vector<double>& h, double dt, int i) const;

private:
    double norm_;
    double convolve(const std::vector<double>& h, double dt, int i, bool tilde) const;
};

} // namespace catlab
