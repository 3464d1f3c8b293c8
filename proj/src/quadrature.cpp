#include "catlab/quadrature.hpp"

#include <cmath>

namespace catlab {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
const double kron_x[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};
const double kron_w[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};
const double gauss_w[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

struct GKResult {
    double integral;
    double error;
};

GKResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double ik = kron_w[0] * fc;
    double ig = gauss_w[0] * fc;
    for (int j = 1; j < 8; ++j) {
        double fp = f(c + h * kron_x[j]);
        double fm = f(c - h * kron_x[j]);
        ik += kron_w[j] * (fp + fm);
        if (j % 2 == 0) ig += gauss_w[j / 2] * (fp + fm);
    }
    return {ik * h, std::abs(ik - ig) * h};
}

double gk_rec(const std::function<double(double)>& f, double a, double b,
              double tol_abs, int depth, int max_depth) {
    GKResult r = gk15(f, a, b);
    if (!std::isfinite(r.integral)) throw QuadratureFailure("non-finite quadrature");
    if (r.error <= tol_abs || depth >= max_depth) return r.integral;
    double c = 0.5 * (a + b);
    return gk_rec(f, a, c, 0.5 * tol_abs, depth + 1, max_depth) +
           gk_rec(f, c, b, 0.5 * tol_abs, depth + 1, max_depth);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol_abs,
                   int depth, int max_depth) {
    double c = 0.5 * (a + b);
    double fl = f(0.5 * (a + c));
    double fr = f(0.5 * (c + b));
    double left = simpson(f, a, c, fa, fl, fm);
    double right = simpson(f, c, b, fm, fr, fb);
    double err = (left + right - whole) / 15.0;
    if (!std::isfinite(left + right)) throw QuadratureFailure("non-finite quadrature");
    if (std::abs(err) <= tol_abs || depth >= max_depth) return left + right + err;
    return simpson_rec(f, a, c, fa, fl, fm, left, 0.5 * tol_abs, depth + 1, max_depth) +
           simpson_rec(f, c, b, fm, fr, fb, right, 0.5 * tol_abs, depth + 1, max_depth);
}

} // namespace

double gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, int max_depth) {
    GKResult coarse = gk15(f, a, b);
    double scale = std::max(1.0, std::abs(coarse.integral));
    return gk_rec(f, a, b, rel_tol * scale, 0, max_depth);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson(f, a, b, fa, fm, fb);
    double scale = std::max(1.0, std::abs(whole));
    return simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 0, max_depth);
}

} // namespace catlab
