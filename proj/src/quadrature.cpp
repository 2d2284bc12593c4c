#include "orlivar/quadrature.hpp"

#include "orlivar/errors.hpp"

#include <cmath>

namespace orlivar {
namespace {

// 16-point Gauss-Legendre abscissas/weights on [-1, 1], positive half.
constexpr double kX[8] = {
    0.09501250983763744, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030,  0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kW[8] = {
    0.1894506104550685,  0.1826034150449236,  0.1691565193950025,  0.1495959888165767,
    0.1246289712555339,  0.09515851168249278, 0.06225352393864789, 0.02715245941175409};

struct SimpsonState {
    const std::function<double(double)>& f;
    double abs_tol;
    long evals_left;
};

double simpson_panel(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    st.evals_left -= 2;
    if (st.evals_left < 0) throw QuadratureFailure("adaptive_simpson: evaluation budget exhausted");
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = simpson_panel(fa, flm, fm, m - a);
    const double right = simpson_panel(fm, frm, fb, b - m);
    const double refined = left + right;
    const double err = (refined - whole) / 15.0;
    // Tolerances below the representable resolution of the panel value are
    // clamped to the floating-point floor.
    const double floor_tol = 8.0 * std::abs(refined) * 2.2e-16;
    if (depth <= 0 || std::abs(err) <= std::max(tol, floor_tol)) return refined + err;
    const double half_tol = 0.5 * tol;
    return simpson_rec(st, a, m, fa, flm, fm, left, half_tol, depth - 1) +
           simpson_rec(st, m, b, fm, frm, fb, right, half_tol, depth - 1);
}

} // namespace

const double GaussLegendre16::node[16] = {
    0.5 * (1.0 - kX[7]), 0.5 * (1.0 - kX[6]), 0.5 * (1.0 - kX[5]), 0.5 * (1.0 - kX[4]),
    0.5 * (1.0 - kX[3]), 0.5 * (1.0 - kX[2]), 0.5 * (1.0 - kX[1]), 0.5 * (1.0 - kX[0]),
    0.5 * (1.0 + kX[0]), 0.5 * (1.0 + kX[1]), 0.5 * (1.0 + kX[2]), 0.5 * (1.0 + kX[3]),
    0.5 * (1.0 + kX[4]), 0.5 * (1.0 + kX[5]), 0.5 * (1.0 + kX[6]), 0.5 * (1.0 + kX[7])};

const double GaussLegendre16::weight[16] = {
    0.5 * kW[7], 0.5 * kW[6], 0.5 * kW[5], 0.5 * kW[4], 0.5 * kW[3], 0.5 * kW[2],
    0.5 * kW[1], 0.5 * kW[0], 0.5 * kW[0], 0.5 * kW[1], 0.5 * kW[2], 0.5 * kW[3],
    0.5 * kW[4], 0.5 * kW[5], 0.5 * kW[6], 0.5 * kW[7]};

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, long max_evals) {
    if (a == b) return 0.0;
    SimpsonState st{f, abs_tol, max_evals};
    st.evals_left -= 3;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson_panel(fa, fm, fb, b - a);
    return simpson_rec(st, a, b, fa, fm, fb, whole, abs_tol, 60);
}

double gauss16(const std::function<double(double)>& f, double a, double b) {
    const double h = b - a;
    double sum = 0.0;
    for (int i = 0; i < GaussLegendre16::n; ++i)
        sum += GaussLegendre16::weight[i] * f(a + h * GaussLegendre16::node[i]);
    return h * sum;
}

} // namespace orlivar
