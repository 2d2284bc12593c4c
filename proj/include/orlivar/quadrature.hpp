#pragma once

#include <functional>

namespace orlivar {

/// Adaptive Simpson integration of f over [a, b].
///
/// `abs_tol` is the requested absolute tolerance. Panels whose magnitude makes
/// that tolerance unrepresentable in double precision are accepted at the
/// floating-point floor instead of recursing forever. Throws QuadratureFailure
/// when the evaluation budget runs out before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, long max_evals = 1'000'000);

/// Nodes and weights of the 16-point Gauss-Legendre rule on [0, 1].
struct GaussLegendre16 {
    static constexpr int n = 16;
    static const double node[16];
    static const double weight[16];
};

/// 16-point Gauss-Legendre quadrature of f over [a, b].
double gauss16(const std::function<double(double)>& f, double a, double b);

} // namespace orlivar
