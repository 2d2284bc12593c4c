#pragma once

#include "orlivar/assembly.hpp"
#include "orlivar/mesh.hpp"
#include "orlivar/problem.hpp"

#include <vector>

namespace orlivar {

/// Nonlinearity frozen above the global minimizer u1:
///   g(x,t) = 0                                   for t < 0,
///          = t^{p-1} - t^{q-1}                   for 0 <= t <= u1(x),
///          = u1(x)^{p-1} - u1(x)^{q-1}           for t > u1(x),
/// with G(x,t) its t-antiderivative (closed form on each piece).
class Truncation {
public:
    explicit Truncation(Field u1);

    const Field& u1() const { return u1_; }

    /// u1 interpolated at quadrature point qi of element e (cached).
    double u1_at(int e, int qi) const { return u1_quad_[static_cast<std::size_t>(e) * nq_ + qi]; }

private:
    Field u1_;
    std::vector<double> u1_quad_;
    int nq_ = 0;
};

/// g(x,t) with cutoff value u1x = u1(x).
double g_scalar(double u1x, double t, double p, double q);

/// G(x,t) = integral of g(x,s) ds from 0 to t.
double G_scalar(double u1x, double t, double p, double q);

/// J(u) = I_0(u) - lambda int G(x,u).
double assemble_J(const Field& u, const Truncation& tr, const ProblemParams& prm,
                  Exec exec = Exec::Parallel);

/// Nodal residual of J' (zero on boundary nodes).
std::vector<double> assemble_gradient_J(const Field& u, const Truncation& tr,
                                        const ProblemParams& prm, Exec exec = Exec::Parallel);

/// Sup norm of the truncated weak residual at u.
double weak_residual_norm(const Field& u, const Truncation& tr, const ProblemParams& prm,
                          Exec exec = Exec::Parallel);

} // namespace orlivar
