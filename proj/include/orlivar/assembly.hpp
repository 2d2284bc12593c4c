#pragma once

#include "orlivar/mesh.hpp"
#include "orlivar/problem.hpp"
#include "orlivar/young.hpp"

#include <cmath>
#include <vector>

namespace orlivar {

/// Kernel execution policy. Parallel runs the element loops under OpenMP;
/// per-element contributions land in element-indexed scratch and are reduced
/// serially in element order either way, so both policies produce bitwise
/// identical results. Serial is kept as the reference implementation.
enum class Exec { Serial, Parallel };

namespace kernels {

/// Element-constant P1 gradient; writes both slots of g (second is 0 in 1D).
inline void elem_gradient(const Mesh& m, const std::vector<double>& coeffs, int e, double* g) {
    const int npe = m.dim + 1;
    const int* nd = &m.elems[npe * e];
    const double* gb = &m.grad_basis[npe * m.dim * e];
    g[0] = g[1] = 0.0;
    for (int j = 0; j < m.dim; ++j) {
        double acc = 0.0;
        for (int k = 0; k < npe; ++k) acc += coeffs[nd[k]] * gb[k * m.dim + j];
        g[j] = acc;
    }
}

inline double norm_of(const double* g, int dim) {
    return dim == 1 ? std::abs(g[0]) : std::sqrt(g[0] * g[0] + g[1] * g[1]);
}

/// a(|g|) g with the zero-gradient continuation flux(0) = 0.
inline void flux_of(const PhiSpec& spec, const double* g, int dim, double* out) {
    const double norm = norm_of(g, dim);
    if (norm == 0.0) {
        for (int j = 0; j < dim; ++j) out[j] = 0.0;
        return;
    }
    const double scale = phi_eval(spec, norm) / norm;
    for (int j = 0; j < dim; ++j) out[j] = scale * g[j];
}

/// Value of the P1 interpolant at a quadrature point of element e.
inline double value_at(const Mesh& m, const std::vector<double>& coeffs, int e,
                       const QuadPoint& qp) {
    const int npe = m.dim + 1;
    const int* nd = &m.elems[npe * e];
    double acc = 0.0;
    for (int k = 0; k < npe; ++k) acc += qp.bary[k] * coeffs[nd[k]];
    return acc;
}

} // namespace kernels

/// I_0(u) = integral of Phi(|grad u|).
double modular(const Field& u, const YoungPair& pair, Exec exec = Exec::Parallel);

/// I(u) = I_0(u) - (lambda/p) int u_+^p + (lambda/q) int u_+^q, with u_+ taken
/// of the P1 interpolant at quadrature points.
double assemble_energy_I(const Field& u, const ProblemParams& prm, Exec exec = Exec::Parallel);

/// Nodal residual r_i = <I'(u), basis_i> for interior nodes, zero on boundary.
std::vector<double> assemble_gradient_I(const Field& u, const ProblemParams& prm,
                                        Exec exec = Exec::Parallel);

/// Sup norm of a nodal residual vector over interior nodes.
double residual_sup_norm(const Mesh& mesh, const std::vector<double>& residual);

/// Sup norm of the full-problem weak residual at u.
double weak_residual_norm(const Field& u, const ProblemParams& prm, Exec exec = Exec::Parallel);

/// ||u||_{L^r} by element quadrature.
double lp_norm(const Field& u, double r);

struct FieldNorms {
    double luxemburg_grad = 0.0; // Luxemburg norm of |grad u| (the W_0^1 L_Phi norm)
    double modular = 0.0;
    double lp = 0.0;
    double lq = 0.0;
    double lphi0 = 0.0;
    double l2 = 0.0;
};

/// Per-element (|grad u|, element measure) samples for Luxemburg evaluation.
std::vector<WeightedSample> gradient_samples(const Field& u);

FieldNorms field_norms(const Field& u, const YoungPair& pair, double p, double q);

} // namespace orlivar
