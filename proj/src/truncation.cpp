#include "orlivar/truncation.hpp"

#include <cmath>

namespace orlivar {
namespace {

using kernels::elem_gradient;
using kernels::flux_of;
using kernels::norm_of;
using kernels::value_at;

double upow(double base, double expo) { return base <= 0.0 ? 0.0 : std::pow(base, expo); }

} // namespace

Truncation::Truncation(Field u1) : u1_(std::move(u1)) {
    const Mesh& m = u1_.mesh();
    nq_ = m.n_quad();
    u1_quad_.resize(static_cast<std::size_t>(m.n_elems()) * nq_);
    for (int e = 0; e < m.n_elems(); ++e)
        for (int qi = 0; qi < nq_; ++qi)
            u1_quad_[static_cast<std::size_t>(e) * nq_ + qi] =
                value_at(m, u1_.coeffs(), e, m.quad[qi]);
}

double g_scalar(double u1x, double t, double p, double q) {
    if (t < 0.0) return 0.0;
    const double cap = std::max(u1x, 0.0);
    const double v = std::min(t, cap);
    return upow(v, p - 1.0) - upow(v, q - 1.0);
}

double G_scalar(double u1x, double t, double p, double q) {
    if (t <= 0.0) return 0.0;
    const double cap = std::max(u1x, 0.0);
    if (t <= cap) return upow(t, p) / p - upow(t, q) / q;
    const double base = upow(cap, p) / p - upow(cap, q) / q;
    return base + (t - cap) * (upow(cap, p - 1.0) - upow(cap, q - 1.0));
}

double assemble_J(const Field& u, const Truncation& tr, const ProblemParams& prm, Exec exec) {
    const Mesh& m = u.mesh();
    const YoungPair& pair = *prm.pair;
    pair.big_phi(1.0);
    const double lam = prm.lambda, p = prm.p, q = prm.q;
    const int n_elems = m.n_elems();
    std::vector<double> scratch(n_elems);
    const auto fill = [&](int e) {
        double g[2];
        elem_gradient(m, u.coeffs(), e, g);
        double acc = pair.big_phi(norm_of(g, m.dim));
        for (int qi = 0; qi < m.n_quad(); ++qi) {
            const double v = value_at(m, u.coeffs(), e, m.quad[qi]);
            acc -= lam * m.quad[qi].weight * G_scalar(tr.u1_at(e, qi), v, p, q);
        }
        scratch[e] = m.elem_measure[e] * acc;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int e = 0; e < n_elems; ++e) fill(e);
    } else {
        for (int e = 0; e < n_elems; ++e) fill(e);
    }
    double acc = 0.0;
    for (int e = 0; e < n_elems; ++e) acc += scratch[e];
    return acc;
}

std::vector<double> assemble_gradient_J(const Field& u, const Truncation& tr,
                                        const ProblemParams& prm, Exec exec) {
    const Mesh& m = u.mesh();
    const PhiSpec& spec = prm.pair->phi_spec();
    const double lam = prm.lambda, p = prm.p, q = prm.q;
    const int npe = m.nodes_per_elem();
    const int n_elems = m.n_elems();

    std::vector<double> local(static_cast<std::size_t>(n_elems) * npe);
    const auto fill = [&](int e) {
        double g[2], fx[2];
        elem_gradient(m, u.coeffs(), e, g);
        flux_of(spec, g, m.dim, fx);
        const double* gb = &m.grad_basis[npe * m.dim * e];
        const double vol = m.elem_measure[e];
        double* out = &local[static_cast<std::size_t>(e) * npe];
        for (int k = 0; k < npe; ++k) {
            double acc = 0.0;
            for (int j = 0; j < m.dim; ++j) acc += fx[j] * gb[k * m.dim + j];
            out[k] = vol * acc;
        }
        for (int qi = 0; qi < m.n_quad(); ++qi) {
            const auto& qp = m.quad[qi];
            const double v = value_at(m, u.coeffs(), e, qp);
            const double source = lam * g_scalar(tr.u1_at(e, qi), v, p, q);
            if (source != 0.0)
                for (int k = 0; k < npe; ++k) out[k] -= vol * qp.weight * source * qp.bary[k];
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int e = 0; e < n_elems; ++e) fill(e);
    } else {
        for (int e = 0; e < n_elems; ++e) fill(e);
    }

    std::vector<double> r(m.n_nodes(), 0.0);
    for (int e = 0; e < n_elems; ++e) {
        const int* nd = &m.elems[npe * e];
        for (int k = 0; k < npe; ++k) r[nd[k]] += local[static_cast<std::size_t>(e) * npe + k];
    }
    for (int i = 0; i < m.n_nodes(); ++i)
        if (m.boundary[i]) r[i] = 0.0;
    return r;
}

double weak_residual_norm(const Field& u, const Truncation& tr, const ProblemParams& prm,
                          Exec exec) {
    return residual_sup_norm(u.mesh(), assemble_gradient_J(u, tr, prm, exec));
}

} // namespace orlivar
