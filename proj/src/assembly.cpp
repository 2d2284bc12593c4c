#include "orlivar/assembly.hpp"

#include <cmath>

namespace orlivar {
namespace {

using kernels::elem_gradient;
using kernels::flux_of;
using kernels::norm_of;
using kernels::value_at;

double upow(double base, double expo) { return base <= 0.0 ? 0.0 : std::pow(base, expo); }

/// Fills per-element values with fn(e); parallel or serial fill, serial
/// reduction in element order, so the result is independent of the policy
/// and the thread count.
template <class Fn>
double reduce_elements(int n_elems, Exec exec, std::vector<double>& scratch, const Fn& fn) {
    scratch.resize(n_elems);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int e = 0; e < n_elems; ++e) scratch[e] = fn(e);
    } else {
        for (int e = 0; e < n_elems; ++e) scratch[e] = fn(e);
    }
    double acc = 0.0;
    for (int e = 0; e < n_elems; ++e) acc += scratch[e];
    return acc;
}

} // namespace

double modular(const Field& u, const YoungPair& pair, Exec exec) {
    const Mesh& m = u.mesh();
    pair.big_phi(1.0); // warm the cache outside the parallel region
    std::vector<double> scratch;
    return reduce_elements(m.n_elems(), exec, scratch, [&](int e) {
        double g[2];
        elem_gradient(m, u.coeffs(), e, g);
        return m.elem_measure[e] * pair.big_phi(norm_of(g, m.dim));
    });
}

double assemble_energy_I(const Field& u, const ProblemParams& prm, Exec exec) {
    const Mesh& m = u.mesh();
    const YoungPair& pair = *prm.pair;
    pair.big_phi(1.0);
    const double lam = prm.lambda, p = prm.p, q = prm.q;
    std::vector<double> scratch;
    return reduce_elements(m.n_elems(), exec, scratch, [&](int e) {
        double g[2];
        elem_gradient(m, u.coeffs(), e, g);
        double acc = pair.big_phi(norm_of(g, m.dim));
        for (const auto& qp : m.quad) {
            const double up = std::max(value_at(m, u.coeffs(), e, qp), 0.0);
            if (up > 0.0)
                acc -= lam * qp.weight * (upow(up, p) / p - upow(up, q) / q);
        }
        return m.elem_measure[e] * acc;
    });
}

std::vector<double> assemble_gradient_I(const Field& u, const ProblemParams& prm, Exec exec) {
    const Mesh& m = u.mesh();
    const YoungPair& pair = *prm.pair;
    const PhiSpec& spec = pair.phi_spec();
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
        for (const auto& qp : m.quad) {
            const double up = std::max(value_at(m, u.coeffs(), e, qp), 0.0);
            if (up > 0.0) {
                const double source = lam * (upow(up, p - 1.0) - upow(up, q - 1.0));
                for (int k = 0; k < npe; ++k) out[k] -= vol * qp.weight * source * qp.bary[k];
            }
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

double residual_sup_norm(const Mesh& mesh, const std::vector<double>& residual) {
    double worst = 0.0;
    for (int i : mesh.interior_ids) worst = std::max(worst, std::abs(residual[i]));
    return worst;
}

double weak_residual_norm(const Field& u, const ProblemParams& prm, Exec exec) {
    return residual_sup_norm(u.mesh(), assemble_gradient_I(u, prm, exec));
}

double lp_norm(const Field& u, double r) {
    const Mesh& m = u.mesh();
    double acc = 0.0;
    for (int e = 0; e < m.n_elems(); ++e) {
        for (const auto& qp : m.quad) {
            const double v = std::abs(value_at(m, u.coeffs(), e, qp));
            acc += m.elem_measure[e] * qp.weight * upow(v, r);
        }
    }
    return std::pow(acc, 1.0 / r);
}

std::vector<WeightedSample> gradient_samples(const Field& u) {
    const Mesh& m = u.mesh();
    std::vector<WeightedSample> samples(m.n_elems());
    for (int e = 0; e < m.n_elems(); ++e) {
        double g[2];
        elem_gradient(m, u.coeffs(), e, g);
        samples[e] = WeightedSample{norm_of(g, m.dim), m.elem_measure[e]};
    }
    return samples;
}

FieldNorms field_norms(const Field& u, const YoungPair& pair, double p, double q) {
    FieldNorms out;
    const auto samples = gradient_samples(u);
    out.luxemburg_grad = luxemburg_norm(pair, samples);
    double mod = 0.0;
    for (const auto& s : samples) mod += s.weight * pair.big_phi(s.value);
    out.modular = mod;
    out.lp = lp_norm(u, p);
    out.lq = lp_norm(u, q);
    out.lphi0 = lp_norm(u, pair.indices().lo);
    out.l2 = lp_norm(u, 2.0);
    return out;
}

} // namespace orlivar
