#include "orlivar/operators.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace orlivar {
namespace {

using kernels::elem_gradient;
using kernels::norm_of;
using kernels::value_at;

double upow(double base, double expo) { return base <= 0.0 ? 0.0 : std::pow(base, expo); }

} // namespace

DirichletLaplacian::DirichletLaplacian(const Mesh& mesh) : mesh_(&mesh) {
    const int n = mesh.n_interior();
    const int npe = mesh.nodes_per_elem();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(mesh.n_elems()) * npe * npe);
    for (int e = 0; e < mesh.n_elems(); ++e) {
        const int* nd = &mesh.elems[npe * e];
        const double* gb = &mesh.grad_basis[npe * mesh.dim * e];
        const double vol = mesh.elem_measure[e];
        for (int a = 0; a < npe; ++a) {
            const int ia = mesh.interior_pos[nd[a]];
            if (ia < 0) continue;
            for (int b = 0; b < npe; ++b) {
                const int ib = mesh.interior_pos[nd[b]];
                if (ib < 0) continue;
                double dot = 0.0;
                for (int j = 0; j < mesh.dim; ++j)
                    dot += gb[a * mesh.dim + j] * gb[b * mesh.dim + j];
                trips.emplace_back(ia, ib, vol * dot);
            }
        }
    }
    K_.resize(n, n);
    K_.setFromTriplets(trips.begin(), trips.end());
    ldlt_.compute(K_);
}

std::vector<double> DirichletLaplacian::solve(const std::vector<double>& residual) const {
    const Mesh& m = *mesh_;
    Eigen::VectorXd rhs(m.n_interior());
    for (int k = 0; k < m.n_interior(); ++k) rhs[k] = residual[m.interior_ids[k]];
    const Eigen::VectorXd x = ldlt_.solve(rhs);
    std::vector<double> d(m.n_nodes(), 0.0);
    for (int k = 0; k < m.n_interior(); ++k) d[m.interior_ids[k]] = x[k];
    return d;
}

double DirichletLaplacian::dot_interior(const std::vector<double>& a,
                                        const std::vector<double>& b) const {
    double acc = 0.0;
    for (int i : mesh_->interior_ids) acc += a[i] * b[i];
    return acc;
}

Eigen::SparseMatrix<double> assemble_hessian(const Field& u, const ProblemParams& prm,
                                             const Truncation* tr, double reaction_floor) {
    const Mesh& m = u.mesh();
    const PhiSpec& spec = prm.pair->phi_spec();
    const int npe = m.nodes_per_elem();
    const int n = m.n_interior();
    const double lam = prm.lambda, p = prm.p, q = prm.q;

    // Reaction coefficient d/dt of the source at t = v (full problem) or its
    // truncated counterpart, with the small-t floor.
    const auto reaction = [&](double u1x, double v) {
        if (v <= 0.0) return 0.0;
        if (tr && v > std::max(u1x, 0.0)) return 0.0;
        const double vc = std::max(v, reaction_floor);
        return (p - 1.0) * upow(vc, p - 2.0) - (q - 1.0) * upow(vc, q - 2.0);
    };

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(m.n_elems()) * npe * npe);
    for (int e = 0; e < m.n_elems(); ++e) {
        const int* nd = &m.elems[npe * e];
        const double* gb = &m.grad_basis[npe * m.dim * e];
        const double vol = m.elem_measure[e];

        double g[2];
        elem_gradient(m, u.coeffs(), e, g);
        const double gn = norm_of(g, m.dim);
        // Flux Jacobian A = alpha I + beta (g g^T)/|g|^2.
        double alpha, beta;
        if (gn > 0.0) {
            alpha = a_eval(spec, gn);
            beta = phi_prime(spec, gn) - alpha;
        } else {
            alpha = std::min(a_eval(spec, 0.0), 1e12);
            beta = 0.0;
        }

        double local[3][3] = {};
        for (int a = 0; a < npe; ++a) {
            for (int b = 0; b < npe; ++b) {
                double iso = 0.0, ga = 0.0, gbb = 0.0;
                for (int j = 0; j < m.dim; ++j) {
                    iso += gb[a * m.dim + j] * gb[b * m.dim + j];
                    ga += gb[a * m.dim + j] * g[j];
                    gbb += gb[b * m.dim + j] * g[j];
                }
                double v = alpha * iso;
                if (gn > 0.0) v += beta * ga * gbb / (gn * gn);
                local[a][b] = vol * v;
            }
        }
        for (int qi = 0; qi < m.n_quad(); ++qi) {
            const auto& qp = m.quad[qi];
            const double v = value_at(m, u.coeffs(), e, qp);
            const double u1x = tr ? tr->u1_at(e, qi) : 0.0;
            const double rc = reaction(u1x, v);
            if (rc != 0.0) {
                for (int a = 0; a < npe; ++a)
                    for (int b = 0; b < npe; ++b)
                        local[a][b] -= lam * vol * qp.weight * rc * qp.bary[a] * qp.bary[b];
            }
        }
        for (int a = 0; a < npe; ++a) {
            const int ia = m.interior_pos[nd[a]];
            if (ia < 0) continue;
            for (int b = 0; b < npe; ++b) {
                const int ib = m.interior_pos[nd[b]];
                if (ib >= 0) trips.emplace_back(ia, ib, local[a][b]);
            }
        }
    }
    Eigen::SparseMatrix<double> H(n, n);
    H.setFromTriplets(trips.begin(), trips.end());
    return H;
}

std::vector<double> newton_direction(const Field& u, const ProblemParams& prm,
                                     const Truncation* tr, const std::vector<double>& residual) {
    const Mesh& m = u.mesh();
    Eigen::SparseMatrix<double> H = assemble_hessian(u, prm, tr);
    Eigen::VectorXd rhs(m.n_interior());
    for (int k = 0; k < m.n_interior(); ++k) rhs[k] = -residual[m.interior_ids[k]];

    // Degenerate flux blocks (a(0) = 0 on dead elements) can make H singular;
    // retry with an increasing diagonal shift before giving up.
    double h_scale = 0.0;
    for (int k = 0; k < H.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator itr(H, k); itr; ++itr)
            h_scale = std::max(h_scale, std::abs(itr.value()));
    Eigen::SparseMatrix<double> ident(m.n_interior(), m.n_interior());
    ident.setIdentity();
    for (double shift : {0.0, 1e-12, 1e-8, 1e-4}) {
        Eigen::SparseMatrix<double> Hs = H;
        if (shift > 0.0) Hs = H + (shift * h_scale) * ident;
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.analyzePattern(Hs);
        lu.factorize(Hs);
        if (lu.info() != Eigen::Success) continue;
        const Eigen::VectorXd x = lu.solve(rhs);
        if (!x.allFinite()) continue;
        std::vector<double> d(m.n_nodes(), 0.0);
        for (int k = 0; k < m.n_interior(); ++k) d[m.interior_ids[k]] = x[k];
        return d;
    }
    return {};
}

} // namespace orlivar
