#include "orlivar/checks.hpp"

#include "orlivar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orlivar {
namespace {

using kernels::elem_gradient;
using kernels::norm_of;
using kernels::value_at;

constexpr double kInf = std::numeric_limits<double>::infinity();

double upow(double base, double expo) { return base <= 0.0 ? 0.0 : std::pow(base, expo); }

/// Gradient of the modular I_0 (flux terms only).
std::vector<double> gradient_modular(const Field& u, const YoungPair& pair) {
    const Mesh& m = u.mesh();
    const PhiSpec& spec = pair.phi_spec();
    const int npe = m.nodes_per_elem();
    std::vector<double> r(m.n_nodes(), 0.0);
    for (int e = 0; e < m.n_elems(); ++e) {
        double g[2], fx[2];
        elem_gradient(m, u.coeffs(), e, g);
        kernels::flux_of(spec, g, m.dim, fx);
        const int* nd = &m.elems[npe * e];
        const double* gb = &m.grad_basis[npe * m.dim * e];
        for (int k = 0; k < npe; ++k) {
            double acc = 0.0;
            for (int j = 0; j < m.dim; ++j) acc += fx[j] * gb[k * m.dim + j];
            r[nd[k]] += m.elem_measure[e] * acc;
        }
    }
    for (int i = 0; i < m.n_nodes(); ++i)
        if (m.boundary[i]) r[i] = 0.0;
    return r;
}

/// int |u|^r and its nodal gradient.
double abs_power_integral(const Field& u, double r, std::vector<double>* grad) {
    const Mesh& m = u.mesh();
    const int npe = m.nodes_per_elem();
    if (grad) grad->assign(m.n_nodes(), 0.0);
    double acc = 0.0;
    for (int e = 0; e < m.n_elems(); ++e) {
        const int* nd = &m.elems[npe * e];
        for (const auto& qp : m.quad) {
            const double v = value_at(m, u.coeffs(), e, qp);
            acc += m.elem_measure[e] * qp.weight * upow(std::abs(v), r);
            if (grad && v != 0.0) {
                const double dv = r * upow(std::abs(v), r - 1.0) * (v > 0.0 ? 1.0 : -1.0);
                for (int k = 0; k < npe; ++k)
                    (*grad)[nd[k]] += m.elem_measure[e] * qp.weight * dv * qp.bary[k];
            }
        }
    }
    if (grad)
        for (int i = 0; i < m.n_nodes(); ++i)
            if (m.boundary[i]) (*grad)[i] = 0.0;
    return acc;
}

Field random_interior_field(const Mesh& mesh, Rng& rng, double lo, double hi) {
    Field f(mesh);
    for (int i : mesh.interior_ids) f[i] = rng.uniform(lo, hi);
    return f;
}

/// Rescales f to the requested Luxemburg norm of its gradient (exact by
/// homogeneity); returns false for the zero field.
bool rescale_to_norm(Field& f, const YoungPair& pair, double target) {
    const double n = luxemburg_norm(pair, gradient_samples(f));
    if (!(n > 0.0)) return false;
    f.scale(target / n);
    return true;
}

} // namespace

OrderingReport verify_ordering_and_sign(const Field& u2, const Field& u1) {
    OrderingReport rep;
    rep.max_negative_part = -kInf;
    rep.max_excess = -kInf;
    for (std::size_t i = 0; i < u2.coeffs().size(); ++i) {
        rep.max_negative_part = std::max(rep.max_negative_part, -u2.coeffs()[i]);
        rep.max_excess = std::max(rep.max_excess, u2.coeffs()[i] - u1.coeffs()[i]);
    }
    return rep;
}

FluxMonotonicityReport flux_monotonicity_check(const YoungPair& pair, int n_trials,
                                               std::uint64_t seed) {
    const PhiSpec spec = pair.phi_spec();
    std::vector<double> gap(n_trials), dist(n_trials);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n_trials; ++t) {
        Rng rng = Rng::stream(seed, t);
        double xi[2], psi[2], fxi[2], fpsi[2];
        for (int j = 0; j < 2; ++j) {
            xi[j] = rng.uniform(-2.0, 2.0);
            psi[j] = rng.uniform(-2.0, 2.0);
        }
        kernels::flux_of(spec, xi, 2, fxi);
        kernels::flux_of(spec, psi, 2, fpsi);
        gap[t] = (fxi[0] - fpsi[0]) * (xi[0] - psi[0]) + (fxi[1] - fpsi[1]) * (xi[1] - psi[1]);
        dist[t] = std::sqrt((xi[0] - psi[0]) * (xi[0] - psi[0]) +
                            (xi[1] - psi[1]) * (xi[1] - psi[1]));
    }
    FluxMonotonicityReport rep;
    rep.trials = n_trials;
    rep.min_gap = kInf;
    for (int t = 0; t < n_trials; ++t) {
        rep.min_gap = std::min(rep.min_gap, gap[t]);
        if (gap[t] < 1e-12) rep.near_zero_max_dist = std::max(rep.near_zero_max_dist, dist[t]);
    }
    return rep;
}

Lambda1Result lambda1_estimate(const YoungPair& pair, const DirichletLaplacian& lap,
                               int n_restarts, std::uint64_t seed, int max_iter,
                               const std::vector<Field>* extra_starts) {
    const Mesh& mesh = lap.mesh();
    const double phi0 = pair.indices().lo;
    const double floor_norm = 1.0 + 1e-6;

    const auto quotient = [&](const Field& u) {
        return modular(u, pair) / abs_power_integral(u, phi0, nullptr);
    };

    std::vector<Field> starts;
    {
        Field s(mesh);
        for (int i = 0; i < mesh.n_nodes(); ++i) {
            const double x = mesh.coords[mesh.dim * i];
            double v = std::sin(M_PI * x);
            if (mesh.dim == 2) v *= std::sin(M_PI * mesh.coords[2 * i + 1]);
            s[i] = v;
        }
        s.clamp_boundary();
        starts.push_back(std::move(s));
    }
    Rng rng(seed);
    for (int k = 1; k < n_restarts; ++k) starts.push_back(random_interior_field(mesh, rng, -1.0, 1.0));
    if (extra_starts)
        for (const auto& f : *extra_starts) starts.push_back(f);

    Lambda1Result best{kInf, Field(mesh)};
    for (auto& start : starts) {
        Field u = start;
        if (!rescale_to_norm(u, pair, 2.0)) continue;
        double val = quotient(u);
        double step = 1.0;
        for (int it = 0; it < max_iter; ++it) {
            const double num = modular(u, pair);
            std::vector<double> gden;
            const double den = abs_power_integral(u, phi0, &gden);
            const auto gnum = gradient_modular(u, pair);
            std::vector<double> gr(gnum.size());
            for (std::size_t i = 0; i < gr.size(); ++i)
                gr[i] = (gnum[i] - (num / den) * gden[i]) / den;
            std::vector<double> d = lap.solve(gr);
            double slope = lap.dot_interior(gr, d);
            if (!(slope > 0.0)) break;
            double t = step;
            bool moved = false;
            for (int h = 0; h < 50; ++h, t *= 0.5) {
                Field cand = u;
                for (int i = 0; i < mesh.n_nodes(); ++i) cand[i] -= t * d[i];
                cand.clamp_boundary();
                const double cn = luxemburg_norm(pair, gradient_samples(cand));
                if (!(cn > 0.0)) continue;
                if (cn < floor_norm) cand.scale(floor_norm / cn);
                const double cv = quotient(cand);
                if (cv <= val - 1e-4 * t * slope || cv < val * (1.0 - 1e-14)) {
                    u = std::move(cand);
                    val = cv;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
            step = std::min(t * 2.0, 1e9);
        }
        if (val < best.value) {
            best.value = val;
            best.argmin = u;
        }
    }
    return best;
}

CoercivityProbe coercivity_probe(const DirichletLaplacian& lap, const ProblemParams& prm,
                                 const Truncation* tr, std::uint64_t seed,
                                 int samples_per_radius) {
    const Mesh& mesh = lap.mesh();
    CoercivityProbe probe;
    probe.radii = {2.0, 4.0, 8.0, 16.0};
    const double phi0 = prm.indices().lo;
    Rng rng(seed);
    for (double r : probe.radii) {
        double mi = kInf, mj = kInf;
        for (int s = 0; s < samples_per_radius; ++s) {
            Field f = random_interior_field(mesh, rng, -1.0, 1.0);
            if (!rescale_to_norm(f, *prm.pair, r)) continue;
            mi = std::min(mi, assemble_energy_I(f, prm));
            if (tr) mj = std::min(mj, assemble_J(f, *tr, prm));
        }
        probe.min_I.push_back(mi);
        if (tr) probe.min_J.push_back(mj);
        probe.fitted_C = std::max(probe.fitted_C, std::max(0.0, 0.5 * std::pow(r, phi0) - mi));
    }
    probe.monotone_tail = true;
    for (std::size_t k = 2; k < probe.radii.size(); ++k) {
        if (probe.min_I[k] <= probe.min_I[k - 1]) probe.monotone_tail = false;
        if (tr && probe.min_J[k] <= probe.min_J[k - 1]) probe.monotone_tail = false;
    }
    return probe;
}

std::vector<PropertyResult> run_property_suite(const YoungPair& pair, const Mesh& mesh, double p,
                                               double q, double lambda, std::uint64_t seed) {
    std::vector<PropertyResult> out;
    const PhiSpec& spec = pair.phi_spec();
    Rng rng(seed);

    // Oddness of phi.
    {
        PropertyResult pr{"phi_odd", 0.0, -1e-12, false, 1000};
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.log_uniform(1e-6, 1e6);
            const double dev = std::abs(phi_eval(spec, t) + phi_eval(spec, -t)) /
                               (1.0 + std::abs(phi_eval(spec, t)));
            worst = std::max(worst, dev);
        }
        pr.worst = -worst;
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    // Monotone round trip of phi_inverse.
    {
        PropertyResult pr{"phi_inverse_round_trip", 0.0, -1e-9, false, 500};
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            double t = rng.log_uniform(1e-3, 1e3);
            if (i % 2) t = -t;
            const double back = phi_inverse(spec, phi_eval(spec, t));
            worst = std::max(worst, std::abs(back - t) / std::abs(t));
        }
        pr.worst = -worst;
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    // Index sandwich against the cached estimates.
    {
        const IndexEstimate idx = pair.indices();
        PropertyResult pr{"index_sandwich", kInf, -1e-8, false, 1000};
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.log_uniform(1e-6, 1e6);
            const double r = t * phi_eval(spec, t) / pair.big_phi(t);
            pr.worst = std::min(pr.worst, std::min(r - idx.lo, idx.hi - r));
        }
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    // Closed-form indices of the three families.
    {
        const IndexEstimate idx = pair.indices();
        double lo_ref = 0.0, hi_ref = 0.0;
        switch (spec.family) {
            case PhiFamily::Power: lo_ref = spec.p; hi_ref = spec.p; break;
            case PhiFamily::LogPower: lo_ref = spec.p; hi_ref = spec.p + spec.s; break;
            case PhiFamily::PowerOverLog: lo_ref = spec.p - 1.0; hi_ref = spec.p; break;
        }
        PropertyResult pr{"indices_closed_form", 0.0, -1e-3, false, 2};
        pr.worst = -std::max(std::abs(idx.lo - lo_ref), std::abs(idx.hi - hi_ref));
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    // Young's inequality gap.
    {
        PropertyResult pr{"young_gap", kInf, -1e-8, false, 10000};
        for (int i = 0; i < 10000; ++i) {
            const double s = (i % 2) ? rng.log_uniform(1e-3, 1e3) : rng.uniform(0.0, 10.0);
            const double t = (i % 3) ? rng.log_uniform(1e-3, 1e3) : rng.uniform(0.0, 10.0);
            pr.worst = std::min(pr.worst, young_gap(pair, s, t) /
                                              std::max(1.0, pair.big_phi(s) + pair.big_phi_star(t)));
        }
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    // Delta_2 ratio against 2^{phi^0}.
    {
        std::vector<double> grid(1000);
        for (int i = 0; i < 1000; ++i)
            grid[i] = std::exp(std::log(1e-6) + (std::log(1e6) - std::log(1e-6)) * i / 999.0);
        const double ratio = delta2_ratio(pair, grid);
        PropertyResult pr{"delta2_bound", 0.0, 0.0, false, 1000};
        pr.worst = std::pow(2.0, pair.indices().hi) + 1e-6 - ratio;
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    // Convexity of t -> Phi(sqrt(t)).
    bool sqrt_convex = false;
    {
        std::vector<double> grid(2000);
        for (int i = 0; i < 2000; ++i)
            grid[i] = std::exp(std::log(1e-8) + (std::log(1e8) - std::log(1e-8)) * i / 1999.0);
        sqrt_convex = sqrt_convexity_check(pair, grid);
        PropertyResult pr{"sqrt_convexity", sqrt_convex ? 1.0 : 0.0, 0.5, sqrt_convex, 2000};
        out.push_back(pr);
    }
    // Scalar uniform-convexity gap (only meaningful under sqrt convexity).
    {
        PropertyResult pr{"convexity_gap", kInf, -1e-8, false, 10000};
        if (sqrt_convex) {
            for (int i = 0; i < 10000; ++i) {
                const double x = rng.uniform(-5.0, 5.0);
                const double y = rng.uniform(-5.0, 5.0);
                pr.worst = std::min(pr.worst, convexity_gap(pair, x, y) /
                                                  std::max(1.0, pair.big_phi(x) + pair.big_phi(y)));
            }
            pr.pass = pr.worst >= pr.bound;
        } else {
            pr.worst = 0.0;
            pr.samples = 0;
            pr.pass = true;
        }
        out.push_back(pr);
    }
    // Luxemburg homogeneity and modular normalization on random sample sets.
    {
        PropertyResult hom{"luxemburg_homogeneity", 0.0, -1e-8, false, 100};
        PropertyResult nrm{"modular_normalization", 0.0, -1e-8, false, 100};
        double worst_h = 0.0, worst_n = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const int n = 5 + static_cast<int>(rng.uniform(0.0, 20.0));
            std::vector<WeightedSample> samples(n);
            double total_w = 0.0;
            for (auto& s : samples) {
                s.value = rng.uniform(-3.0, 3.0);
                s.weight = rng.uniform(0.01, 0.2);
                total_w += s.weight;
            }
            const double k = luxemburg_norm(pair, samples);
            if (!(k > 0.0)) continue;
            double modk = 0.0;
            for (const auto& s : samples) modk += s.weight * pair.big_phi(std::abs(s.value) / k);
            worst_n = std::max(worst_n, std::abs(modk - 1.0));
            const double c = rng.log_uniform(0.05, 20.0);
            auto scaled = samples;
            for (auto& s : scaled) s.value *= c;
            const double kc = luxemburg_norm(pair, scaled);
            worst_h = std::max(worst_h, std::abs(kc - c * k) / (c * k));
        }
        hom.worst = -worst_h;
        hom.pass = hom.worst >= hom.bound;
        nrm.worst = -worst_n;
        nrm.pass = nrm.worst >= nrm.bound;
        out.push_back(hom);
        out.push_back(nrm);
    }
    // Norm-modular sandwich in both regimes.
    {
        const IndexEstimate idx = pair.indices();
        for (int regime = 0; regime < 2; ++regime) {
            PropertyResult pr{regime == 0 ? "sandwich_norm_below_1" : "sandwich_norm_above_1",
                              kInf, -1e-3, false, 100};
            for (int rep = 0; rep < 100; ++rep) {
                Field f = random_interior_field(mesh, rng, -1.0, 1.0);
                const double target =
                    regime == 0 ? rng.uniform(0.1, 0.9) : rng.log_uniform(1.1, 10.0);
                if (!rescale_to_norm(f, pair, target)) continue;
                const double nrm = luxemburg_norm(pair, gradient_samples(f));
                const double mod = modular(f, pair);
                const double e_up = regime == 0 ? idx.lo : idx.hi;
                const double e_lo = regime == 0 ? idx.hi : idx.lo;
                const double upper = std::pow(nrm, e_up);
                const double lower = std::pow(nrm, e_lo);
                pr.worst = std::min(pr.worst, (upper - mod) / std::max(upper, 1e-300));
                pr.worst = std::min(pr.worst, (mod - lower) / std::max(lower, 1e-300));
            }
            pr.pass = pr.worst >= pr.bound;
            out.push_back(pr);
        }
    }
    // Gradient consistency of I and J against central differences.
    {
        auto pair_ptr = std::shared_ptr<const YoungPair>(&pair, [](const YoungPair*) {});
        const ProblemParams prm(lambda, p, q, pair_ptr, 3.0);
        Field u1_syn = plateau_profile(mesh);
        u1_syn.scale(2.0);
        const Truncation tr(u1_syn);
        PropertyResult pri{"gradient_fd_I", 0.0, -1e-6, false, 20};
        PropertyResult prj{"gradient_fd_J", 0.0, -1e-6, false, 20};
        double worst_i = 0.0, worst_j = 0.0;
        const double h = 1e-5;
        for (int rep = 0; rep < 20; ++rep) {
            Field u = random_interior_field(mesh, rng, 0.2, 1.0);
            Field v = random_interior_field(mesh, rng, -1.0, 1.0);
            Field up = u, um = u;
            up.axpy(h, v);
            um.axpy(-h, v);

            const auto ri = assemble_gradient_I(u, prm);
            double pairing = 0.0;
            for (int i : mesh.interior_ids) pairing += ri[i] * v[i];
            const double fd =
                (assemble_energy_I(up, prm) - assemble_energy_I(um, prm)) / (2.0 * h);
            worst_i = std::max(worst_i, std::abs(fd - pairing) / std::max(1e-12, std::abs(pairing)));

            const auto rj = assemble_gradient_J(u, tr, prm);
            double pairing_j = 0.0;
            for (int i : mesh.interior_ids) pairing_j += rj[i] * v[i];
            const double fd_j = (assemble_J(up, tr, prm) - assemble_J(um, tr, prm)) / (2.0 * h);
            worst_j =
                std::max(worst_j, std::abs(fd_j - pairing_j) / std::max(1e-12, std::abs(pairing_j)));
        }
        pri.worst = -worst_i;
        pri.pass = pri.worst >= pri.bound;
        prj.worst = -worst_j;
        prj.pass = prj.worst >= prj.bound;
        out.push_back(pri);
        out.push_back(prj);
    }
    // Energy and gradient agreement of I and J on the order interval.
    {
        auto pair_ptr = std::shared_ptr<const YoungPair>(&pair, [](const YoungPair*) {});
        const ProblemParams prm(lambda, p, q, pair_ptr, 3.0);
        Field u1_syn = plateau_profile(mesh);
        u1_syn.scale(3.0);
        const Truncation tr(u1_syn);
        PropertyResult pr{"I_equals_J_on_order_interval", 0.0, -1e-10, false, 20};
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            Field u(mesh);
            for (int i : mesh.interior_ids) u[i] = rng.uniform(0.0, 1.0) * u1_syn[i];
            worst = std::max(worst, std::abs(assemble_J(u, tr, prm) - assemble_energy_I(u, prm)));
            const auto gi = assemble_gradient_I(u, prm);
            const auto gj = assemble_gradient_J(u, tr, prm);
            for (int i : mesh.interior_ids) worst = std::max(worst, std::abs(gi[i] - gj[i]));
        }
        pr.worst = -worst;
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    // Flux monotonicity.
    {
        const auto rep = flux_monotonicity_check(pair, 100000, seed + 17);
        PropertyResult pr{"flux_monotonicity", rep.min_gap, -1e-10, false, rep.trials};
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
        PropertyResult eq{"flux_equality_case", 1e-5 - rep.near_zero_max_dist, 0.0, false,
                          rep.trials};
        eq.pass = eq.worst > eq.bound;
        out.push_back(eq);
    }
    // Coercivity ladders for I and J.
    {
        auto pair_ptr = std::shared_ptr<const YoungPair>(&pair, [](const YoungPair*) {});
        const ProblemParams prm(lambda, p, q, pair_ptr, 3.0);
        const DirichletLaplacian lap(mesh);
        Field u1_syn = plateau_profile(mesh);
        u1_syn.scale(2.0);
        const Truncation tr(u1_syn);
        const auto probe = coercivity_probe(lap, prm, &tr, seed + 23);
        PropertyResult pr{"coercivity_growth", probe.monotone_tail ? 1.0 : 0.0, 0.5,
                          probe.monotone_tail, static_cast<long>(probe.radii.size())};
        out.push_back(pr);
    }
    // Cached Phi against direct adaptive quadrature (agreement at the
    // adaptive route's own tolerance scale).
    {
        PropertyResult pr{"big_phi_cache_vs_adaptive", 0.0, -1e-8, false, 200};
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double t = rng.log_uniform(1e-6, 1e5);
            const double a = pair.big_phi(t);
            const double b = pair.big_phi_uncached(t);
            // absolute floor sits above the adaptive route's 1e-12 tolerance
            const double dev = std::max(0.0, std::abs(a - b) - 1e-11);
            worst = std::max(worst, dev / std::max(1e-300, std::abs(b)));
        }
        pr.worst = -worst;
        pr.pass = pr.worst >= pr.bound;
        out.push_back(pr);
    }
    return out;
}

} // namespace orlivar
