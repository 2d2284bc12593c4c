#include "orlivar/mountain_pass.hpp"

#include "orlivar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace orlivar {
namespace {

double coeff_distance(const Field& a, const Field& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        const double d = a.coeffs()[i] - b.coeffs()[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

struct PathPoint {
    Field u;
    double energy;
};

/// Re-interpolates the polygonal path: a uniform arclength backbone plus a
/// geometric cluster of points around the current argmax, so the barrier
/// region stays resolved even when it occupies a tiny fraction of the path.
std::vector<PathPoint> reinterpolate_clustered(const std::vector<PathPoint>& path, int n,
                                               const std::function<double(const Field&)>& energy) {
    const int m = static_cast<int>(path.size());
    std::vector<double> s(m, 0.0);
    for (int i = 1; i < m; ++i) s[i] = s[i - 1] + coeff_distance(path[i].u, path[i - 1].u);
    const double total = s.back();
    if (!(total > 0.0)) return path;

    int k = 0;
    for (int i = 1; i < m; ++i)
        if (path[i].energy > path[k].energy) k = i;
    const double sk = s[k];

    std::vector<double> targets;
    const int backbone = std::max(n - 13, 4);
    for (int j = 1; j < backbone; ++j) targets.push_back(total * j / backbone);
    targets.push_back(sk);
    for (double frac : {0.0025, 0.005, 0.01, 0.02, 0.04}) {
        targets.push_back(sk - frac * total);
        targets.push_back(sk + frac * total);
    }
    std::sort(targets.begin(), targets.end());
    std::vector<double> keep;
    for (double t : targets) {
        if (t <= 1e-12 * total || t >= total * (1.0 - 1e-12)) continue;
        if (!keep.empty() && t - keep.back() < 1e-9 * total) continue;
        keep.push_back(t);
    }

    std::vector<PathPoint> out;
    out.reserve(keep.size() + 2);
    out.push_back(path.front());
    int seg = 1;
    for (double t : keep) {
        while (seg < m - 1 && s[seg] < t) ++seg;
        const double w = (t - s[seg - 1]) / std::max(s[seg] - s[seg - 1], 1e-300);
        Field f = path[seg - 1].u;
        f.scale(1.0 - w);
        f.axpy(w, path[seg].u);
        f.clamp_boundary();
        const double e = energy(f);
        out.push_back({std::move(f), e});
    }
    out.push_back(path.back());
    return out;
}

} // namespace

MountainPassResult mountain_pass(const DirichletLaplacian& lap, const Truncation& tr,
                                 const ProblemParams& prm, const MountainPassOptions& opt) {
    const Mesh& mesh = lap.mesh();
    const Field& u1 = tr.u1();
    const int n = std::max(opt.n_path, 7);

    MountainPassResult res(mesh);

    const auto ray_point = [&](double t) {
        Field f = u1;
        f.scale(t);
        return f;
    };
    const auto energy_of = [&](const Field& f) { return assemble_J(f, tr, prm, opt.exec); };

    // The barrier between 0 and u1 can sit at a tiny fraction of the segment
    // when ||u1|| is large, so bracket a positive ridge value dyadically
    // before laying out the path.
    double t_ridge = 0.0;
    {
        double t = 1.0;
        for (int j = 0; j < 60; ++j) {
            if (energy_of(ray_point(t)) > 0.0) {
                t_ridge = t;
                break;
            }
            t *= 0.5;
        }
    }
    if (t_ridge == 0.0 || energy_of(u1) >= 0.0) {
        res.status = MpStatus::GeometryFailure;
        return res;
    }

    // Initial path: 0, then a log ladder from t_ridge/64 to 1 along the ray.
    std::vector<PathPoint> path;
    path.reserve(n);
    path.push_back({Field(mesh), 0.0});
    const double t_lo = std::min(t_ridge / 64.0, 1.0 / 64.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double t =
            std::exp(std::log(t_lo) + (std::log(1.0) - std::log(t_lo)) * i / (n - 2));
        Field f = ray_point(t);
        const double e = energy_of(f);
        path.push_back({std::move(f), e});
    }

    const auto argmax = [&] {
        int k = 0;
        for (std::size_t i = 1; i < path.size(); ++i)
            if (path[i].energy > path[k].energy) k = static_cast<int>(i);
        return k;
    };

    if (path[argmax()].energy <= 0.0) {
        res.status = MpStatus::GeometryFailure;
        return res;
    }
    // Levels at or below this are the zero solution's rounding, not a ridge.
    const double level_floor = 1e-8 * (1.0 + std::abs(energy_of(u1)));

    double step = 1.0;
    int newton_cooldown = 0;
    int newton_fails = 0;
    int degenerate_count = 0;
    bool have_u2 = false;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if (it % 5 == 4) path = reinterpolate_clustered(path, n, energy_of);
        const int k = argmax();
        if (path[k].energy <= level_floor) {
            // the deformation slid every point into a basin; re-seed the
            // crossing from the surviving polygon
            path = reinterpolate_clustered(path, n, energy_of);
            if (++degenerate_count >= 5) break;
            continue;
        }
        std::vector<double> r = assemble_gradient_J(path[k].u, tr, prm, opt.exec);
        double rn = residual_sup_norm(mesh, r);
        if (opt.log && opt.verbosity >= 1)
            *opt.log << "mpa it=" << it << " k=" << k << " level=" << path[k].energy
                     << " res=" << rn << "\n";
        if (rn <= opt.tol && path[k].energy > level_floor) {
            res.u2 = path[k].u;
            res.level_c = path[k].energy;
            res.residual = rn;
            have_u2 = true;
            break;
        }

        // Newton endgame on J'(u) = 0 from the argmax point. Full steps under
        // a trust radius: damping the residual norm would just flow into the
        // basin of the zero solution, while the local root is the saddle.
        if (opt.newton_polish && newton_cooldown == 0 && it >= 2) {
            Field cand = path[k].u;
            std::vector<double> rc = r;
            double rcn = rn;
            const double trust = 0.5 * (1.0 + u1.max_value());
            bool ok = false;
            for (int nit = 0; nit < 30; ++nit) {
                const auto d = newton_direction(cand, prm, &tr, rc);
                if (d.empty()) break;
                double dn = 0.0;
                for (int i : mesh.interior_ids) dn = std::max(dn, std::abs(d[i]));
                const double t = std::min(1.0, trust / std::max(dn, 1e-300));
                for (int i = 0; i < mesh.n_nodes(); ++i) cand[i] += t * d[i];
                cand.clamp_boundary();
                rc = assemble_gradient_J(cand, tr, prm, opt.exec);
                rcn = residual_sup_norm(mesh, rc);
                if (rcn <= opt.tol) {
                    ok = true;
                    break;
                }
                if (!std::isfinite(rcn) || rcn > 1e6 * (1.0 + rn)) break;
            }
            bool accepted = false;
            if (ok) {
                const double cand_level = energy_of(cand);
                const double u1_hi = u1.max_value();
                // a loose box that only excludes roots far from the order
                // interval; the certificate applies the strict 1e-8 slacks
                const bool admissible = cand_level > level_floor &&
                                        cand.min_value() > -0.05 * (1.0 + u1_hi) &&
                                        cand.max_value() < u1_hi * 1.05 + 1e-8;
                if (admissible) {
                    res.u2 = std::move(cand);
                    res.level_c = cand_level;
                    res.residual = rcn;
                    have_u2 = true;
                    path[k].u = res.u2;
                    path[k].energy = res.level_c;
                    accepted = true;
                } else if (opt.log && opt.verbosity >= 2) {
                    double excess = -1e300;
                    for (int i = 0; i < mesh.n_nodes(); ++i)
                        excess = std::max(excess, cand[i] - u1[i]);
                    *opt.log << "mpa newton: rejected root at level " << cand_level
                             << " min " << cand.min_value() << " excess " << excess << "\n";
                }
            } else if (opt.log && opt.verbosity >= 2) {
                *opt.log << "mpa newton: no local root, res " << rcn << "\n";
            }
            if (accepted) break;
            newton_fails = std::min(newton_fails + 1, 6);
            newton_cooldown = 10 * (1 << newton_fails);
        }
        if (newton_cooldown > 0) --newton_cooldown;

        // One line-searched descent move of the argmax point, with the local
        // path-tangent component removed so the point rides the ridge toward
        // the saddle instead of sliding into a basin.
        std::vector<double> d = lap.solve(r);
        if (k > 0 && k + 1 < static_cast<int>(path.size())) {
            std::vector<double> tan(mesh.n_nodes(), 0.0);
            double tn = 0.0;
            for (int i : mesh.interior_ids) {
                tan[i] = path[k + 1].u[i] - path[k - 1].u[i];
                tn += tan[i] * tan[i];
            }
            if (tn > 0.0) {
                double proj = 0.0;
                for (int i : mesh.interior_ids) proj += d[i] * tan[i];
                proj /= tn;
                for (int i : mesh.interior_ids) d[i] -= proj * tan[i];
            }
        }
        double slope = lap.dot_interior(r, d);
        if (!(slope > 0.0)) {
            d = lap.solve(r);
            slope = lap.dot_interior(r, d);
        }
        if (!(slope > 0.0)) {
            d = r;
            slope = lap.dot_interior(r, r);
        }
        double t = step;
        bool moved = false;
        for (int h = 0; h < 60; ++h, t *= 0.5) {
            Field cand = path[k].u;
            for (int i = 0; i < mesh.n_nodes(); ++i) cand[i] -= t * d[i];
            cand.clamp_boundary();
            const double fc = energy_of(cand);
            if (fc <= path[k].energy - 1e-4 * t * slope) {
                path[k].u = std::move(cand);
                path[k].energy = fc;
                moved = true;
                break;
            }
        }
        if (!moved) break;
        step = std::min(t * 2.0, 1e12);
    }
    res.iterations = it;
    if (!have_u2) {
        const int k = argmax();
        res.u2 = path[k].u;
        res.level_c = path[k].energy;
        res.residual = residual_sup_norm(mesh, assemble_gradient_J(path[k].u, tr, prm, opt.exec));
        res.status = (res.status == MpStatus::GeometryFailure) ? res.status
                                                               : MpStatus::NoConvergence;
        return res;
    }
    res.status = MpStatus::Converged;

    // Final certified path through u2: a log ladder 0 -> u2 and a straight
    // leg u2 -> u1, every interior point relaxed below the level c, so that
    // the path maximum is attained at u2 itself.
    {
        const int half = n / 2;
        std::vector<PathPoint> final_path;
        final_path.push_back({Field(mesh), 0.0});
        for (int i = 1; i < half; ++i) {
            const double t = std::exp(std::log(1e-3) * (1.0 - static_cast<double>(i) / half));
            Field f = res.u2;
            f.scale(t);
            const double e = energy_of(f);
            final_path.push_back({std::move(f), e});
        }
        const int u2_index = static_cast<int>(final_path.size());
        final_path.push_back({res.u2, res.level_c});
        const int rest = n - static_cast<int>(final_path.size());
        for (int i = 1; i <= rest; ++i) {
            const double s = static_cast<double>(i) / (rest + 1);
            Field f = res.u2;
            f.scale(1.0 - s);
            f.axpy(s, u1);
            const double e = energy_of(f);
            final_path.push_back({std::move(f), e});
        }
        final_path.push_back({u1, energy_of(u1)});

        // Relax every interior point (except u2) strictly below c.
        const int m = static_cast<int>(final_path.size());
        for (int i = 1; i + 1 < m; ++i) {
            if (i == u2_index) continue;
            if (final_path[i].energy < res.level_c) continue;
            double pstep = 1.0;
            for (int sweep = 0; sweep < 400 && final_path[i].energy >= res.level_c; ++sweep) {
                const auto rr = assemble_gradient_J(final_path[i].u, tr, prm, opt.exec);
                std::vector<double> dd = lap.solve(rr);
                double slope = lap.dot_interior(rr, dd);
                if (!(slope > 0.0)) break;
                bool moved = false;
                double t = pstep;
                for (int h = 0; h < 60; ++h, t *= 0.5) {
                    Field cand = final_path[i].u;
                    for (int j = 0; j < mesh.n_nodes(); ++j) cand[j] -= t * dd[j];
                    cand.clamp_boundary();
                    const double fc = energy_of(cand);
                    if (fc <= final_path[i].energy - 1e-4 * t * slope) {
                        final_path[i].u = std::move(cand);
                        final_path[i].energy = fc;
                        moved = true;
                        break;
                    }
                }
                if (!moved) break;
                pstep = std::min(t * 2.0, 1e12);
            }
        }
        std::vector<double> s(m, 0.0);
        for (int i = 1; i < m; ++i)
            s[i] = s[i - 1] + coeff_distance(final_path[i].u, final_path[i - 1].u);
        const double total = std::max(s.back(), 1e-300);
        res.path_params.resize(m);
        res.path_energies.resize(m);
        for (int i = 0; i < m; ++i) {
            res.path_params[i] = s[i] / total;
            res.path_energies[i] = final_path[i].energy;
        }
    }

    res.ring = probe_ring(tr, prm, opt.seed, 24, opt.exec);
    return res;
}

RingProbe probe_ring(const Truncation& tr, const ProblemParams& prm, std::uint64_t seed,
                     int samples_per_radius, Exec exec) {
    const Mesh& mesh = tr.u1().mesh();
    const double u1_norm = luxemburg_norm(*prm.pair, gradient_samples(tr.u1()));
    RingProbe best;
    best.samples = samples_per_radius;
    const double fractions[] = {0.02, 0.05, 0.1, 0.2, 0.35};
    bool first = true;
    for (double frac : fractions) {
        const double rho = frac * u1_norm;
        if (!(rho > 0.0)) continue;
        double level = std::numeric_limits<double>::infinity();
        for (int s = 0; s < samples_per_radius; ++s) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(frac * 1000) * 1000 + s);
            Field v(mesh);
            for (int i : mesh.interior_ids) v[i] = rng.uniform(-1.0, 1.0);
            const double vn = luxemburg_norm(*prm.pair, gradient_samples(v));
            if (!(vn > 0.0)) continue;
            v.scale(rho / vn);
            level = std::min(level, assemble_J(v, tr, prm, exec));
        }
        if (first || level > best.level) {
            best.rho = rho;
            best.level = level;
            first = false;
        }
    }
    return best;
}

} // namespace orlivar
