#include "orlivar/minimize.hpp"

#include "orlivar/errors.hpp"
#include "orlivar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

namespace orlivar {
namespace {

struct Objective {
    std::function<double(const Field&)> energy;
    std::function<std::vector<double>(const Field&)> gradient;
    std::function<std::vector<double>(const Field&, const std::vector<double>&)> newton;
};

Field apply_step(const Field& u, double t, const std::vector<double>& d) {
    Field out = u;
    for (int i = 0; i < u.mesh().n_nodes(); ++i) out[i] -= t * d[i];
    out.clamp_boundary();
    return out;
}

MinimizeResult run_descent(const DirichletLaplacian& lap, const Objective& obj, const Field& init,
                           const SolveOptions& opt) {
    MinimizeResult res{init, 0.0, 0.0, 0, false};
    res.u.clamp_boundary();
    double fu = obj.energy(res.u);
    std::vector<double> r = obj.gradient(res.u);
    double rn = residual_sup_norm(res.u.mesh(), r);
    const double rn0 = rn;

    double step = 1.0;
    int newton_cooldown = 0;
    int stagnant = 0;
    int it = 0;
    for (; it < opt.max_iter && rn > opt.tol; ++it) {
        if (opt.log && opt.verbosity >= 1)
            *opt.log << "min it=" << it << " I=" << fu << " res=" << rn << "\n";
        if (stagnant >= 30) break; // at the floating-point floor of the energy

        // Newton endgame: attempted once the residual has come down, accepted
        // only when it halves the residual without raising the energy.
        const bool newton_ready =
            opt.newton_polish && newton_cooldown == 0 &&
            (rn <= 1e-2 * rn0 || it >= opt.max_iter / 2 || stagnant >= 10);
        if (newton_ready) {
            const auto d = obj.newton(res.u, r);
            if (!d.empty()) {
                double t = 1.0;
                bool accepted = false;
                for (int k = 0; k < 8 && !accepted; ++k, t *= 0.5) {
                    Field cand = apply_step(res.u, -t, d); // u + t d
                    const double fc = obj.energy(cand);
                    const auto rc = obj.gradient(cand);
                    const double rcn = residual_sup_norm(res.u.mesh(), rc);
                    if ((rcn <= 0.5 * rn || rcn <= opt.tol) &&
                        fc <= fu + 1e-10 * (1.0 + std::abs(fu))) {
                        res.u = std::move(cand);
                        fu = fc;
                        r = rc;
                        rn = rcn;
                        accepted = true;
                    }
                }
                if (accepted) continue;
            }
            newton_cooldown = 25;
        }
        if (newton_cooldown > 0) --newton_cooldown;

        std::vector<double> d = lap.solve(r);
        double slope = lap.dot_interior(r, d);
        if (!(slope > 0.0)) {
            d = r; // fall back to the Euclidean gradient
            slope = lap.dot_interior(r, r);
            if (!(slope > 0.0)) break;
        }
        double t = step;
        bool moved = false;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            Field cand = apply_step(res.u, t, d);
            const double fc = obj.energy(cand);
            if (fc <= fu - 1e-4 * t * slope) {
                stagnant = (fu - fc <= 1e-13 * (1.0 + std::abs(fu))) ? stagnant + 1 : 0;
                res.u = std::move(cand);
                fu = fc;
                moved = true;
                break;
            }
        }
        if (!moved) break; // line search exhausted; rn > tol reports NoConvergence
        step = std::min(t * 2.0, 1e12);
        r = obj.gradient(res.u);
        rn = residual_sup_norm(res.u.mesh(), r);
    }
    res.energy = fu;
    res.residual = rn;
    res.iterations = it;
    res.converged = rn <= opt.tol;
    return res;
}

Objective full_objective(const ProblemParams& prm, Exec exec) {
    return Objective{
        [&prm, exec](const Field& u) { return assemble_energy_I(u, prm, exec); },
        [&prm, exec](const Field& u) { return assemble_gradient_I(u, prm, exec); },
        [&prm](const Field& u, const std::vector<double>& r) {
            return newton_direction(u, prm, nullptr, r);
        }};
}

} // namespace

MinimizeResult minimize_energy(const DirichletLaplacian& lap, const ProblemParams& prm,
                               const Field& init, const SolveOptions& opt) {
    return run_descent(lap, full_objective(prm, opt.exec), init, opt);
}

MinimizeResult minimize_truncated(const DirichletLaplacian& lap, const Truncation& tr,
                                  const ProblemParams& prm, const Field& init,
                                  const SolveOptions& opt) {
    Objective obj{
        [&](const Field& u) { return assemble_J(u, tr, prm, opt.exec); },
        [&](const Field& u) { return assemble_gradient_J(u, tr, prm, opt.exec); },
        [&](const Field& u, const std::vector<double>& r) {
            return newton_direction(u, prm, &tr, r);
        }};
    return run_descent(lap, obj, init, opt);
}

MultiStartResult minimize_multistart(const DirichletLaplacian& lap, const ProblemParams& prm,
                                     std::uint64_t seed, const SolveOptions& opt) {
    const Mesh& mesh = lap.mesh();
    const Field w0 = plateau_profile(mesh);
    const double t0 = plateau_height(prm.p, prm.q);

    std::vector<Field> starts;

    // Plateau witness, amplitude tuned over a dyadic ladder.
    {
        double best_amp = t0;
        double best_energy = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 10; ++j) {
            const double amp = t0 * static_cast<double>(1 << j);
            Field cand = w0;
            cand.scale(amp);
            const double e = assemble_energy_I(cand, prm, opt.exec);
            if (e < best_energy) {
                best_energy = e;
                best_amp = amp;
            }
        }
        Field witness = w0;
        witness.scale(best_amp);
        starts.push_back(std::move(witness));
    }
    // Near-zero perturbation.
    {
        Field tiny = w0;
        tiny.scale(1e-3 * t0);
        starts.push_back(std::move(tiny));
    }
    // First-mode bump, amplitude tuned over the same dyadic ladder.
    {
        Field bump(mesh);
        for (int i = 0; i < mesh.n_nodes(); ++i) {
            const double x = mesh.coords[mesh.dim * i];
            double v = std::sin(M_PI * x);
            if (mesh.dim == 2) v *= std::sin(M_PI * mesh.coords[2 * i + 1]);
            bump[i] = v;
        }
        bump.clamp_boundary();
        double best_amp = t0;
        double best_energy = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 10; ++j) {
            const double amp = t0 * static_cast<double>(1 << j);
            Field cand = bump;
            cand.scale(amp);
            const double e = assemble_energy_I(cand, prm, opt.exec);
            if (e < best_energy) {
                best_energy = e;
                best_amp = amp;
            }
        }
        bump.scale(best_amp);
        starts.push_back(std::move(bump));
    }
    // Seeded random smooth bump: a few low sine modes, random amplitude.
    {
        Rng rng(seed);
        Field rnd(mesh);
        double coef[5];
        for (double& c : coef) c = rng.uniform(-1.0, 1.0);
        coef[0] = std::abs(coef[0]) + 0.2;
        for (int i = 0; i < mesh.n_nodes(); ++i) {
            const double x = mesh.coords[mesh.dim * i];
            const double y = mesh.dim == 2 ? mesh.coords[2 * i + 1] : 0.5;
            double v = 0.0;
            for (int k = 1; k <= 5; ++k)
                v += coef[k - 1] / k * std::sin(k * M_PI * x) *
                     (mesh.dim == 2 ? std::sin(k * M_PI * y) : 1.0);
            rnd[i] = v;
        }
        rnd.clamp_boundary();
        const double amp = t0 * rng.log_uniform(1.0, 30.0) / std::max(rnd.max_value(), 1e-9);
        rnd.scale(amp);
        starts.push_back(std::move(rnd));
    }

    // Lowest energy wins; convergence only breaks ties.
    MultiStartResult out{MinimizeResult{Field(mesh), 0.0, 0.0, 0, false}, -1, {}};
    for (std::size_t s = 0; s < starts.size(); ++s) {
        MinimizeResult r = minimize_energy(lap, prm, starts[s], opt);
        out.start_energies.push_back(r.energy);
        const bool better = out.best_start < 0 || r.energy < out.best.energy ||
                            (r.energy == out.best.energy && r.converged && !out.best.converged);
        if (better) {
            out.best = std::move(r);
            out.best_start = static_cast<int>(s);
        }
    }
    return out;
}

LambdaStarResult find_lambda_star(const DirichletLaplacian& lap, const ProblemParams& prm_template,
                                  double lambda_lo, double lambda_hi, double bisect_tol,
                                  std::uint64_t seed, const SolveOptions& opt) {
    if (!(0.0 < lambda_lo && lambda_lo < lambda_hi))
        throw BracketInvalid("find_lambda_star: need 0 < lambda_lo < lambda_hi");
    if (!(bisect_tol > 0.0)) throw BracketInvalid("find_lambda_star: need bisect_tol > 0");

    LambdaStarResult out;
    const auto indicator = [&](double lambda) {
        const bool hit =
            minimize_multistart(lap, prm_template.with_lambda(lambda), seed, opt).best.energy <
            -kEpsNeg;
        out.probes.emplace_back(lambda, hit);
        return hit;
    };

    if (indicator(lambda_lo))
        throw BracketInvalid("find_lambda_star: negative level already at lambda_lo");
    if (!indicator(lambda_hi))
        throw BracketInvalid("find_lambda_star: no negative level at lambda_hi");

    double lo = lambda_lo, hi = lambda_hi;
    while (hi - lo > bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        if (indicator(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.lambda_hat = 0.5 * (lo + hi);

    // Spot-check monotonicity of the recorded probes.
    auto sorted = out.probes;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i - 1].second && !sorted[i].second)
            throw BracketInvalid("find_lambda_star: indicator not monotone across probes");
    }
    return out;
}

} // namespace orlivar
