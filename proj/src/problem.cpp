#include "orlivar/problem.hpp"

#include "orlivar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orlivar {

ProblemParams::ProblemParams(double lambda_, double p_, double q_,
                             std::shared_ptr<const YoungPair> pair_, double nominal_dim_)
    : lambda(lambda_), p(p_), q(q_), pair(std::move(pair_)), nominal_dim(nominal_dim_) {
    if (!pair) throw ConfigError("ProblemParams: missing Young pair");
    // lambda = 0 is admitted for the linear cross-checks; the variational
    // pipeline itself always runs with lambda > 0.
    if (!(lambda >= 0.0)) throw ConfigError("ProblemParams: lambda must be nonnegative");
    const IndexEstimate& idx = pair->indices();
    if (!(1.0 < q && q < p && p < idx.lo)) {
        std::ostringstream os;
        os << "ProblemParams: need 1 < q < p < phi_0, got q=" << q << ", p=" << p
           << ", phi_0=" << idx.lo << " for " << pair->phi_spec().describe();
        throw ConfigError(os.str());
    }
    const double n = nominal_dim;
    growth_condition_ok =
        idx.lo < n && idx.hi < std::min(n, n * idx.lo / (n - idx.lo));
}

Field plateau_profile(const Mesh& mesh) {
    Field w(mesh);
    // 1D: plateau [0.1, 0.9]. 2D: centered square of measure 0.8.
    const double ramp = mesh.dim == 1 ? 0.1 : 0.5 * (1.0 - std::sqrt(0.8));
    const auto shape = [ramp](double x) {
        const double d = std::min(x, 1.0 - x);
        return std::clamp(d / ramp, 0.0, 1.0);
    };
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        double v = shape(mesh.coords[mesh.dim * i]);
        if (mesh.dim == 2) v = std::min(v, shape(mesh.coords[2 * i + 1]));
        w[i] = v;
    }
    w.clamp_boundary();
    return w;
}

double plateau_height(double p, double q) {
    for (int t0 = 2; t0 < 1 << 20; ++t0) {
        const double t = t0;
        if (std::pow(t, p) / p > std::pow(t, q) / q) return t;
    }
    return 2.0;
}

} // namespace orlivar
