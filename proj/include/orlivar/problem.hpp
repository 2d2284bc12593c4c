#pragma once

#include "orlivar/mesh.hpp"
#include "orlivar/young.hpp"

#include <memory>

namespace orlivar {

/// Coefficients of the full problem
///   -div(a(|grad u|) grad u) = lambda (u^{p-1} - u^{q-1}),  u = 0 on the boundary.
/// Construction enforces 1 < q < p < phi_0 (estimated); the extra growth
/// condition involving the nominal space dimension N is evaluated and
/// reported, never enforced, since desk-scale runs live in dims 1-2.
struct ProblemParams {
    double lambda = 1.0;
    double p = 2.0;
    double q = 1.5;
    std::shared_ptr<const YoungPair> pair;
    double nominal_dim = 3.0;
    bool growth_condition_ok = false; // phi^0 < min{N, N phi0/(N - phi0)}

    ProblemParams(double lambda, double p, double q, std::shared_ptr<const YoungPair> pair,
                  double nominal_dim = 3.0);

    const IndexEstimate& indices() const { return pair->indices(); }
    ProblemParams with_lambda(double new_lambda) const {
        ProblemParams out = *this;
        out.lambda = new_lambda;
        return out;
    }
};

/// The plateau profile used to witness negative energy levels: height 1 on a
/// centered sub-domain of 80% measure with a linear ramp to 0.
Field plateau_profile(const Mesh& mesh);

/// Smallest integer t0 > 1 with t0^p/p > t0^q/q.
double plateau_height(double p, double q);

} // namespace orlivar
