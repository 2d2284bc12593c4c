#pragma once

#include "orlivar/operators.hpp"
#include "orlivar/problem.hpp"
#include "orlivar/truncation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace orlivar {

/// Sign and ordering slacks of a mountain-pass candidate against the global
/// minimizer: both are required <= 1e-8 for the two-solution certificate.
struct OrderingReport {
    double max_negative_part = 0.0; // max_i (-u2_i)
    double max_excess = 0.0;        // max_i (u2_i - u1_i)
    bool pass(double tol = 1e-8) const { return max_negative_part <= tol && max_excess <= tol; }
};

OrderingReport verify_ordering_and_sign(const Field& u2, const Field& u1);

/// Monte Carlo scan of the flux monotonicity gap
///   (a(|xi|) xi - a(|psi|) psi) . (xi - psi)
/// over random pairs in [-2,2]^2.
struct FluxMonotonicityReport {
    double min_gap = 0.0;
    double near_zero_max_dist = 0.0; // max |xi-psi| among pairs with gap < 1e-12
    int trials = 0;
};

FluxMonotonicityReport flux_monotonicity_check(const YoungPair& pair, int n_trials,
                                               std::uint64_t seed = 1);

/// Rayleigh-type quotient int Phi(|grad u|) / int |u|^{phi_0}, minimized by
/// projected descent over fields with Luxemburg norm > 1, multi-started.
struct Lambda1Result {
    double value = 0.0;
    Field argmin;
};

Lambda1Result lambda1_estimate(const YoungPair& pair, const DirichletLaplacian& lap,
                               int n_restarts, std::uint64_t seed = 1, int max_iter = 400,
                               const std::vector<Field>* extra_starts = nullptr);

/// Energy growth probe along a ladder of Luxemburg radii (coercivity shape of
/// the propositions; constants are fitted, not prescribed).
struct CoercivityProbe {
    std::vector<double> radii;
    std::vector<double> min_I;
    std::vector<double> min_J; // empty when no truncation given
    double fitted_C = 0.0;     // max(0, 1/2 r^{phi_0} - min I)
    bool monotone_tail = false;
};

CoercivityProbe coercivity_probe(const DirichletLaplacian& lap, const ProblemParams& prm,
                                 const Truncation* tr, std::uint64_t seed,
                                 int samples_per_radius = 16);

/// One entry of the randomized property suite run by the verify command.
struct PropertyResult {
    std::string name;
    double worst = 0.0;     // worst observed slack/deviation (sign convention per property)
    double bound = 0.0;     // the acceptance bound it is compared against
    bool pass = false;
    long samples = 0;
};

/// Runs the full randomized invariant suite for one Young pair on the given
/// mesh. Covers the scalar inequalities, the norm-modular sandwich, gradient
/// consistency, flux monotonicity and the coercivity ladders.
std::vector<PropertyResult> run_property_suite(const YoungPair& pair, const Mesh& mesh,
                                               double p, double q, double lambda,
                                               std::uint64_t seed);

} // namespace orlivar
