#pragma once

#include "orlivar/operators.hpp"
#include "orlivar/problem.hpp"
#include "orlivar/truncation.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace orlivar {

struct SolveOptions {
    double tol = 1e-8;      // sup-norm residual target
    int max_iter = 5000;
    bool newton_polish = true;
    Exec exec = Exec::Parallel;
    std::ostream* log = nullptr;
    int verbosity = 0;
};

struct MinimizeResult {
    Field u;
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false; // false = NoConvergence, best iterate is still in u
};

/// Armijo-backtracked descent on I along Riesz-lifted gradients, with a
/// guarded Newton endgame on I' = 0. Nonnegativity of the minimizer is never
/// imposed; it has to emerge and is asserted by the callers/tests.
MinimizeResult minimize_energy(const DirichletLaplacian& lap, const ProblemParams& prm,
                               const Field& init, const SolveOptions& opt = {});

/// Same loop on the truncated functional J.
MinimizeResult minimize_truncated(const DirichletLaplacian& lap, const Truncation& tr,
                                  const ProblemParams& prm, const Field& init,
                                  const SolveOptions& opt = {});

struct MultiStartResult {
    MinimizeResult best;
    int best_start = -1;
    std::vector<double> start_energies;
};

/// Runs minimize_energy from the spec'd start pool: an amplitude-tuned
/// plateau witness, a near-zero perturbation, and a seeded random bump.
/// Lowest converged energy wins.
MultiStartResult minimize_multistart(const DirichletLaplacian& lap, const ProblemParams& prm,
                                     std::uint64_t seed, const SolveOptions& opt = {});

/// Negative-level indicator threshold: min I < -eps_neg flags the
/// two-solution regime.
inline constexpr double kEpsNeg = 1e-6;

struct LambdaStarResult {
    double lambda_hat = 0.0;
    std::vector<std::pair<double, bool>> probes; // (lambda, indicator) in probe order
};

/// Bisects the indicator "multistart min I < -kEpsNeg" over [lambda_lo,
/// lambda_hi]. Requires the indicator false at the left end and true at the
/// right end (else BracketInvalid); monotonicity across recorded probes is
/// spot-checked.
LambdaStarResult find_lambda_star(const DirichletLaplacian& lap, const ProblemParams& prm_template,
                                  double lambda_lo, double lambda_hi, double bisect_tol,
                                  std::uint64_t seed, const SolveOptions& opt = {});

} // namespace orlivar
