#pragma once

#include "orlivar/phi.hpp"

#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace orlivar {

enum class BigPhiStrategy {
    ClosedForm,         // Power family: Phi(t) = t^p
    AdaptiveQuadrature, // everything else: quadrature of phi with cached partial sums
};

/// Estimated Young indices: lo ~ phi_0 = inf t phi/Phi, hi ~ phi^0 = sup.
struct IndexEstimate {
    double lo = 0.0;
    double hi = 0.0;
};

struct WeightedSample {
    double value = 0.0;
    double weight = 0.0;
};

/// Default slack for the scalar inequality checks of this module.
inline constexpr double kDefaultTol = 1e-8;

/// A Young pair (Phi, Phi*) generated by a PhiSpec. Evaluation caches are
/// built once on first use and are read-only afterwards, so a const YoungPair
/// can be shared across threads.
class YoungPair {
public:
    explicit YoungPair(PhiSpec spec, double quad_tol = 1e-12);
    ~YoungPair();

    YoungPair(const YoungPair&) = delete;
    YoungPair& operator=(const YoungPair&) = delete;

    const PhiSpec& phi_spec() const { return spec_; }
    BigPhiStrategy strategy() const { return strategy_; }
    double quad_tol() const { return quad_tol_; }

    /// Phi(|t|) = integral of phi from 0 to |t|.
    double big_phi(double t) const;

    /// Phi*(|t|) = integral of phi^{-1} from 0 to |t|.
    double big_phi_star(double t) const;

    /// Phi(|t|) by direct adaptive quadrature, bypassing the cache. Kept as
    /// the reference route the cache is tested against.
    double big_phi_uncached(double t) const;

    /// Index estimates over the default window [1e-6, 1e6], cached.
    const IndexEstimate& indices() const;

private:
    struct Ladder;

    const Ladder& phi_ladder() const;
    const Ladder& star_ladder() const;

    PhiSpec spec_;
    BigPhiStrategy strategy_;
    double quad_tol_;

    mutable std::once_flag phi_once_, star_once_, idx_once_;
    mutable std::unique_ptr<const Ladder> phi_cache_;
    mutable std::unique_ptr<const Ladder> star_cache_;
    mutable std::unique_ptr<const IndexEstimate> idx_cache_;
};

/// Phi(t) for t >= 0.
double big_phi_eval(const YoungPair& pair, double t);

/// Phi*(t) for t >= 0.
double big_phi_star_eval(const YoungPair& pair, double t);

/// Young's inequality slack Phi(s) + Phi*(t) - s t (>= 0 up to quadrature
/// error) for s, t >= 0.
double young_gap(const YoungPair& pair, double s, double t);

/// Min/max of t phi(t)/Phi(t) over a log grid on [t_min, t_max], refined by
/// golden-section search around interior extremes and completed by the two
/// tail limits of the local Young exponent (the inf/sup of the ratio live in
/// the closure of its range, and for these families the tails are monotone).
IndexEstimate estimate_indices(const YoungPair& pair, double t_min, double t_max, int n_samples);

/// max over the grid of Phi(2t)/Phi(t).
double delta2_ratio(const YoungPair& pair, std::span<const double> t_grid);

/// True when tau -> Phi(sqrt(tau)) passes a chord-convexity test on the
/// sorted positive grid, with relative slack tol.
bool sqrt_convexity_check(const YoungPair& pair, std::span<const double> tau_grid,
                          double tol = kDefaultTol);

/// Uniform-convexity slack at scalar level:
///   Phi(|x|)/2 + Phi(|y|)/2 - Phi(|x+y|/2) - Phi(|x-y|/2).
double convexity_gap(const YoungPair& pair, double x, double y);

/// Luxemburg norm of discrete data: the k > 0 with
///   sum_i w_i Phi(|v_i|/k) = 1,
/// found by bisection to relative tolerance 1e-10; 0 for the zero function.
double luxemburg_norm(const YoungPair& pair, std::span<const WeightedSample> samples);

} // namespace orlivar
