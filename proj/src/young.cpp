#include "orlivar/young.hpp"

#include "orlivar/errors.hpp"
#include "orlivar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orlivar {
namespace {

constexpr double kLadderLo = 1e-9;
constexpr double kLadderHi = 1e7;
constexpr double kLadderRatio = 1.06;

double golden_extremize(const std::function<double(double)>& f, double a, double b,
                        bool maximize, int iters = 90) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-13 * (std::abs(a) + std::abs(b) + 1.0); ++i) {
        const bool keep_left = maximize ? (f1 > f2) : (f1 < f2);
        if (keep_left) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return maximize ? std::max(f1, f2) : std::min(f1, f2);
}

} // namespace

// Cumulative quadrature of an integrand over log-spaced knots. For t inside
// the knot range, the value is the cached partial sum plus one Gauss panel;
// past the top knot, panels are extended on the fly with the same spacing.
struct YoungPair::Ladder {
    std::vector<double> knot;
    std::vector<double> cum;
    std::function<double(double)> integrand;
    double log_lo = 0.0;
    double inv_log_ratio = 0.0;

    static std::unique_ptr<const Ladder> build(std::function<double(double)> f) {
        auto lad = std::make_unique<Ladder>();
        lad->integrand = std::move(f);
        lad->log_lo = std::log(kLadderLo);
        lad->inv_log_ratio = 1.0 / std::log(kLadderRatio);
        double t = kLadderLo;
        lad->knot.push_back(t);
        lad->cum.push_back(gauss16(lad->integrand, 0.0, t));
        while (t < kLadderHi) {
            const double next = t * kLadderRatio;
            lad->cum.push_back(lad->cum.back() + gauss16(lad->integrand, t, next));
            lad->knot.push_back(next);
            t = next;
        }
        return lad;
    }

    double eval(double t) const {
        if (t <= 0.0) return 0.0;
        if (t < knot.front()) return gauss16(integrand, 0.0, t);
        if (t <= knot.back()) {
            auto idx = static_cast<std::size_t>((std::log(t) - log_lo) * inv_log_ratio);
            idx = std::min(idx, knot.size() - 1);
            while (idx + 1 < knot.size() && knot[idx + 1] <= t) ++idx;
            while (idx > 0 && knot[idx] > t) --idx;
            return cum[idx] + gauss16(integrand, knot[idx], t);
        }
        // Far tail: extend with the same log-spaced panels.
        double acc = cum.back();
        double lo = knot.back();
        while (lo * kLadderRatio < t) {
            const double next = lo * kLadderRatio;
            acc += gauss16(integrand, lo, next);
            if (!std::isfinite(acc)) return acc;
            lo = next;
        }
        return acc + gauss16(integrand, lo, t);
    }
};

YoungPair::~YoungPair() = default;

YoungPair::YoungPair(PhiSpec spec, double quad_tol)
    : spec_(spec),
      strategy_(spec.has_closed_form_big_phi() ? BigPhiStrategy::ClosedForm
                                               : BigPhiStrategy::AdaptiveQuadrature),
      quad_tol_(quad_tol) {}

const YoungPair::Ladder& YoungPair::phi_ladder() const {
    std::call_once(phi_once_, [this] {
        const PhiSpec spec = spec_;
        phi_cache_ = Ladder::build([spec](double t) { return phi_eval(spec, t); });
    });
    return *phi_cache_;
}

const YoungPair::Ladder& YoungPair::star_ladder() const {
    std::call_once(star_once_, [this] {
        const PhiSpec spec = spec_;
        star_cache_ = Ladder::build([spec](double t) { return phi_inverse(spec, t); });
    });
    return *star_cache_;
}

double YoungPair::big_phi(double t) const {
    const double at = std::abs(t);
    if (at == 0.0) return 0.0;
    if (strategy_ == BigPhiStrategy::ClosedForm) return std::pow(at, spec_.p);
    return phi_ladder().eval(at);
}

double YoungPair::big_phi_uncached(double t) const {
    const double at = std::abs(t);
    if (at == 0.0) return 0.0;
    if (strategy_ == BigPhiStrategy::ClosedForm) return std::pow(at, spec_.p);
    const PhiSpec spec = spec_;
    // Scale the requested absolute tolerance up to what double precision can
    // actually resolve for the magnitude at hand.
    const double rough = std::abs(phi_eval(spec, at)) * at;
    const double tol = std::max(quad_tol_, 1e-15 * rough);
    return adaptive_simpson([spec](double x) { return phi_eval(spec, x); }, 0.0, at, tol);
}

double YoungPair::big_phi_star(double t) const {
    const double at = std::abs(t);
    if (at == 0.0) return 0.0;
    if (strategy_ == BigPhiStrategy::ClosedForm) {
        const double alpha = 1.0 / (spec_.p - 1.0);
        return std::pow(at, alpha + 1.0) / (std::pow(spec_.p, alpha) * (alpha + 1.0));
    }
    return star_ladder().eval(at);
}

const IndexEstimate& YoungPair::indices() const {
    std::call_once(idx_once_, [this] {
        idx_cache_ = std::make_unique<IndexEstimate>(estimate_indices(*this, 1e-6, 1e6, 257));
    });
    return *idx_cache_;
}

double big_phi_eval(const YoungPair& pair, double t) { return pair.big_phi(t); }

double big_phi_star_eval(const YoungPair& pair, double t) { return pair.big_phi_star(t); }

double young_gap(const YoungPair& pair, double s, double t) {
    return pair.big_phi(s) + pair.big_phi_star(t) - s * t;
}

IndexEstimate estimate_indices(const YoungPair& pair, double t_min, double t_max, int n_samples) {
    const auto ratio = [&pair](double log_t) {
        const double t = std::exp(log_t);
        return t * phi_eval(pair.phi_spec(), t) / pair.big_phi(t);
    };

    const double lo = std::log(t_min);
    const double hi = std::log(t_max);
    const int n = std::max(n_samples, 2);
    double min_val = std::numeric_limits<double>::infinity();
    double max_val = -min_val;
    int arg_min = 0, arg_max = 0;
    for (int i = 0; i < n; ++i) {
        const double lt = lo + (hi - lo) * i / (n - 1);
        const double r = ratio(lt);
        if (r < min_val) {
            min_val = r;
            arg_min = i;
        }
        if (r > max_val) {
            max_val = r;
            arg_max = i;
        }
    }
    const double step = (hi - lo) / (n - 1);
    const auto refine = [&](int idx, bool maximize) {
        const double a = std::max(lo, lo + step * (idx - 1));
        const double b = std::min(hi, lo + step * (idx + 1));
        return golden_extremize(ratio, a, b, maximize);
    };
    min_val = std::min(min_val, refine(arg_min, false));
    max_val = std::max(max_val, refine(arg_max, true));

    // The inf/sup live in the closure of the ratio's range; complete the grid
    // extremes with the two tail limits, which equal the limits of the local
    // Young exponent and are evaluable at arbitrary log t.
    const double tail_lo = log_slope(pair.phi_spec(), -1e8);
    const double tail_hi = log_slope(pair.phi_spec(), 1e8);
    min_val = std::min({min_val, tail_lo, tail_hi});
    max_val = std::max({max_val, tail_lo, tail_hi});
    return IndexEstimate{min_val, max_val};
}

double delta2_ratio(const YoungPair& pair, std::span<const double> t_grid) {
    double worst = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0)) continue;
        worst = std::max(worst, pair.big_phi(2.0 * t) / pair.big_phi(t));
    }
    return worst;
}

bool sqrt_convexity_check(const YoungPair& pair, std::span<const double> tau_grid, double tol) {
    if (tau_grid.size() < 3) return true;
    std::vector<double> psi(tau_grid.size());
    for (std::size_t i = 0; i < tau_grid.size(); ++i)
        psi[i] = pair.big_phi(std::sqrt(tau_grid[i]));
    for (std::size_t i = 0; i + 2 < tau_grid.size(); ++i) {
        const double t1 = tau_grid[i], t2 = tau_grid[i + 1], t3 = tau_grid[i + 2];
        if (!(t1 < t2 && t2 < t3)) continue;
        const double chord = psi[i] + (psi[i + 2] - psi[i]) * (t2 - t1) / (t3 - t1);
        const double scale = std::max({1.0, std::abs(psi[i]), std::abs(psi[i + 2])});
        if (psi[i + 1] - chord > tol * scale) return false;
    }
    return true;
}

double convexity_gap(const YoungPair& pair, double x, double y) {
    return 0.5 * pair.big_phi(std::abs(x)) + 0.5 * pair.big_phi(std::abs(y)) -
           pair.big_phi(0.5 * std::abs(x + y)) - pair.big_phi(0.5 * std::abs(x - y));
}

double luxemburg_norm(const YoungPair& pair, std::span<const WeightedSample> samples) {
    double vmax = 0.0;
    for (const auto& s : samples) vmax = std::max(vmax, std::abs(s.value));
    if (vmax == 0.0) return 0.0;

    const auto modular_at = [&](double k) {
        double acc = 0.0;
        for (const auto& s : samples) acc += s.weight * pair.big_phi(std::abs(s.value) / k);
        return acc;
    };

    double k_lo, k_hi;
    double k = vmax;
    if (modular_at(k) > 1.0) {
        do {
            k_lo = k;
            k *= 2.0;
        } while (modular_at(k) > 1.0 && k < 1e300);
        k_hi = k;
    } else {
        do {
            k_hi = k;
            k *= 0.5;
        } while (modular_at(k) <= 1.0 && k > 1e-300);
        k_lo = k;
    }

    for (int it = 0; it < 200 && (k_hi - k_lo) > 1e-10 * k_hi; ++it) {
        const double mid = 0.5 * (k_lo + k_hi);
        if (modular_at(mid) > 1.0)
            k_lo = mid;
        else
            k_hi = mid;
    }
    return 0.5 * (k_lo + k_hi);
}

} // namespace orlivar
