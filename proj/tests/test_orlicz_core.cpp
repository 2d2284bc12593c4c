#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orlivar/quadrature.hpp"
#include "orlivar/rng.hpp"
#include "orlivar/young.hpp"

#include <cmath>
#include <vector>

using namespace orlivar;

namespace {

// Closed-form antiderivative of s log(1+s): oracle for the log_power(2,1)
// Young function.
double logpower21_big_phi(double t) {
    return 0.5 * t * t * std::log1p(t) - 0.25 * t * t + 0.5 * t - 0.5 * std::log1p(t);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return g;
}

} // namespace

TEST_CASE("phi_eval closed forms and oddness") {
    const PhiSpec pow2 = PhiSpec::power(2.0);
    CHECK(phi_eval(pow2, 3.0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(phi_eval(pow2, 0.0) == 0.0);

    // log(1+1) * 1^{p-2} * 1 = log 2
    const PhiSpec lp = PhiSpec::log_power(2.0, 1.0);
    CHECK(phi_eval(lp, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-13));

    Rng rng(7);
    for (const PhiSpec spec :
         {PhiSpec::power(2.5), PhiSpec::log_power(2.0, 1.5), PhiSpec::power_over_log(3.0)}) {
        for (int i = 0; i < 200; ++i) {
            const double t = rng.log_uniform(1e-6, 1e6);
            CHECK(phi_eval(spec, -t) == doctest::Approx(-phi_eval(spec, t)).epsilon(1e-14));
        }
        // strictly increasing on a sample
        double prev = phi_eval(spec, 1e-6);
        for (double t : log_grid(1e-5, 1e5, 50)) {
            const double v = phi_eval(spec, t);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("a_eval values and zero limits") {
    CHECK(a_eval(PhiSpec::power(2.0), 5.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a_eval(PhiSpec::power(3.0), 2.0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(a_eval(PhiSpec::log_power(2.0, 1.0), 1.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-13));

    CHECK(a_eval(PhiSpec::power(2.0), 0.0) == 2.0);
    CHECK(a_eval(PhiSpec::power(3.0), 0.0) == 0.0);
    CHECK(std::isinf(a_eval(PhiSpec::power(1.5), 0.0)));
    CHECK(a_eval(PhiSpec::log_power(2.0, 1.5), 0.0) == 0.0);
    CHECK(a_eval(PhiSpec::power_over_log(3.0), 0.0) == 1.0);
    CHECK(a_eval(PhiSpec::power_over_log(4.0), 0.0) == 0.0);
    CHECK(std::isinf(a_eval(PhiSpec::power_over_log(2.5), 0.0)));

    // a(t) t = phi(t)
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.log_uniform(1e-4, 1e4);
        const PhiSpec spec = PhiSpec::power_over_log(3.2);
        CHECK(a_eval(spec, t) * t == doctest::Approx(phi_eval(spec, t)).epsilon(1e-13));
    }
}

TEST_CASE("parameter domains are enforced") {
    CHECK_THROWS_AS(PhiSpec::power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(PhiSpec::power(0.5), std::invalid_argument);
    CHECK_THROWS_AS(PhiSpec::log_power(2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PhiSpec::log_power(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(PhiSpec::power_over_log(2.0), std::invalid_argument);
}

TEST_CASE("big_phi closed form and quadrature") {
    const YoungPair pow2(PhiSpec::power(2.0));
    CHECK(big_phi_eval(pow2, 3.0) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(big_phi_eval(pow2, 0.0) == 0.0);

    // integral of s log(1+s) over [0,1] = 1/4 against the closed-form oracle
    const YoungPair lp(PhiSpec::log_power(2.0, 1.0));
    CHECK(big_phi_eval(lp, 0.0) == 0.0);
    CHECK(big_phi_eval(lp, 1.0) == doctest::Approx(0.25).epsilon(1e-10));
    for (double t : {0.3, 0.9, 2.4, 11.0, 140.0})
        CHECK(big_phi_eval(lp, t) == doctest::Approx(logpower21_big_phi(t)).epsilon(1e-11));

    // cached ladder against direct adaptive quadrature
    const YoungPair pol(PhiSpec::power_over_log(3.0));
    for (double t : {1e-5, 1e-2, 0.7, 3.0, 55.0, 9e3, 5e6})
        CHECK(pol.big_phi(t) == doctest::Approx(pol.big_phi_uncached(t)).epsilon(1e-10));

    // Phi is convex and strictly increasing: second differences nonnegative.
    for (const PhiSpec spec :
         {PhiSpec::power(2.5), PhiSpec::log_power(2.0, 1.5), PhiSpec::power_over_log(3.0)}) {
        const YoungPair pair(spec);
        const auto grid = log_grid(1e-4, 1e4, 200);
        for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
            const double f1 = pair.big_phi(grid[i]);
            const double f2 = pair.big_phi(grid[i + 1]);
            const double f3 = pair.big_phi(grid[i + 2]);
            CHECK(f2 < f3);
            const double chord = f1 + (f3 - f1) * (grid[i + 1] - grid[i]) / (grid[i + 2] - grid[i]);
            CHECK(f2 <= chord * (1.0 + 1e-12) + 1e-14);
        }
    }
}

TEST_CASE("phi_inverse round trips") {
    CHECK(phi_inverse(PhiSpec::power(2.0), 6.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(phi_inverse(PhiSpec::power(2.0), 0.0) == 0.0);

    const PhiSpec pol = PhiSpec::power_over_log(3.0);
    CHECK(phi_inverse(pol, phi_eval(pol, 2.0)) == doctest::Approx(2.0).epsilon(1e-11));

    Rng rng(11);
    for (const PhiSpec spec :
         {PhiSpec::power(2.5), PhiSpec::log_power(2.0, 1.5), PhiSpec::power_over_log(3.0)}) {
        for (int i = 0; i < 300; ++i) {
            double t = rng.log_uniform(1e-3, 1e3);
            if (i % 2) t = -t;
            CHECK(phi_inverse(spec, phi_eval(spec, t)) ==
                  doctest::Approx(t).epsilon(1e-9));
        }
    }
}

TEST_CASE("big_phi_star closed form and Legendre identity") {
    const YoungPair pow2(PhiSpec::power(2.0));
    CHECK(big_phi_star_eval(pow2, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(big_phi_star_eval(pow2, 0.0) == 0.0);
    CHECK(big_phi_star_eval(pow2, 4.0) == doctest::Approx(4.0).epsilon(1e-12));

    // Phi*(t) = t phi^{-1}(t) - Phi(phi^{-1}(t)) for strictly monotone phi.
    for (const PhiSpec spec :
         {PhiSpec::power(2.5), PhiSpec::log_power(2.0, 1.5), PhiSpec::power_over_log(3.0)}) {
        const YoungPair pair(spec);
        for (double t : {1e-3, 0.2, 1.0, 7.0, 300.0, 1e5}) {
            const double s_star = phi_inverse(spec, t);
            const double oracle = t * s_star - pair.big_phi(s_star);
            CHECK(big_phi_star_eval(pair, t) == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("young gap nonnegative, zero at the equality case") {
    const YoungPair pow2(PhiSpec::power(2.0));
    // equality at t = phi(s): s=1, t=2
    CHECK(young_gap(pow2, 1.0, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(young_gap(pow2, 0.0, 0.0) == 0.0);

    // brute-force sup over an s-grid confirms Phi*(0.7) dominates 0.7 s - Phi(s)
    const YoungPair lp(PhiSpec::log_power(2.0, 1.5));
    {
        double sup = 0.0;
        for (double s : log_grid(1e-6, 1e3, 20000))
            sup = std::max(sup, 0.7 * s - lp.big_phi(s));
        const double star = big_phi_star_eval(lp, 0.7);
        CHECK(star >= sup - 1e-9);
        CHECK(star == doctest::Approx(sup).epsilon(1e-5));
        CHECK(young_gap(lp, 1.3, 0.7) >= -1e-10);
    }

    Rng rng(23);
    for (const PhiSpec spec :
         {PhiSpec::power(2.5), PhiSpec::log_power(2.0, 1.5), PhiSpec::power_over_log(3.0)}) {
        const YoungPair pair(spec);
        for (int i = 0; i < 2000; ++i) {
            const double s = rng.log_uniform(1e-3, 1e3);
            const double t = rng.log_uniform(1e-3, 1e3);
            const double rel = std::max(1.0, pair.big_phi(s) + pair.big_phi_star(t));
            CHECK(young_gap(pair, s, t) / rel >= -1e-8);
        }
    }
}

TEST_CASE("index estimates reproduce the closed forms") {
    {
        const YoungPair pair(PhiSpec::power(2.5));
        const auto idx = estimate_indices(pair, 1e-6, 1e6, 257);
        CHECK(idx.lo == doctest::Approx(2.5).epsilon(1e-9));
        CHECK(idx.hi == doctest::Approx(2.5).epsilon(1e-9));
    }
    {
        const YoungPair pair(PhiSpec::log_power(2.0, 1.0));
        const auto idx = estimate_indices(pair, 1e-6, 1e6, 257);
        CHECK(idx.lo == doctest::Approx(2.0).epsilon(1e-3));
        CHECK(idx.hi == doctest::Approx(3.0).epsilon(1e-3));
    }
    {
        const YoungPair pair(PhiSpec::log_power(2.0, 1.5));
        const auto idx = estimate_indices(pair, 1e-6, 1e6, 257);
        CHECK(idx.lo == doctest::Approx(2.0).epsilon(1e-3));
        CHECK(idx.hi == doctest::Approx(3.5).epsilon(1e-3));
    }
    {
        const YoungPair pair(PhiSpec::power_over_log(3.0));
        const auto idx = estimate_indices(pair, 1e-6, 1e6, 257);
        CHECK(idx.lo == doctest::Approx(2.0).epsilon(1e-3));
        CHECK(idx.hi == doctest::Approx(3.0).epsilon(1e-3));
    }
    // 1 < phi_0 <= phi^0 < inf and the sandwich on samples
    Rng rng(5);
    for (const PhiSpec spec :
         {PhiSpec::power(1.7), PhiSpec::log_power(3.0, 2.0), PhiSpec::power_over_log(4.5)}) {
        const YoungPair pair(spec);
        const auto idx = pair.indices();
        CHECK(idx.lo > 1.0);
        CHECK(idx.hi >= idx.lo);
        CHECK(std::isfinite(idx.hi));
        for (int i = 0; i < 500; ++i) {
            const double t = rng.log_uniform(1e-6, 1e6);
            const double r = t * phi_eval(spec, t) / pair.big_phi(t);
            CHECK(r >= idx.lo - 1e-8);
            CHECK(r <= idx.hi + 1e-8);
        }
    }
}

TEST_CASE("delta_2 ratio") {
    const auto grid = log_grid(1e-6, 1e6, 1000);
    {
        const YoungPair pair(PhiSpec::power(2.0));
        CHECK(delta2_ratio(pair, grid) == doctest::Approx(4.0).epsilon(1e-12));
    }
    {
        const YoungPair pair(PhiSpec::power(3.0));
        CHECK(delta2_ratio(pair, grid) == doctest::Approx(8.0).epsilon(1e-12));
    }
    {
        const YoungPair pair(PhiSpec::log_power(2.0, 1.5));
        CHECK(delta2_ratio(pair, grid) <= std::pow(2.0, pair.indices().hi) + 1e-6);
    }
}

TEST_CASE("sqrt convexity verdicts") {
    const auto tau = log_grid(1e-8, 1e8, 3000);
    CHECK(sqrt_convexity_check(YoungPair(PhiSpec::power(2.0)), tau));
    CHECK(sqrt_convexity_check(YoungPair(PhiSpec::power(3.0)), tau));
    CHECK(sqrt_convexity_check(YoungPair(PhiSpec::power_over_log(3.0)), tau));
    CHECK(sqrt_convexity_check(YoungPair(PhiSpec::log_power(2.0, 1.5)), tau));
    // Phi(sqrt(t)) = t^{p/2} is concave for p < 2
    CHECK_FALSE(sqrt_convexity_check(YoungPair(PhiSpec::power(1.5)), tau));
}

TEST_CASE("scalar uniform-convexity gap") {
    const YoungPair pow2(PhiSpec::power(2.0));
    CHECK(convexity_gap(pow2, 2.0, 0.0) == doctest::Approx(0.0).epsilon(1e-13));
    // coincident arguments: 1/2 Phi + 1/2 Phi - Phi - Phi(0) = 0
    for (const PhiSpec spec :
         {PhiSpec::power(2.5), PhiSpec::log_power(2.0, 1.5), PhiSpec::power_over_log(3.0)}) {
        const YoungPair pair(spec);
        CHECK(convexity_gap(pair, 1.7, 1.7) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(convexity_gap(pair, 1.7, -0.4) >= -1e-10);
        Rng rng(41);
        for (int i = 0; i < 2000; ++i) {
            const double x = rng.uniform(-5.0, 5.0);
            const double y = rng.uniform(-5.0, 5.0);
            const double rel = std::max(1.0, pair.big_phi(x) + pair.big_phi(y));
            CHECK(convexity_gap(pair, x, y) / rel >= -1e-8);
        }
    }
}

TEST_CASE("luxemburg norm of weighted samples") {
    const YoungPair pow2(PhiSpec::power(2.0));
    // zero function
    std::vector<WeightedSample> zeros{{0.0, 0.5}, {0.0, 0.5}};
    CHECK(luxemburg_norm(pow2, zeros) == 0.0);

    // u == 2 on a measure-1 domain: int (2/k)^2 = 1 => k = 2
    std::vector<WeightedSample> twos{{2.0, 0.25}, {2.0, 0.25}, {2.0, 0.25}, {2.0, 0.25}};
    CHECK(luxemburg_norm(pow2, twos) == doctest::Approx(2.0).epsilon(1e-9));

    // u == c on measure m with Phi = t^3: k = c m^{1/3}
    const YoungPair pow3(PhiSpec::power(3.0));
    const double c = 1.7, m = 0.6;
    std::vector<WeightedSample> consts{{c, m / 3}, {c, m / 3}, {c, m / 3}};
    CHECK(luxemburg_norm(pow3, consts) == doctest::Approx(c * std::cbrt(m)).epsilon(1e-9));

    // homogeneity and modular normalization for the quadrature families
    Rng rng(77);
    for (const PhiSpec spec : {PhiSpec::log_power(2.0, 1.5), PhiSpec::power_over_log(3.0)}) {
        const YoungPair pair(spec);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<WeightedSample> samples(8);
            for (auto& s : samples) {
                s.value = rng.uniform(-3.0, 3.0);
                s.weight = rng.uniform(0.02, 0.3);
            }
            const double k = luxemburg_norm(pair, samples);
            if (k == 0.0) continue;
            double mod = 0.0;
            for (const auto& s : samples) mod += s.weight * pair.big_phi(std::abs(s.value) / k);
            CHECK(mod == doctest::Approx(1.0).epsilon(1e-8));
            const double cc = rng.log_uniform(0.1, 10.0);
            auto scaled = samples;
            for (auto& s : scaled) s.value *= cc;
            CHECK(luxemburg_norm(pair, scaled) == doctest::Approx(cc * k).epsilon(1e-8));
        }
    }
}

TEST_CASE("adaptive simpson sanity") {
    // smooth integral with known value
    const double v = adaptive_simpson([](double x) { return std::cos(x); }, 0.0, 1.0, 1e-12);
    CHECK(v == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    const double w = gauss16([](double x) { return x * x * x; }, 0.0, 2.0);
    CHECK(w == doctest::Approx(4.0).epsilon(1e-14));
}
