// Test-side oracles, independent of the library's solution paths.
#pragma once

#include "orlivar/mesh.hpp"
#include "orlivar/rng.hpp"

#include <cmath>
#include <vector>

namespace oracles {

/// Smallest generalized eigenvalue of K x = mu M x for the 1D P1 pair
/// (stiffness, consistent mass) by inverse power iteration with a Thomas
/// solver.
inline double smallest_eig_1d(int n) {
    const double h = 1.0 / n;
    const int m = n - 1;
    std::vector<double> x(m), y(m), c(m), d(m);
    for (int i = 0; i < m; ++i) x[i] = 1.0 + 0.3 * std::sin(7.1 * (i + 1));

    const double kd = 2.0 / h, ko = -1.0 / h;
    const double md = 4.0 * h / 6.0, mo = h / 6.0;
    for (int it = 0; it < 200; ++it) {
        for (int i = 0; i < m; ++i) {
            y[i] = md * x[i];
            if (i > 0) y[i] += mo * x[i - 1];
            if (i + 1 < m) y[i] += mo * x[i + 1];
        }
        c[0] = ko / kd;
        d[0] = y[0] / kd;
        for (int i = 1; i < m; ++i) {
            const double denom = kd - ko * c[i - 1];
            c[i] = ko / denom;
            d[i] = (y[i] - ko * d[i - 1]) / denom;
        }
        x[m - 1] = d[m - 1];
        for (int i = m - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
        double nrm = 0.0;
        for (double v : x) nrm = std::max(nrm, std::abs(v));
        for (double& v : x) v /= nrm;
    }
    double xkx = 0.0, xmx = 0.0;
    for (int i = 0; i < m; ++i) {
        xkx += kd * x[i] * x[i];
        xmx += md * x[i] * x[i];
        if (i + 1 < m) {
            xkx += 2.0 * ko * x[i] * x[i + 1];
            xmx += 2.0 * mo * x[i] * x[i + 1];
        }
    }
    return xkx / xmx;
}

inline orlivar::Field random_interior(const orlivar::Mesh& mesh, orlivar::Rng& rng, double lo,
                                      double hi) {
    orlivar::Field f(mesh);
    for (int i : mesh.interior_ids) f[i] = rng.uniform(lo, hi);
    return f;
}

} // namespace oracles
