#pragma once

#include "orlivar/minimize.hpp"
#include "orlivar/operators.hpp"
#include "orlivar/truncation.hpp"

#include <cstdint>
#include <vector>

namespace orlivar {

enum class MpStatus {
    Converged,
    GeometryFailure, // no positive level detected between 0 and u1
    NoConvergence,
};

struct MountainPassOptions {
    int n_path = 21;
    double tol = 1e-8;
    int max_iter = 3000;
    bool newton_polish = true;
    Exec exec = Exec::Parallel;
    std::uint64_t seed = 0;
    std::ostream* log = nullptr;
    int verbosity = 0;
};

/// Sampled sphere level: min J over random fields of Luxemburg norm rho.
struct RingProbe {
    double rho = 0.0;
    double level = 0.0;
    int samples = 0;
};

struct MountainPassResult {
    explicit MountainPassResult(const Mesh& mesh) : u2(mesh) {}

    MpStatus status = MpStatus::NoConvergence;
    Field u2;
    double level_c = 0.0;  // J(u2)
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> path_params;   // arclength parameters of the final path
    std::vector<double> path_energies; // J along the final path
    RingProbe ring;
};

/// Min-max search for the second critical point: the segment path t*u1 is
/// discretized into n_path fields, the path's argmax is repeatedly moved one
/// line-searched step down the Riesz-lifted gradient of J, the path is
/// re-interpolated to uniform arclength, and a guarded Newton endgame snaps
/// the argmax onto J' = 0 once its residual is small. Stops when the argmax
/// residual is at most tol.
MountainPassResult mountain_pass(const DirichletLaplacian& lap, const Truncation& tr,
                                 const ProblemParams& prm, const MountainPassOptions& opt = {});

/// Probes min J over random directions scaled to ||.|| = rho for a ladder of
/// radii below ||u1||; returns the radius with the best (largest) level.
RingProbe probe_ring(const Truncation& tr, const ProblemParams& prm, std::uint64_t seed,
                     int samples_per_radius = 24, Exec exec = Exec::Parallel);

} // namespace orlivar
