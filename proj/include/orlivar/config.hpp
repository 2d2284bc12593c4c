#pragma once

#include "orlivar/mesh.hpp"
#include "orlivar/problem.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace orlivar {

/// How the run obtains its lambda.
struct LambdaSpec {
    enum class Mode {
        Fixed,       // lambda = value
        StarMultiple // bisect lambda* in [lo, hi], run at factor * lambda_hat
    };
    Mode mode = Mode::Fixed;
    double value = 1.0;
    double lo = 1.0;
    double hi = 100.0;
    int count = 8;       // sweep points
    bool bisect = false; // sweep: also bisect lambda*
    double factor = 2.0;
};

/// Flat key=value run configuration (documented in the README).
struct RunConfig {
    PhiSpec phi = PhiSpec::power(3.0);
    double p = 2.5;
    double q = 1.5;
    LambdaSpec lambda;
    int mesh_dim = 1;
    int mesh_n = 100;
    int mesh_nx = 8;
    int mesh_ny = 8;
    double solver_tol = 1e-8;
    int max_iter = 5000;
    int n_path = 21;
    std::uint64_t seed = 42;
    double nominal_dim = 3.0;
    std::string output_dir = "out";

    Mesh build_mesh() const;
    std::shared_ptr<const YoungPair> make_pair() const;
    /// Builds params around an existing pair (so its caches are shared); a
    /// fresh pair is created when none is given.
    ProblemParams make_params(double lambda_value,
                              std::shared_ptr<const YoungPair> pair = nullptr) const;
};

/// Parses the key=value config text; throws ConfigError with line/key
/// diagnostics on malformed input or unknown keys.
RunConfig parse_config_text(const std::string& text);

/// Reads and parses a config file.
RunConfig parse_config_file(const std::string& path);

} // namespace orlivar
