#pragma once

#include "orlivar/assembly.hpp"
#include "orlivar/checks.hpp"

#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

namespace orlivar {

/// Everything a solve run reports; serialized to report.json with fixed key
/// names. In deterministic mode wall_time_s is written as 0 so reruns with
/// the same config and seed are byte-identical.
struct RunReport {
    double lambda = 0.0;
    double lambda_star_est = std::numeric_limits<double>::quiet_NaN();
    double I_u1 = 0.0;
    double J_u2 = 0.0; // = c when the mountain pass converged
    double residual_u1 = 0.0;
    double residual_u2 = 0.0;
    double ring_rho = 0.0;
    double ring_level = 0.0;
    FieldNorms norms_u1;
    FieldNorms norms_u2;
    double ordering_max_neg = 0.0;
    double ordering_max_excess = 0.0;
    bool ordering_pass = false;
    double l2_distance = 0.0;
    double indices_lo = 0.0;
    double indices_hi = 0.0;
    bool growth_condition_ok = false;
    int iterations_u1 = 0;
    int iterations_u2 = 0;
    bool certificate = false;
    std::string status; // certificate | trivial_only | no_convergence | geometry_failure
    int exit_code = 0;
    double wall_time_s = 0.0;
};

nlohmann::json report_to_json(const RunReport& rep);
void write_report_json(const RunReport& rep, const std::string& path);

void write_verify_json(const std::vector<PropertyResult>& props, const std::string& path);

struct SweepRow {
    double lambda = 0.0;
    double min_I = 0.0;
    double c = std::numeric_limits<double>::quiet_NaN();
    bool certificate = false;
};
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

void write_path_csv(const std::vector<double>& params, const std::vector<double>& energies,
                    const std::string& path);

} // namespace orlivar
