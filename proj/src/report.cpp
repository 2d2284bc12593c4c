#include "orlivar/report.hpp"

#include <fstream>

namespace orlivar {
namespace {

nlohmann::json norms_to_json(const FieldNorms& n) {
    return nlohmann::json{{"luxemburg_grad", n.luxemburg_grad}, {"modular", n.modular},
                          {"lp", n.lp},         {"lq", n.lq},
                          {"lphi0", n.lphi0},   {"l2", n.l2}};
}

void dump_to(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
}

} // namespace

nlohmann::json report_to_json(const RunReport& rep) {
    nlohmann::json j;
    j["lambda"] = rep.lambda;
    j["lambda_star_est"] = rep.lambda_star_est;
    j["I_u1"] = rep.I_u1;
    j["J_u2"] = rep.J_u2;
    j["residual_u1"] = rep.residual_u1;
    j["residual_u2"] = rep.residual_u2;
    j["ring"] = {{"rho", rep.ring_rho}, {"level", rep.ring_level}};
    j["norms_u1"] = norms_to_json(rep.norms_u1);
    j["norms_u2"] = norms_to_json(rep.norms_u2);
    j["ordering"] = {{"max_negative_part", rep.ordering_max_neg},
                     {"max_excess_over_u1", rep.ordering_max_excess},
                     {"pass", rep.ordering_pass}};
    j["l2_distance_u1_u2"] = rep.l2_distance;
    j["indices"] = {{"phi0", rep.indices_lo}, {"phi0_hi", rep.indices_hi}};
    j["growth_condition_ok"] = rep.growth_condition_ok;
    j["iterations"] = {{"u1", rep.iterations_u1}, {"u2", rep.iterations_u2}};
    j["certificate"] = rep.certificate;
    j["status"] = rep.status;
    j["exit_code"] = rep.exit_code;
    j["wall_time_s"] = rep.wall_time_s;
    return j;
}

void write_report_json(const RunReport& rep, const std::string& path) {
    dump_to(report_to_json(rep), path);
}

void write_verify_json(const std::vector<PropertyResult>& props, const std::string& path) {
    nlohmann::json j;
    j["properties"] = nlohmann::json::array();
    bool all = true;
    for (const auto& p : props) {
        j["properties"].push_back({{"name", p.name},
                                   {"worst", p.worst},
                                   {"bound", p.bound},
                                   {"pass", p.pass},
                                   {"samples", p.samples}});
        all = all && p.pass;
    }
    j["all_pass"] = all;
    dump_to(j, path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.precision(17);
    out << "lambda,min_I,c,certificate\n";
    for (const auto& r : rows)
        out << r.lambda << ',' << r.min_I << ',' << r.c << ',' << (r.certificate ? 1 : 0) << '\n';
}

void write_path_csv(const std::vector<double>& params, const std::vector<double>& energies,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.precision(17);
    out << "index,t,J\n";
    for (std::size_t i = 0; i < params.size(); ++i)
        out << i << ',' << params[i] << ',' << energies[i] << '\n';
}

} // namespace orlivar
