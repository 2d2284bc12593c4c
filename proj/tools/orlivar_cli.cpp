// Command-line driver: reproducible runs of the two-solution pipeline.
//
// Subcommands:
//   indices  estimated Young indices, Delta_2 ratio, sqrt-convexity verdict
//   solve    global minimizer u1 + mountain-pass solution u2 at one lambda
//   sweep    lambda table (min I, c, certificate), optional lambda* bisection
//   verify   randomized invariant suite -> verify.json
//
// Exit codes: 0 certificate achieved, 2 sub-threshold lambda (trivial
// solution only), 3 convergence/geometry failure, 4 config error.

#include "orlivar/checks.hpp"
#include "orlivar/config.hpp"
#include "orlivar/errors.hpp"
#include "orlivar/minimize.hpp"
#include "orlivar/mountain_pass.hpp"
#include "orlivar/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace orlivar;
namespace fs = std::filesystem;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool deterministic = false;
    int verbosity = 1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "Path to the key=value run config")->required();
    sub->add_option("--seed", args.seed, "Override solver.seed from the config");
    sub->add_option("--out", args.out, "Override output_dir from the config");
    sub->add_flag("--deterministic", args.deterministic,
                  "Write wall_time_s as 0 so identical runs are byte-identical");
    sub->add_option("--verbosity", args.verbosity, "0 quiet, 1 progress, 2 per-iteration");
}

RunConfig load(const CommonArgs& args) {
    RunConfig cfg = parse_config_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.out) cfg.output_dir = *args.out;
    return cfg;
}

std::ofstream open_log(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    return std::ofstream(cfg.output_dir + "/run.log");
}

int cmd_indices(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const auto pair = cfg.make_pair();
    const IndexEstimate idx = pair->indices();

    std::vector<double> grid(1000);
    for (int i = 0; i < 1000; ++i)
        grid[i] = std::exp(std::log(1e-6) + (std::log(1e6) - std::log(1e-6)) * i / 999.0);
    const double d2 = delta2_ratio(*pair, grid);

    std::vector<double> tau(2000);
    for (int i = 0; i < 2000; ++i)
        tau[i] = std::exp(std::log(1e-8) + (std::log(1e8) - std::log(1e-8)) * i / 1999.0);
    const bool convex = sqrt_convexity_check(*pair, tau);

    std::cout << "phi       : " << cfg.phi.describe() << "\n"
              << "phi_0     : " << idx.lo << "\n"
              << "phi^0     : " << idx.hi << "\n"
              << "delta2    : " << d2 << " (bound " << std::pow(2.0, idx.hi) << ")\n"
              << "sqrt-cvx  : " << (convex ? "true" : "false") << "\n";

    fs::create_directories(cfg.output_dir);
    nlohmann::json j{{"mode", "indices"},
                     {"phi", cfg.phi.describe()},
                     {"phi0", idx.lo},
                     {"phi0_hi", idx.hi},
                     {"delta2_ratio", d2},
                     {"delta2_bound", std::pow(2.0, idx.hi)},
                     {"sqrt_convex", convex}};
    std::ofstream out(cfg.output_dir + "/report.json");
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_solve(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = load(args);
    auto log = open_log(cfg);
    const Mesh mesh = cfg.build_mesh();
    const auto pair = cfg.make_pair();
    const DirichletLaplacian lap(mesh);

    RunReport rep;
    rep.indices_lo = pair->indices().lo;
    rep.indices_hi = pair->indices().hi;

    SolveOptions opt;
    opt.tol = cfg.solver_tol;
    opt.max_iter = cfg.max_iter;
    opt.log = &log;
    opt.verbosity = args.verbosity;

    const auto finish = [&](int code, const std::string& status) {
        rep.status = status;
        rep.exit_code = code;
        if (!args.deterministic) {
            rep.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        write_report_json(rep, cfg.output_dir + "/report.json");
        std::cout << "status=" << status << " exit=" << code << " lambda=" << rep.lambda
                  << " I(u1)=" << rep.I_u1 << " c=" << rep.J_u2 << "\n";
        return code;
    };

    double lambda = cfg.lambda.value;
    if (cfg.lambda.mode == LambdaSpec::Mode::StarMultiple) {
        const auto prm_t = cfg.make_params(cfg.lambda.lo, pair);
        const double btol = (cfg.lambda.hi - cfg.lambda.lo) / 256.0;
        const auto ls =
            find_lambda_star(lap, prm_t, cfg.lambda.lo, cfg.lambda.hi, btol, cfg.seed, opt);
        rep.lambda_star_est = ls.lambda_hat;
        lambda = cfg.lambda.factor * ls.lambda_hat;
        if (args.verbosity >= 1)
            log << "lambda_star_est=" << ls.lambda_hat << " lambda=" << lambda << "\n";
    }
    rep.lambda = lambda;
    const ProblemParams prm = cfg.make_params(lambda, pair);
    rep.growth_condition_ok = prm.growth_condition_ok;

    const auto ms = minimize_multistart(lap, prm, cfg.seed, opt);
    rep.I_u1 = ms.best.energy;
    rep.residual_u1 = ms.best.residual;
    rep.iterations_u1 = ms.best.iterations;
    rep.norms_u1 = field_norms(ms.best.u, *pair, cfg.p, cfg.q);
    write_field_csv(ms.best.u, cfg.output_dir + "/u1.csv");
    write_mesh_csv(mesh, cfg.output_dir + "/mesh_nodes.csv", cfg.output_dir + "/mesh_elems.csv");
    if (!ms.best.converged) return finish(3, "no_convergence");
    if (rep.I_u1 >= -kEpsNeg) return finish(2, "trivial_only");

    const Truncation tr(ms.best.u);
    MountainPassOptions mopt;
    mopt.n_path = cfg.n_path;
    mopt.tol = cfg.solver_tol;
    mopt.max_iter = cfg.max_iter;
    mopt.seed = cfg.seed;
    mopt.log = &log;
    mopt.verbosity = args.verbosity;
    const auto mp = mountain_pass(lap, tr, prm, mopt);
    write_path_csv(mp.path_params, mp.path_energies, cfg.output_dir + "/path_energies.csv");
    if (mp.status == MpStatus::GeometryFailure) return finish(3, "geometry_failure");
    if (mp.status == MpStatus::NoConvergence) return finish(3, "no_convergence");

    rep.J_u2 = mp.level_c;
    rep.residual_u2 = mp.residual;
    rep.iterations_u2 = mp.iterations;
    rep.ring_rho = mp.ring.rho;
    rep.ring_level = mp.ring.level;
    rep.norms_u2 = field_norms(mp.u2, *pair, cfg.p, cfg.q);
    write_field_csv(mp.u2, cfg.output_dir + "/u2.csv");

    const auto ord = verify_ordering_and_sign(mp.u2, ms.best.u);
    rep.ordering_max_neg = ord.max_negative_part;
    rep.ordering_max_excess = ord.max_excess;
    rep.ordering_pass = ord.pass();
    rep.l2_distance = l2_distance(ms.best.u, mp.u2);

    rep.certificate = rep.I_u1 < -1e-6 && rep.J_u2 > 1e-6 && rep.residual_u1 <= cfg.solver_tol &&
                      rep.residual_u2 <= cfg.solver_tol && rep.ordering_pass &&
                      rep.l2_distance > 1e-4;
    return finish(rep.certificate ? 0 : 3, rep.certificate ? "certificate" : "no_certificate");
}

int cmd_sweep(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    auto log = open_log(cfg);
    const Mesh mesh = cfg.build_mesh();
    const auto pair = cfg.make_pair();
    const DirichletLaplacian lap(mesh);

    SolveOptions opt;
    opt.tol = cfg.solver_tol;
    opt.max_iter = cfg.max_iter;
    opt.log = &log;
    opt.verbosity = args.verbosity;

    const int count = std::max(cfg.lambda.count, 2);
    std::vector<SweepRow> rows;
    for (int k = 0; k < count; ++k) {
        SweepRow row;
        row.lambda = cfg.lambda.lo + (cfg.lambda.hi - cfg.lambda.lo) * k / (count - 1);
        const ProblemParams prm = cfg.make_params(row.lambda, pair);
        const auto ms = minimize_multistart(lap, prm, cfg.seed, opt);
        row.min_I = ms.best.energy;
        if (ms.best.converged && row.min_I < -kEpsNeg) {
            const Truncation tr(ms.best.u);
            MountainPassOptions mopt;
            mopt.n_path = cfg.n_path;
            mopt.tol = cfg.solver_tol;
            mopt.max_iter = cfg.max_iter;
            mopt.seed = cfg.seed;
            mopt.log = &log;
            mopt.verbosity = args.verbosity;
            const auto mp = mountain_pass(lap, tr, prm, mopt);
            if (mp.status == MpStatus::Converged) {
                row.c = mp.level_c;
                const auto ord = verify_ordering_and_sign(mp.u2, ms.best.u);
                row.certificate = row.min_I < -1e-6 && row.c > 1e-6 &&
                                  ms.best.residual <= cfg.solver_tol &&
                                  mp.residual <= cfg.solver_tol && ord.pass() &&
                                  l2_distance(ms.best.u, mp.u2) > 1e-4;
            }
        }
        rows.push_back(row);
        std::cout << "lambda=" << row.lambda << " min_I=" << row.min_I << " c=" << row.c
                  << " certificate=" << row.certificate << "\n";
    }
    write_sweep_csv(rows, cfg.output_dir + "/sweep.csv");

    nlohmann::json j{{"mode", "sweep"}, {"rows", rows.size()}};
    if (cfg.lambda.bisect) {
        const auto prm_t = cfg.make_params(cfg.lambda.lo, pair);
        const double btol = (cfg.lambda.hi - cfg.lambda.lo) / 256.0;
        const auto ls =
            find_lambda_star(lap, prm_t, cfg.lambda.lo, cfg.lambda.hi, btol, cfg.seed, opt);
        j["lambda_star_est"] = ls.lambda_hat;
        std::cout << "lambda_star_est=" << ls.lambda_hat << "\n";
    }
    std::ofstream out(cfg.output_dir + "/report.json");
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_verify(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const Mesh mesh = cfg.build_mesh();
    const auto pair = cfg.make_pair();
    const double lambda = cfg.lambda.mode == LambdaSpec::Mode::Fixed ? cfg.lambda.value : 1.0;
    const auto props = run_property_suite(*pair, mesh, cfg.p, cfg.q, lambda, cfg.seed);
    fs::create_directories(cfg.output_dir);
    write_verify_json(props, cfg.output_dir + "/verify.json");
    for (const auto& p : props)
        std::cout << (p.pass ? "[pass] " : "[FAIL] ") << p.name << " worst=" << p.worst
                  << " bound=" << p.bound << " samples=" << p.samples << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-solution variational solver in Orlicz-Sobolev spaces"};
    app.require_subcommand(1);

    CommonArgs a_indices, a_solve, a_sweep, a_verify;
    auto* s_indices = app.add_subcommand("indices", "Young indices and scalar conditions");
    add_common(s_indices, a_indices);
    auto* s_solve = app.add_subcommand("solve", "Find u1 and the mountain-pass u2 at one lambda");
    add_common(s_solve, a_solve);
    auto* s_sweep = app.add_subcommand("sweep", "Lambda sweep table with optional bisection");
    add_common(s_sweep, a_sweep);
    auto* s_verify = app.add_subcommand("verify", "Randomized invariant suite");
    add_common(s_verify, a_verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (s_indices->parsed()) return cmd_indices(a_indices);
        if (s_solve->parsed()) return cmd_solve(a_solve);
        if (s_sweep->parsed()) return cmd_sweep(a_sweep);
        if (s_verify->parsed()) return cmd_verify(a_verify);
    } catch (const orlivar::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const orlivar::BracketInvalid& e) {
        std::cerr << "bracket error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
