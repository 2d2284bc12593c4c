#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "orlivar/config.hpp"
#include "orlivar/errors.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace orlivar;

namespace {

std::string g_cli_path; // set from argv in main

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const int rc = std::system((g_cli_path + " " + args).c_str());
    return WEXITSTATUS(rc);
}

} // namespace

int main(int argc, char** argv) {
    doctest::Context ctx;
    std::vector<const char*> args;
    for (int i = 0; i < argc; ++i) {
        if (i == 1 && argv[i][0] != '-') {
            g_cli_path = argv[i];
            continue;
        }
        args.push_back(argv[i]);
    }
    ctx.applyCommandLine(static_cast<int>(args.size()), args.data());
    return ctx.run();
}

TEST_CASE("config parses a complete solve setup") {
    const std::string text = R"(
# two-solution run
phi.family = power
phi.p = 3
p = 2.5
q = 1.5
lambda = 500          # fixed mode
mesh.dim = 1
mesh.n = 200
solver.tol = 1e-7
solver.max_iter = 4000
solver.n_path = 21
solver.seed = 7
output_dir = out_test
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.phi.family == PhiFamily::Power);
    CHECK(cfg.phi.p == 3.0);
    CHECK(cfg.p == 2.5);
    CHECK(cfg.q == 1.5);
    CHECK(cfg.lambda.mode == LambdaSpec::Mode::Fixed);
    CHECK(cfg.lambda.value == 500.0);
    CHECK(cfg.mesh_n == 200);
    CHECK(cfg.solver_tol == 1e-7);
    CHECK(cfg.seed == 7);
    CHECK(cfg.output_dir == "out_test");

    const Mesh m = cfg.build_mesh();
    CHECK(m.n_elems() == 200);
    const ProblemParams prm = cfg.make_params(cfg.lambda.value);
    CHECK(prm.lambda == 500.0);
}

TEST_CASE("config bracket mode and family variants") {
    const std::string text = R"(
phi.family = log_power
phi.p = 3
phi.s = 1
p = 2.5
q = 1.5
lambda.lo = 50
lambda.hi = 1500
lambda.count = 8
lambda.bisect = true
lambda.factor = 2
mesh.dim = 2
mesh.nx = 6
mesh.ny = 5
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.phi.family == PhiFamily::LogPower);
    CHECK(cfg.phi.s == 1.0);
    CHECK(cfg.lambda.mode == LambdaSpec::Mode::StarMultiple);
    CHECK(cfg.lambda.bisect);
    CHECK(cfg.lambda.count == 8);
    const Mesh m = cfg.build_mesh();
    CHECK(m.dim == 2);
    CHECK(m.n_elems() == 60);
}

TEST_CASE("config diagnostics carry line and key information") {
    const auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            parse_config_text(text);
            FAIL("expected ConfigError for: " << needle);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("phi.family = power\nphi.p = 3\nbogus_key = 1\np=2.5\nq=1.5\nlambda=1",
                 "unknown key 'bogus_key'");
    expect_error("phi.family = power\nphi.p = 3\nbogus_key = 1", "line 3");
    expect_error("phi.family = power\nphi.p = three\np=2.5\nq=1.5\nlambda=1", "non-numeric");
    expect_error("phi.p = 3\np=2.5\nq=1.5\nlambda=1", "phi.family");
    expect_error("phi.family = cubic\nphi.p = 3\np=2.5\nq=1.5\nlambda=1", "cubic");
    expect_error("phi.family = log_power\nphi.p = 3\np=2.5\nq=1.5\nlambda=1", "phi.s");
    expect_error("phi.family = power\nphi.p = 3\np=2.5\nq=1.5", "lambda");
    expect_error("phi.family = power\nphi.p = 3\np=2.5\nq=1.5\nlambda=1\nmesh.dim=3",
                 "mesh.dim");
    expect_error("phi.family = power\nphi.p = 3\nphi.p = 4\np=2.5\nq=1.5\nlambda=1",
                 "duplicate");
    expect_error("phi.family = power\nphi.p = 3\np 2.5", "key = value");
}

TEST_CASE("growth conditions are enforced through params") {
    // q < p < phi_0 must hold; p above phi_0 = 2 is rejected
    const std::string text =
        "phi.family = power\nphi.p = 2\np = 2.5\nq = 1.5\nlambda = 1\nmesh.dim = 1\nmesh.n = 8";
    const RunConfig cfg = parse_config_text(text);
    CHECK_THROWS_AS(cfg.make_params(1.0), ConfigError);

    // the nominal-dimension condition is reported, never enforced
    const RunConfig ok = parse_config_text(
        "phi.family = power\nphi.p = 3\np = 2.5\nq = 1.5\nlambda = 1\nmesh.dim = 1\nmesh.n = 8");
    const ProblemParams prm = ok.make_params(1.0);
    CHECK_FALSE(prm.growth_condition_ok); // phi^0 = 3 = N violates the strict bound
}

TEST_CASE("cli indices subcommand reports the closed forms") {
    REQUIRE(!g_cli_path.empty());
    std::ofstream("cfg_indices.txt") << "phi.family = power_over_log\nphi.p = 3\n"
                                        "p = 1.8\nq = 1.2\nlambda = 1\n"
                                        "mesh.dim = 1\nmesh.n = 8\noutput_dir = out_indices\n";
    const int rc = run_cli("indices --config cfg_indices.txt > /dev/null");
    CHECK(rc == 0);
    const auto j = nlohmann::json::parse(slurp("out_indices/report.json"));
    CHECK(j["mode"] == "indices");
    CHECK(std::abs(j["phi0"].get<double>() - 2.0) < 1e-3);
    CHECK(std::abs(j["phi0_hi"].get<double>() - 3.0) < 1e-3);
    CHECK(j["sqrt_convex"].get<bool>());
}

TEST_CASE("cli solve exit codes: trivial lambda and config errors") {
    REQUIRE(!g_cli_path.empty());
    // sub-threshold lambda: only the trivial solution, exit code 2
    std::ofstream("cfg_trivial.txt") << "phi.family = power\nphi.p = 3\n"
                                        "p = 2.5\nq = 1.5\nlambda = 5\n"
                                        "mesh.dim = 1\nmesh.n = 40\nsolver.tol = 1e-7\n"
                                        "output_dir = out_trivial\n";
    CHECK(run_cli("solve --config cfg_trivial.txt --deterministic > /dev/null") == 2);
    {
        const auto j = nlohmann::json::parse(slurp("out_trivial/report.json"));
        CHECK(j["status"] == "trivial_only");
        CHECK(j["exit_code"] == 2);
        CHECK(j["wall_time_s"] == 0.0);
        CHECK(std::abs(j["I_u1"].get<double>()) <= 1e-6);
    }
    // malformed config: exit code 4
    std::ofstream("cfg_bad.txt") << "phi.family = power\nwhat = 1\n";
    CHECK(run_cli("solve --config cfg_bad.txt 2> /dev/null") == 4);
    CHECK(run_cli("solve --config missing_file.txt 2> /dev/null") == 4);
}

TEST_CASE("cli solve produces the certificate and is byte-deterministic") {
    REQUIRE(!g_cli_path.empty());
    std::ofstream("cfg_solve.txt") << "phi.family = power\nphi.p = 3\n"
                                      "p = 2.5\nq = 1.5\nlambda = 500\n"
                                      "mesh.dim = 1\nmesh.n = 80\nsolver.tol = 1e-7\n"
                                      "solver.max_iter = 4000\nsolver.seed = 42\n"
                                      "output_dir = out_solve\n";
    CHECK(run_cli("solve --config cfg_solve.txt --deterministic > /dev/null") == 0);
    const std::string first = slurp("out_solve/report.json");
    {
        const auto j = nlohmann::json::parse(first);
        CHECK(j["certificate"].get<bool>());
        CHECK(j["I_u1"].get<double>() < -1e-6);
        CHECK(j["J_u2"].get<double>() > 1e-6);
        CHECK(j["ordering"]["pass"].get<bool>());
        CHECK(j["ring"]["level"].get<double>() > 0.0);
    }
    CHECK(slurp("out_solve/u1.csv").rfind("node_id,x,u\n", 0) == 0);
    CHECK(slurp("out_solve/u2.csv").rfind("node_id,x,u\n", 0) == 0);
    CHECK(slurp("out_solve/path_energies.csv").rfind("index,t,J\n", 0) == 0);

    // rerun: byte-identical report
    CHECK(run_cli("solve --config cfg_solve.txt --deterministic > /dev/null") == 0);
    CHECK(slurp("out_solve/report.json") == first);
}

TEST_CASE("cli sweep writes the lambda table") {
    REQUIRE(!g_cli_path.empty());
    std::ofstream("cfg_sweep.txt") << "phi.family = power\nphi.p = 3\n"
                                      "p = 2.5\nq = 1.5\n"
                                      "lambda.lo = 50\nlambda.hi = 800\nlambda.count = 4\n"
                                      "lambda.bisect = true\n"
                                      "mesh.dim = 1\nmesh.n = 40\nsolver.tol = 1e-7\n"
                                      "output_dir = out_sweep\n";
    CHECK(run_cli("sweep --config cfg_sweep.txt --deterministic > /dev/null") == 0);
    const std::string csv = slurp("out_sweep/sweep.csv");
    CHECK(csv.rfind("lambda,min_I,c,certificate\n", 0) == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 5); // header + 4 rows
    const auto j = nlohmann::json::parse(slurp("out_sweep/report.json"));
    CHECK(j["mode"] == "sweep");
    CHECK(j["lambda_star_est"].get<double>() > 50.0);
    CHECK(j["lambda_star_est"].get<double>() < 800.0);
}
