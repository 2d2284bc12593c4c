#include "orlivar/config.hpp"

#include "orlivar/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace orlivar {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyMap {
    std::map<std::string, std::pair<std::string, int>> entries; // key -> (value, line)
    std::map<std::string, bool> used;

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    std::string raw(const std::string& key) {
        used[key] = true;
        return entries.at(key).first;
    }

    double number(const std::string& key) {
        const auto& [value, line] = entries.at(key);
        used[key] = true;
        try {
            std::size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                              "' has non-numeric value '" + value + "'");
        }
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const auto& [value, line] = entries.at(key);
        used[key] = true;
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' expects true/false");
    }
};

const char* kKnownKeys[] = {
    "phi.family", "phi.p",        "phi.s",        "p",
    "q",          "lambda",       "lambda.lo",    "lambda.hi",
    "lambda.count", "lambda.bisect", "lambda.factor", "mesh.dim",
    "mesh.n",     "mesh.nx",      "mesh.ny",      "solver.tol",
    "solver.max_iter", "solver.n_path", "solver.seed", "nominal_dim",
    "output_dir",
};

} // namespace

RunConfig parse_config_text(const std::string& text) {
    KeyMap km;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                         [&](const char* k) { return key == k; }) == std::end(kKnownKeys))
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        if (km.entries.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        km.entries[key] = {value, lineno};
    }

    RunConfig cfg;
    if (!km.has("phi.family")) throw ConfigError("config: missing required key 'phi.family'");
    const std::string family = km.raw("phi.family");
    if (!km.has("phi.p")) throw ConfigError("config: missing required key 'phi.p'");
    const double php = km.number("phi.p");
    try {
        if (family == "power") {
            cfg.phi = PhiSpec::power(php);
        } else if (family == "log_power") {
            if (!km.has("phi.s"))
                throw ConfigError("config: log_power family requires key 'phi.s'");
            cfg.phi = PhiSpec::log_power(php, km.number("phi.s"));
        } else if (family == "power_over_log") {
            cfg.phi = PhiSpec::power_over_log(php);
        } else {
            throw ConfigError("config: phi.family must be power | log_power | power_over_log, got '" +
                              family + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (!km.has("p") || !km.has("q"))
        throw ConfigError("config: missing required keys 'p' and 'q'");
    cfg.p = km.number("p");
    cfg.q = km.number("q");

    if (km.has("lambda")) {
        cfg.lambda.mode = LambdaSpec::Mode::Fixed;
        cfg.lambda.value = km.number("lambda");
    } else if (km.has("lambda.lo") && km.has("lambda.hi")) {
        cfg.lambda.mode = LambdaSpec::Mode::StarMultiple;
    } else {
        throw ConfigError("config: need 'lambda' or the bracket 'lambda.lo'/'lambda.hi'");
    }
    cfg.lambda.lo = km.number_or("lambda.lo", cfg.lambda.lo);
    cfg.lambda.hi = km.number_or("lambda.hi", cfg.lambda.hi);
    cfg.lambda.count = static_cast<int>(km.number_or("lambda.count", cfg.lambda.count));
    cfg.lambda.bisect = km.flag("lambda.bisect", cfg.lambda.bisect);
    cfg.lambda.factor = km.number_or("lambda.factor", cfg.lambda.factor);

    cfg.mesh_dim = static_cast<int>(km.number_or("mesh.dim", 1));
    if (cfg.mesh_dim != 1 && cfg.mesh_dim != 2)
        throw ConfigError("config: mesh.dim must be 1 or 2");
    cfg.mesh_n = static_cast<int>(km.number_or("mesh.n", cfg.mesh_n));
    cfg.mesh_nx = static_cast<int>(km.number_or("mesh.nx", cfg.mesh_nx));
    cfg.mesh_ny = static_cast<int>(km.number_or("mesh.ny", cfg.mesh_ny));
    cfg.solver_tol = km.number_or("solver.tol", cfg.solver_tol);
    cfg.max_iter = static_cast<int>(km.number_or("solver.max_iter", cfg.max_iter));
    cfg.n_path = static_cast<int>(km.number_or("solver.n_path", cfg.n_path));
    cfg.seed = static_cast<std::uint64_t>(km.number_or("solver.seed", 42));
    cfg.nominal_dim = km.number_or("nominal_dim", 3.0);
    if (km.has("output_dir")) cfg.output_dir = km.raw("output_dir");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

Mesh RunConfig::build_mesh() const {
    return mesh_dim == 1 ? build_mesh_1d(mesh_n) : build_mesh_rect_2d(mesh_nx, mesh_ny);
}

std::shared_ptr<const YoungPair> RunConfig::make_pair() const {
    return std::make_shared<const YoungPair>(phi);
}

ProblemParams RunConfig::make_params(double lambda_value,
                                     std::shared_ptr<const YoungPair> pair) const {
    if (!pair) pair = make_pair();
    return ProblemParams(lambda_value, p, q, std::move(pair), nominal_dim);
}

} // namespace orlivar
