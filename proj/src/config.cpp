#include "pam/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pam/error.hpp"

namespace pam {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a nonnegative integer, got '" + value + "'");
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> seeds;
    for (const auto& item : split_list(value)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            seeds.push_back(parse_uint(key, item));
            continue;
        }
        const auto lo = parse_uint(key, trim(item.substr(0, colon)));
        const auto hi = parse_uint(key, trim(item.substr(colon + 1)));
        if (hi < lo) throw ConfigError(key, "empty seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    return seeds;
}

std::string format(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

double parse_real(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    const auto caret = v.find('^');
    try {
        std::size_t used = 0;
        if (caret != std::string::npos) {
            const double base = std::stod(v.substr(0, caret), &used);
            if (used != caret) throw std::invalid_argument("base");
            const std::string ex = v.substr(caret + 1);
            const double exponent = std::stod(ex, &used);
            if (used != ex.size()) throw std::invalid_argument("exponent");
            return std::pow(base, exponent);
        }
        const double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (const std::logic_error&) {
        throw ConfigError(key, "expected a real number, got '" + value + "'");
    }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::string ladder, seed_list;
    for (std::size_t k = 0; k < eps_ladder.size(); ++k) ladder += (k ? ", " : "") + format(eps_ladder[k]);
    for (std::size_t k = 0; k < seeds.size(); ++k) seed_list += (k ? ", " : "") + std::to_string(seeds[k]);
    return {
        {"experiment.name", name},
        {"grid.L", format(L)},
        {"grid.n", std::to_string(n)},
        {"noise.seeds", seed_list},
        {"mollifier.eps_ladder", ladder},
        {"solver.kappa", format(solver.kappa)},
        {"solver.a", format(solver.a)},
        {"solver.ell", format(solver.ell)},
        {"solver.T", format(solver.T)},
        {"solver.dt", format(solver.dt)},
        {"solver.picard_tol", format(solver.picard_tol)},
        {"solver.picard_max_iter", std::to_string(solver.picard_max_iter)},
        {"solver.picard_window", std::to_string(solver.picard_window)},
        {"solver.quadrature", solver.quadrature == Quadrature::left_point ? "left_point" : "trapezoid"},
        {"solver.split_substeps", std::to_string(solver.split_substeps)},
        {"fk.walkers", std::to_string(fk_walkers)},
        {"fk.dt", format(fk_dt)},
        {"report.collar", format(collar)},
        {"report.dir", out_dir.string()},
    };
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::map<std::string, std::string> seen;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (seen.count(key)) throw ConfigError(key, "given twice");
        seen[key] = value;

        if (key == "experiment.name") cfg.name = value;
        else if (key == "grid.L") cfg.L = parse_real(key, value);
        else if (key == "grid.n") cfg.n = parse_uint(key, value);
        else if (key == "noise.seeds") cfg.seeds = parse_seeds(key, value);
        else if (key == "mollifier.eps_ladder") {
            cfg.eps_ladder.clear();
            for (const auto& item : split_list(value)) cfg.eps_ladder.push_back(parse_real(key, item));
        }
        else if (key == "solver.kappa") cfg.solver.kappa = parse_real(key, value);
        else if (key == "solver.a") cfg.solver.a = parse_real(key, value);
        else if (key == "solver.ell") cfg.solver.ell = parse_real(key, value);
        else if (key == "solver.T") cfg.solver.T = parse_real(key, value);
        else if (key == "solver.dt") cfg.solver.dt = parse_real(key, value);
        else if (key == "solver.picard_tol") cfg.solver.picard_tol = parse_real(key, value);
        else if (key == "solver.picard_max_iter") cfg.solver.picard_max_iter = static_cast<int>(parse_uint(key, value));
        else if (key == "solver.picard_window") cfg.solver.picard_window = parse_uint(key, value);
        else if (key == "solver.split_substeps") cfg.solver.split_substeps = parse_uint(key, value);
        else if (key == "solver.quadrature") {
            if (value == "left_point") cfg.solver.quadrature = Quadrature::left_point;
            else if (value == "trapezoid") cfg.solver.quadrature = Quadrature::trapezoid;
            else throw ConfigError(key, "expected left_point or trapezoid");
        }
        else if (key == "fk.walkers") cfg.fk_walkers = parse_uint(key, value);
        else if (key == "fk.dt") cfg.fk_dt = parse_real(key, value);
        else if (key == "report.collar") cfg.collar = parse_real(key, value);
        else if (key == "report.dir") cfg.out_dir = value;
        else throw ConfigError(key, "unknown key");
    }

    try {
        (void)cfg.grid();
    } catch (const InvalidArgument& e) {
        throw ConfigError(seen.count("grid.n") ? "grid.n" : "grid.L", e.what());
    }
    const double k = cfg.solver.kappa;
    if (!(k > 0.0 && k < 0.5)) throw ConfigError("solver.kappa", "kappa must lie in (0, 1/2)");
    if (!(cfg.solver.a > 0.0)) throw ConfigError("solver.a", "a must be positive");
    if (!(cfg.solver.a < k / 2.0)) throw ConfigError("solver.a", "a must be < κ/2");
    if (!(cfg.solver.dt > 0.0)) throw ConfigError("solver.dt", "dt must be positive");
    if (!(cfg.solver.T >= cfg.solver.dt)) throw ConfigError("solver.T", "T must be at least dt");
    if (!(cfg.solver.picard_tol > 0.0)) throw ConfigError("solver.picard_tol", "must be positive");
    if (cfg.solver.picard_max_iter < 1) throw ConfigError("solver.picard_max_iter", "must be positive");
    if (cfg.solver.split_substeps < 1) throw ConfigError("solver.split_substeps", "must be positive");
    if (!(cfg.fk_dt > 0.0)) throw ConfigError("fk.dt", "must be positive");
    if (!(cfg.collar >= 0.0 && cfg.collar < cfg.L)) throw ConfigError("report.collar", "must lie in [0, L)");
    for (std::size_t i = 1; i < cfg.eps_ladder.size(); ++i) {
        if (!(cfg.eps_ladder[i] < cfg.eps_ladder[i - 1])) {
            throw ConfigError("mollifier.eps_ladder", "ladder must be strictly decreasing");
        }
    }
    if (!cfg.eps_ladder.empty()) {
        const double h = cfg.grid().spacing();
        const double eps_min = *std::min_element(cfg.eps_ladder.begin(), cfg.eps_ladder.end());
        if (!(eps_min > 0.0)) throw ConfigError("mollifier.eps_ladder", "epsilon must be positive");
        if (eps_min < 2.0 * h) {
            throw ConfigError("mollifier.eps_ladder", "mollifier under-resolved: eps = " + format(eps_min) +
                                                          " < 2h = " + format(2.0 * h));
        }
    }
    cfg.solver.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace pam
