// Command-line driver for the lab: sampling, enhancement, solvers, norms and studies.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pam/checks.hpp"
#include "pam/config.hpp"
#include "pam/enhancement.hpp"
#include "pam/error.hpp"
#include "pam/experiments.hpp"
#include "pam/pamf.hpp"
#include "pam/report.hpp"
#include "pam/solver.hpp"
#include "pam/stochastics.hpp"
#include "pam/wavelet.hpp"

namespace fs = std::filesystem;
using namespace pam;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const Options& o) {
    ExperimentConfig cfg = o.config.empty() ? parse_config("") : load_config(o.config);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.seed) cfg.seeds = {*o.seed};
    return cfg;
}

std::string eps_tag(double eps) {
    std::ostringstream os;
    os << "eps_" << eps;
    return os.str();
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg, const std::string& what) {
    fs::create_directories(dir);
    std::ofstream m(dir / "manifest.txt");
    m << "command = " << what << "\ncode_version = " << code_version() << "\n";
    for (const auto& [k, v] : cfg.echo()) m << k << " = " << v << "\n";
}

int sample_noise(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    for (auto seed : cfg.seeds) {
        const fs::path dir = cfg.out_dir / ("seed_" + std::to_string(seed));
        fs::create_directories(dir);
        write_pamf(dir / "xi.pamf", sample_white_noise(grid, seed).field);
    }
    write_manifest(cfg.out_dir, cfg, "sample-noise");
    return 0;
}

int build(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    for (double eps : cfg.eps_ladder) {
        const EnhancementBuilder builder(grid, eps);
        for (auto seed : cfg.seeds) {
            write_enhancement(cfg.out_dir / ("seed_" + std::to_string(seed)) / eps_tag(eps),
                              builder.build(sample_white_noise(grid, seed)));
        }
    }
    write_manifest(cfg.out_dir, cfg, "build-enhancement");
    return 0;
}

int solve(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    const double eps = cfg.eps_ladder.back();
    const EnhancementBuilder builder(grid, eps);
    const Field u0 = gaussian_bump(grid, 0.25);
    Report report;
    report.experiment = "solve";
    report.config_echo = cfg.echo();
    CsvTable& t = report.table("solve", {"sup_direct", "sup_transformed", "relative_gap", "picard_iterations"});
    for (auto seed : cfg.seeds) {
        const Enhancement e = builder.build(sample_white_noise(grid, seed));
        const SpaceTimeField direct = solve_direct(e.xi_eps, e.C_eps, u0, cfg.solver);
        const TransformedSolution tr = solve_transformed(e, u0, cfg.solver);
        const fs::path dir = cfg.out_dir / ("seed_" + std::to_string(seed));
        write_trajectory(dir / "direct", direct, cfg.solver);
        write_trajectory(dir / "transformed", tr.u, cfg.solver);
        const WeightSpec w = WeightSpec::exponential(cfg.solver.ell + cfg.solver.T);
        const double a = weighted_sup_norm(direct.back(), w, cfg.collar);
        const double b = weighted_sup_norm(tr.u.back(), w, cfg.collar);
        const double gap = weighted_sup_norm(direct.back() - tr.u.back(), w, cfg.collar) / a;
        t.add_row(seed, eps, grid, std::vector<double>{a, b, gap, static_cast<double>(tr.iterations)});
    }
    write_report(cfg.out_dir, report);
    return 0;
}

int norm(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    const WaveletBasis basis = WaveletBasis::daubechies(6);
    const WeightSpec w = WeightSpec::polynomial(cfg.solver.a);
    Report report;
    report.experiment = "norm";
    report.config_echo = cfg.echo();
    CsvTable& levels = report.table("levels", {"field", "level", "sup_coeff", "weight_at_argmax"});
    CsvTable& norms = report.table("norms", {"field", "neg_holder_norm", "alpha_hat", "fit_residual"});
    const double alpha = -1.0 - cfg.solver.kappa;
    for (auto seed : cfg.seeds) {
        const NoiseSample xi = sample_white_noise(grid, seed);
        auto record = [&](const std::string& name, double eps, const Field& f) {
            const CoefficientPyramid p = analyze(f, basis, cfg.collar);
            write_pyramid(cfg.out_dir / ("seed_" + std::to_string(seed)) / name, p);
            for (const auto& row : level_report(p, w)) {
                levels.add_row(seed, eps, grid,
                               std::vector<std::string>{name, std::to_string(row.level),
                                                        csv_number(row.sup_coeff), csv_number(row.weight_at_argmax)});
            }
            std::vector<std::string> cells{name, csv_number(neg_holder_norm(p, alpha, w, basis.order)), "NA", "NA"};
            if (p.max_usable_level() >= 3) {
                const RegularityFit fit = regularity_estimate(p, w);
                cells[2] = csv_number(fit.alpha);
                cells[3] = csv_number(fit.residual);
            }
            norms.add_row(seed, eps, grid, cells);
        };
        record("xi", 0.0, xi.field);
        for (double eps : cfg.eps_ladder) record(eps_tag(eps), eps, mollify(xi, MollifierSpec{eps}));
    }
    write_report(cfg.out_dir, report);
    return 0;
}

int print_checks(const std::vector<CheckResult>& checks) {
    bool ok = true;
    for (const auto& c : checks) {
        std::printf("%-34s %-9s measured %.6g in [%.6g, %.6g]  %s\n", c.name.c_str(), status_name(c.status),
                    c.measured, c.lower, c.upper, c.detail.c_str());
        ok = ok && c.passed();
    }
    return ok ? 0 : kExitFailure;
}

int fk_check(const ExperimentConfig& cfg) {
    FeynmanKacParams p;
    p.L = cfg.L;
    p.n = cfg.n;
    p.epsilon = cfg.eps_ladder.back();
    p.seed = cfg.seeds.front();
    p.walkers = cfg.fk_walkers;
    p.dt_walk = cfg.fk_dt;
    const CheckResult r = check_feynman_kac(p);
    Report report;
    report.experiment = "fk-check";
    report.config_echo = cfg.echo();
    CsvTable& t = report.table("fk", {"quantity", "value"});
    for (const auto& [k, v] : r.values) t.add_row(p.seed, p.epsilon, cfg.grid(), std::vector<std::string>{k, csv_number(v)});
    write_report(cfg.out_dir, report);
    return print_checks({r});
}

int converge(const ExperimentConfig& cfg) {
    const Report report = run_convergence_study(cfg);
    write_report(cfg.out_dir, report);
    const CsvTable& rungs = report.tables.at("rungs");
    std::cout << "wrote " << rungs.rows() << " rung rows to " << cfg.out_dir << "\n";
    return 0;
}

int validate(const ExperimentConfig& cfg) {
    const ValidationOutcome out = run_validation(cfg);
    write_report(cfg.out_dir, out.report);
    return print_checks(out.checks);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pamlab: renormalised parabolic Anderson model lab"};
    app.require_subcommand(1);
    Options opts;
    int (*action)(const ExperimentConfig&) = nullptr;

    auto add = [&](const char* name, const char* help, int (*fn)(const ExperimentConfig&)) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "flat key = value configuration file");
        sub->add_option("--out", opts.out, "output directory (overrides report.dir)");
        sub->add_option("--seed", opts.seed, "run a single seed instead of noise.seeds");
        sub->callback([&action, fn] { action = fn; });
    };
    add("sample-noise", "write white-noise samples as PAMF fields", sample_noise);
    add("build-enhancement", "write the enhancement along the epsilon ladder", build);
    add("solve", "run both solvers at the smallest epsilon", solve);
    add("fk-check", "compare solve_direct with Feynman-Kac at the origin", fk_check);
    add("norm", "wavelet pyramids, level tables and regularity fits", norm);
    add("converge", "epsilon-ladder convergence study", converge);
    add("validate", "cross-module property suite", validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }
    try {
        return action(load(opts));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
