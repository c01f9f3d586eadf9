#include "pam/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pam/enhancement.hpp"
#include "pam/error.hpp"
#include "pam/stochastics.hpp"

namespace pam {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double sup_abs(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s = std::max(s, std::abs(v));
    return s;
}

struct Rung {
    bool ok = false;
    std::string error;
    double C = 0.0;
    int iterations = 0;
    double sup_renormalised = 0.0;
    double sup_unrenormalised = 0.0;
    double transform_gap = 0.0;
    double direct_seconds = 0.0;
    double transformed_seconds = 0.0;
    std::optional<Field> u;
    std::optional<SpaceTimeField> v;
};

Rung run_rung(const NoiseSample& xi, double eps, const ExperimentConfig& cfg) {
    Rung r;
    try {
        const EnhancementBuilder builder(xi.field.grid(), eps);
        const Enhancement e = builder.build(xi);
        r.C = e.C_eps;
        const Field u0 = gaussian_bump(xi.field.grid(), 0.25);
        SolveConfig sc = cfg.solver;
        sc.frame_stride = sc.monitor_stride;

        auto start = Clock::now();
        const SpaceTimeField direct = solve_direct(e.xi_eps, e.C_eps, u0, sc);
        r.direct_seconds = seconds_since(start);
        r.sup_renormalised = sup_abs(direct.back());
        r.sup_unrenormalised = sup_abs(solve_direct(e.xi_eps, 0.0, u0, sc).back());

        start = Clock::now();
        TransformedSolution t = solve_transformed(e, u0, sc);
        r.transformed_seconds = seconds_since(start);
        r.iterations = t.iterations;
        const Field diff = direct.back() - t.u.back();
        r.transform_gap = weighted_sup_norm(diff, WeightSpec::exponential(sc.ell + sc.T), cfg.collar) /
                          weighted_sup_norm(direct.back(), WeightSpec::exponential(sc.ell + sc.T), cfg.collar);
        r.u = direct.back();
        r.v = std::move(t.v);
        r.ok = true;
    } catch (const Error& ex) {
        r.error = ex.what();
    }
    return r;
}

SpaceTimeField difference(const SpaceTimeField& a, const SpaceTimeField& b) {
    SpaceTimeField out(a.grid());
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) out.push(a.time(k), a.frame(k) - b.frame(k));
    return out;
}

std::string csv_cell(const std::string& s) {
    std::string out;
    for (char c : s) out += (c == ',' || c == '\n') ? ';' : c;
    return out;
}

}  // namespace

Report run_convergence_study(const ExperimentConfig& cfg) {
    if (cfg.eps_ladder.size() < 3) {
        throw ConfigError("mollifier.eps_ladder", "convergence study needs at least three rungs");
    }
    const Grid grid = cfg.grid();
    const std::size_t rungs = cfg.eps_ladder.size();
    Report report;
    report.experiment = "convergence";
    report.config_echo = cfg.echo();
    CsvTable& rung_table = report.table(
        "rungs", {"status", "C_eps", "picard_iterations", "sup_renormalised", "sup_unrenormalised",
                  "transform_gap", "direct_seconds", "transformed_seconds", "error"});
    CsvTable& dist_table = report.table(
        "distances", {"status", "epsilon_next", "d_sup", "d_spacetime", "unrenormalised_growth",
                      "renormalised_growth", "growth_floor"});

    // Seeds run in order; each rung is independent and stored in its own slot.
    for (auto seed : cfg.seeds) {
        const NoiseSample xi = sample_white_noise(grid, seed);
        std::vector<Rung> results(rungs);
        for (std::size_t k = 0; k < rungs; ++k) results[k] = run_rung(xi, cfg.eps_ladder[k], cfg);

        for (std::size_t k = 0; k < rungs; ++k) {
            const Rung& r = results[k];
            rung_table.add_row(seed, cfg.eps_ladder[k], grid,
                               std::vector<std::string>{
                                   r.ok ? "ok" : "failed", csv_number(r.C), std::to_string(r.iterations),
                                   csv_number(r.sup_renormalised), csv_number(r.sup_unrenormalised),
                                   csv_number(r.transform_gap), csv_number(r.direct_seconds),
                                   csv_number(r.transformed_seconds), csv_cell(r.error)});
        }
        for (std::size_t k = 0; k + 1 < rungs; ++k) {
            const Rung& a = results[k];
            const Rung& b = results[k + 1];
            std::vector<std::string> row{"failed", csv_number(cfg.eps_ladder[k + 1]), "NA", "NA", "NA", "NA", "NA"};
            if (a.ok && b.ok) {
                const double T = cfg.solver.T;
                const double d_sup =
                    weighted_sup_norm(*a.u - *b.u, WeightSpec::exponential(cfg.solver.ell + T), cfg.collar);
                const double d_st = spacetime_norm(difference(*a.v, *b.v), 1.0 + 2.0 * cfg.solver.kappa,
                                                   cfg.solver.ell, T, cfg.solver.kappa, cfg.solver.monitor);
                row = {"ok",
                       csv_number(cfg.eps_ladder[k + 1]),
                       csv_number(d_sup),
                       csv_number(d_st),
                       csv_number(b.sup_unrenormalised / a.sup_unrenormalised),
                       csv_number(b.sup_renormalised / a.sup_renormalised),
                       csv_number(std::exp((b.C - a.C) * T))};
            }
            dist_table.add_row(seed, cfg.eps_ladder[k], grid, row);
        }
    }
    return report;
}

bool ValidationOutcome::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

ValidationOutcome run_validation(const ExperimentConfig& cfg, const ValidationHooks& hooks) {
    if (cfg.eps_ladder.empty()) throw ConfigError("mollifier.eps_ladder", "validation needs a nonempty ladder");
    if (cfg.seeds.empty()) throw ConfigError("noise.seeds", "validation needs at least one seed");
    const Grid grid = cfg.grid();
    const double eps = cfg.eps_ladder.back();
    const std::uint64_t seed = cfg.seeds.front();

    // Grid-intrinsic checks need h <= 1/32 on the coarser of their two grids to be in the asymptotic regime.
    std::size_t fine_n = cfg.n;
    while (2.0 * cfg.L / static_cast<double>(fine_n / 2) > 1.0 / 32.0) fine_n *= 2;

    ValidationOutcome out;
    std::vector<std::pair<CheckResult, double>> runs;    // result and the epsilon it used

    {
        RenormIdentityParams p;
        p.L = cfg.L;
        p.n = cfg.n;
        p.epsilon = eps;
        p.seed = seed;
        p.T = cfg.solver.T;
        p.dt = cfg.solver.dt;
        runs.emplace_back(check_renormalisation_identity(p), eps);
    }
    {
        // The quadrature grid is refined until h <= eps_min / 8.
        CEpsilonParams p;
        p.L = cfg.L;
        p.n = cfg.n;
        // The log law is asymptotic: rungs above 1/8 feel the cutoff annulus at 1/2 <= |x| <= 1.
        p.ladder.clear();
        for (double e : cfg.eps_ladder) if (e <= 0.125) p.ladder.push_back(e);
        if (p.ladder.size() < 2) p.ladder = {0.125, 0.0625};
        const double finest = *std::min_element(p.ladder.begin(), p.ladder.end());
        while (2.0 * p.L / static_cast<double>(p.n) > finest / 8.0) p.n *= 2;
        runs.emplace_back(check_c_epsilon_divergence(p), finest);
    }
    {
        MonteCarloParams p;
        p.L = cfg.L;
        p.n = cfg.n;
        p.epsilon = eps;
        p.lambda = std::min(0.25, cfg.L / 4.0);
        p.seeds = cfg.seeds;
        auto [a, b] = check_monte_carlo(p);
        runs.emplace_back(a, eps);
        runs.emplace_back(b, eps);
    }
    {
        SmoothingParams p;
        p.L = cfg.L;
        p.n = cfg.n;
        p.epsilon = eps;
        p.seeds = cfg.seeds;
        p.kappa = cfg.solver.kappa;
        p.ell = cfg.solver.ell;
        runs.emplace_back(check_heat_smoothing(p), eps);
    }
    {
        IsometryParams p;
        p.L = cfg.L;
        p.n = cfg.n;
        p.seeds = cfg.seeds;
        p.statistical_floor = true;
        runs.emplace_back(check_wavelet_isometry(p), 0.0);
    }
    {
        YoungParams p;
        p.L = cfg.L;
        p.resolutions = {fine_n / 2, fine_n};
        // The mollifier must resolve on the coarse grid: eps >= 2h there.
        p.epsilon = std::max(eps, 8.0 * cfg.L / static_cast<double>(fine_n));
        p.rough = 4;
        p.smooth = 4;
        p.kappa = cfg.solver.kappa;
        p.a = cfg.solver.a;
        p.ell = cfg.solver.ell;
        runs.emplace_back(check_young_product(p), p.epsilon);
    }
    {
        FeynmanKacParams p;
        p.L = cfg.L;
        p.n = cfg.n;
        p.epsilon = eps;
        p.seed = seed;
        p.walkers = cfg.fk_walkers;
        p.dt_walk = cfg.fk_dt;
        runs.emplace_back(check_feynman_kac(p), eps);
    }
    {
        // Tolerance follows the h^2 spatial error from its value at n = 512.
        TransformParams p;
        p.L = cfg.L;
        p.n = cfg.n;
        p.epsilon = eps;
        p.seed = seed;
        p.T = std::min(cfg.solver.T, 0.1);
        p.dt = cfg.solver.dt;
        const double ratio = 512.0 / static_cast<double>(cfg.n);
        p.tolerance = 1e-3 * std::max(1.0, ratio * ratio);
        p.refine = false;
        runs.emplace_back(check_transform_consistency(p), eps);
    }
    {
        GreenCheckParams p;
        p.L = cfg.L;
        p.resolutions = {fine_n / 2, fine_n};
        p.cutoff = hooks.green_cutoff;
        runs.emplace_back(check_green_kernel(p), 0.0);
    }

    out.report.experiment = "validation";
    out.report.config_echo = cfg.echo();
    CsvTable& checks = out.report.table("checks", {"check", "status", "measured", "lower", "upper", "detail"});
    CsvTable& values = out.report.table("check_values", {"check", "quantity", "value"});
    // Open band edges and unmeasured values are written as NA; numeric cells stay finite.
    auto cell = [](double v) { return std::isfinite(v) ? csv_number(v) : std::string("NA"); };
    for (auto& [r, e] : runs) {
        checks.add_row(seed, e, grid,
                       std::vector<std::string>{r.name, status_name(r.status), cell(r.measured), cell(r.lower),
                                                cell(r.upper), csv_cell(r.detail)});
        for (const auto& [k, v] : r.values) {
            values.add_row(seed, e, grid, std::vector<std::string>{r.name, csv_cell(k), cell(v)});
        }
        out.checks.push_back(std::move(r));
    }
    return out;
}

}  // namespace pam
