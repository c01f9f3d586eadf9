#include "pam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "pam/error.hpp"
#include "pam/pamf.hpp"
#include "pam/parallel.hpp"
#include "pam/rng.hpp"
#include "pam/spectral.hpp"

namespace pam {

void SpaceTimeField::push(double t, Field f) {
    if (!(f.grid() == grid_)) throw GridMismatch("trajectory frame on a different grid");
    if (!times_.empty() && !(t > times_.back())) {
        throw InvalidArgument("trajectory times must be strictly increasing");
    }
    times_.push_back(t);
    frames_.push_back(std::move(f));
}

std::size_t SolveConfig::steps() const {
    return static_cast<std::size_t>(std::llround(T / dt));
}

void SolveConfig::validate() const {
    if (!(kappa > 0.0 && kappa < 0.5)) throw InvalidArgument("kappa must lie in (0, 1/2)");
    if (!(a > 0.0 && a < kappa / 2.0)) throw InvalidArgument("a must be < kappa/2 and positive");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(T >= dt)) throw InvalidArgument("T must be at least dt");
    if (frame_stride == 0 || monitor_stride == 0 || split_substeps == 0) throw InvalidArgument("strides must be positive");
    if (picard_max_iter < 1) throw InvalidArgument("picard_max_iter must be positive");
}

namespace {

bool recorded(std::size_t k, std::size_t steps, std::size_t stride) {
    return k % stride == 0 || k == steps;
}

void require_finite(const Field& f, double t) {
    if (!f.all_finite()) {
        throw NonFiniteError("solution became non-finite at t = " + std::to_string(t), t);
    }
}

Field forcing(const Field& v, const Field& g, const Field& h1, const Field& h2) {
    const Field d1 = centred_difference(v, 0);
    const Field d2 = centred_difference(v, 1);
    Field out(v.grid());
    for (std::size_t p = 0; p < v.grid().nodes(); ++p) {
        out[p] = v[p] * g[p] + d1[p] * h1[p] + d2[p] * h2[p];
    }
    return out;
}

// Recursion w_k = P_dt (w_{k-1} + dt F(v_{k-1})), w_0 = f, which reproduces the
// left-point Duhamel sum with one semigroup call per step. The trapezoid variant
// splits the weight as P_dt (w_{k-1} + dt/2 F_{k-1}) + dt/2 F_k; the dependence on
// the current frame is resolved by the outer fixed-point iteration.
SpaceTimeField picard_sweep(const std::vector<const Field*>& v, const Field& g, const Field& h1,
                            const Field& h2, const Field& f, const HeatSemigroup& step,
                            double t0, double dt, Quadrature rule) {
    SpaceTimeField out(f.grid());
    const double weight = rule == Quadrature::left_point ? dt : 0.5 * dt;
    Field w = f;
    Field previous = forcing(f, g, h1, h2);
    for (std::size_t k = 1; k <= v.size(); ++k) {
        previous *= weight;
        w += previous;
        w = step.apply(w);
        previous = forcing(*v[k - 1], g, h1, h2);
        if (rule == Quadrature::trapezoid) {
            Field tail = previous;
            tail *= weight;
            out.push(t0 + static_cast<double>(k) * dt, w + tail);
            w += tail;
        } else {
            out.push(t0 + static_cast<double>(k) * dt, w);
        }
    }
    return out;
}

double monitored_norm(const SpaceTimeField& v, double ell, double t0, double kappa,
                      const SolveConfig& cfg) {
    double best = 0.0;
    const std::size_t m = v.size();
    for (std::size_t k = 0; k < m; ++k) {
        if ((k + 1) % cfg.monitor_stride != 0 && k + 1 != m) continue;
        const double t = v.time(k) - t0;
        const double r = 1.0 + 2.0 * kappa;
        const double norm = holder_norm_positive(v.frame(k), r, WeightSpec::exponential(ell + t),
                                                 cfg.monitor);
        best = std::max(best, std::pow(t, 1.0 - kappa) * norm);
    }
    return best;
}

SpaceTimeField difference(const SpaceTimeField& a, const SpaceTimeField& b) {
    SpaceTimeField d(a.grid());
    for (std::size_t k = 0; k < a.size(); ++k) d.push(a.time(k), a.frame(k) - b.frame(k));
    return d;
}

}  // namespace

SpaceTimeField solve_direct(const Field& xi_eps, double C, const Field& u0, const SolveConfig& cfg) {
    cfg.validate();
    if (!(xi_eps.grid() == u0.grid())) throw GridMismatch("noise and initial condition grids differ");
    const Grid& grid = u0.grid();
    const std::size_t steps = cfg.steps();
    const double tau = cfg.dt / static_cast<double>(cfg.split_substeps);
    const Field half = map(xi_eps, [&](double x) { return std::exp((x - C) * tau / 2.0); });
    const HeatSemigroup heat(grid, tau);
    SpaceTimeField out(grid);
    Field u = u0;
    for (std::size_t k = 1; k <= steps; ++k) {
        for (std::size_t s = 0; s < cfg.split_substeps; ++s) {
            u *= half;
            u = heat.apply(u);
            u *= half;
        }
        const double t = static_cast<double>(k) * cfg.dt;
        require_finite(u, t);
        if (recorded(k, steps, cfg.frame_stride)) out.push(t, u);
    }
    return out;
}

SpaceTimeField picard_map(const SpaceTimeField& v, const Field& g, const Field& h1,
                          const Field& h2, const Field& f, const SolveConfig& cfg) {
    const Grid& grid = f.grid();
    for (const Field* x : {&g, &h1, &h2}) {
        if (!(x->grid() == grid)) throw GridMismatch("Picard coefficients on different grids");
    }
    if (!(v.grid() == grid)) throw GridMismatch("Picard iterate on a different grid");
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double expect = static_cast<double>(k + 1) * cfg.dt;
        if (std::abs(v.time(k) - expect) > 1e-9 * cfg.dt * static_cast<double>(k + 1)) {
            throw GridMismatch("Picard iterate is not on the mesh t_k = k dt");
        }
    }
    std::vector<const Field*> frames;
    for (std::size_t k = 0; k < v.size(); ++k) frames.push_back(&v.frame(k));
    return picard_sweep(frames, g, h1, h2, f, HeatSemigroup(grid, cfg.dt), 0.0, cfg.dt,
                        cfg.quadrature);
}

TransformedSolution solve_transformed(const Enhancement& enh, const Field& u0,
                                      const SolveConfig& cfg) {
    cfg.validate();
    const Grid& grid = u0.grid();
    if (!(enh.Y.grid() == grid)) throw GridMismatch("enhancement and initial condition grids differ");
    const Field g = enh.Z + enh.F_xi;
    const Field h1 = 2.0 * enh.gradY[0];
    const Field h2 = 2.0 * enh.gradY[1];
    const Field eY = map(enh.Y, [](double y) { return std::exp(y); });
    const Field e_minus_Y = map(enh.Y, [](double y) { return std::exp(-y); });
    Field f = u0 * e_minus_Y;

    const std::size_t steps = cfg.steps();
    const std::size_t window = cfg.picard_window == 0 ? steps : cfg.picard_window;
    const HeatSemigroup heat(grid, cfg.dt);

    TransformedSolution sol{SpaceTimeField(grid), SpaceTimeField(grid), {}, 0};
    std::size_t start = 0;
    double ell = cfg.ell;
    while (start < steps) {
        const std::size_t m = std::min(window, steps - start);
        const double t0 = static_cast<double>(start) * cfg.dt;

        // v^0_t = P_t f
        SpaceTimeField v(grid);
        {
            Field w = f;
            for (std::size_t k = 1; k <= m; ++k) {
                w = heat.apply(w);
                v.push(t0 + static_cast<double>(k) * cfg.dt, w);
            }
        }
        std::vector<double> history;
        bool converged = false;
        for (int it = 0; it < cfg.picard_max_iter; ++it) {
            std::vector<const Field*> frames;
            for (std::size_t k = 0; k < v.size(); ++k) frames.push_back(&v.frame(k));
            SpaceTimeField next = picard_sweep(frames, g, h1, h2, f, heat, t0, cfg.dt, cfg.quadrature);
            for (std::size_t k = 0; k < next.size(); ++k) require_finite(next.frame(k), next.time(k));
            const double denom = monitored_norm(next, ell, t0, cfg.kappa, cfg);
            const double incr = monitored_norm(difference(next, v), ell, t0, cfg.kappa, cfg);
            const double rel = denom > 0.0 ? incr / denom : incr;
            history.push_back(rel);
            ++sol.iterations;
            v = std::move(next);
            if (rel < cfg.picard_tol) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw ConvergenceError("Picard iteration did not reach tolerance in window starting at t = " +
                                       std::to_string(t0),
                                   history);
        }
        sol.residuals.push_back(std::move(history));
        for (std::size_t k = 0; k < v.size(); ++k) {
            const std::size_t global = start + k + 1;
            if (!recorded(global, steps, cfg.frame_stride)) continue;
            sol.u.push(v.time(k), v.frame(k) * eY);
            sol.v.push(v.time(k), v.frame(k));
        }
        f = v.back();
        ell += static_cast<double>(m) * cfg.dt;
        start += m;
    }
    return sol;
}

double interpolate(const Field& f, Point x) {
    const Grid& g = f.grid();
    const double h = g.spacing();
    const double n1 = static_cast<double>(g.size() - 1);
    const double s1 = std::clamp((x.x1 + g.half_width()) / h, 0.0, n1);
    const double s2 = std::clamp((x.x2 + g.half_width()) / h, 0.0, n1);
    const auto i = std::min(static_cast<std::size_t>(s1), g.size() - 2);
    const auto j = std::min(static_cast<std::size_t>(s2), g.size() - 2);
    const double a = s1 - static_cast<double>(i);
    const double b = s2 - static_cast<double>(j);
    return (1 - a) * (1 - b) * f(i, j) + a * (1 - b) * f(i + 1, j) + (1 - a) * b * f(i, j + 1) +
           a * b * f(i + 1, j + 1);
}

FeynmanKacResult feynman_kac(const Field& xi_eps, double C, const Field& u0, double t, Point x,
                             std::size_t walkers, double dt_walk, std::uint64_t seed) {
    if (!(t > 0.0)) throw InvalidArgument("Feynman-Kac time must be positive");
    if (!(dt_walk > 0.0)) throw InvalidArgument("walk step must be positive");
    if (walkers < 2) throw InvalidArgument("need at least two walkers");
    if (!(xi_eps.grid() == u0.grid())) throw GridMismatch("noise and initial condition grids differ");
    const Grid& grid = u0.grid();
    const double L = grid.half_width();
    const double lo = -L + grid.spacing();
    const double hi = L - 2.0 * grid.spacing();
    if (x.x1 < lo || x.x1 > hi || x.x2 < lo || x.x2 > hi) {
        throw InvalidArgument("Feynman-Kac start point must be interior");
    }
    const auto steps = static_cast<std::size_t>(std::llround(t / dt_walk));
    const double dt = t / static_cast<double>(steps);
    const double sigma = std::sqrt(2.0 * dt);
    const Field potential = map(xi_eps, [C](double v) { return v - C; });
    const CounterRng rng{seed};
    constexpr std::size_t kMaxAttempts = 1000;

    std::vector<double> value(walkers);
    std::vector<std::size_t> exits(walkers, 0);
    parallel_for(0, walkers, [&](std::size_t w) {
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt == kMaxAttempts) throw Error("Feynman-Kac walker keeps leaving the box");
            const std::uint64_t stream = w + static_cast<std::uint64_t>(walkers) * attempt;
            Point b = x;
            double integral = 0.0;
            bool left = false;
            for (std::size_t k = 0; k < steps; ++k) {
                integral += interpolate(potential, b) * dt;
                const auto [z1, z2] = rng.normal_pair(stream, k);
                b.x1 += sigma * z1;
                b.x2 += sigma * z2;
                if (b.x1 < lo || b.x1 > hi || b.x2 < lo || b.x2 > hi) {
                    left = true;
                    break;
                }
            }
            if (left) {
                ++exits[w];
                continue;
            }
            value[w] = interpolate(u0, b) * std::exp(integral);
            return;
        }
    });
    double sum = 0.0;
    for (double v : value) sum += v;
    const double n = static_cast<double>(walkers);
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : value) ss += (v - mean) * (v - mean);
    std::size_t total_exits = 0;
    for (auto e : exits) total_exits += e;
    const double fraction = static_cast<double>(total_exits) / (n + static_cast<double>(total_exits));
    const bool warned = fraction > 0.01;
    if (warned) {
        std::cerr << "warning: " << total_exits << " Feynman-Kac paths left the box ("
                  << 100.0 * fraction << "%); enlarge L\n";
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n), total_exits, fraction, warned};
}

double spacetime_norm(const SpaceTimeField& v, double r, double ell, double T, double kappa,
                      const HolderOptions& options, std::size_t frame_stride) {
    if (v.empty()) throw InvalidArgument("spacetime norm of an empty trajectory");
    if (frame_stride == 0) throw InvalidArgument("frame stride must be positive");
    double best = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double t = v.time(k);
        if (!(t > 0.0)) throw InvalidArgument("spacetime norm needs frame times in (0, T]");
        if (t > T * (1.0 + 1e-12)) break;
        if ((k + 1) % frame_stride != 0 && k + 1 != v.size()) continue;
        const double norm = holder_norm_positive(v.frame(k), r, WeightSpec::exponential(ell + t), options);
        best = std::max(best, std::pow(t, 1.0 - kappa) * norm);
    }
    return best;
}

double weight_transfer_bound(double a, double s, double t) {
    if (!(t > s)) throw InvalidArgument("weight transfer needs t > s");
    return std::exp(-a) * std::pow(a / (t - s), a);
}

double weight_transfer_ratio(const Grid& grid, double a, double ell, double s, double t) {
    const WeightSpec p = WeightSpec::polynomial(a);
    const WeightSpec es = WeightSpec::exponential(ell + s);
    const WeightSpec et = WeightSpec::exponential(ell + t);
    double best = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const Point x = grid.node(i, j);
            best = std::max(best, p(x) * es(x) / et(x));
        }
    }
    return best;
}

void write_trajectory(const std::filesystem::path& dir, const SpaceTimeField& v,
                      const SolveConfig& cfg) {
    std::filesystem::create_directories(dir);
    std::ofstream m(dir / "manifest.txt");
    m.precision(17);
    m << "frames = " << v.size() << "\n"
      << "T = " << cfg.T << "\n"
      << "dt = " << cfg.dt << "\n"
      << "kappa = " << cfg.kappa << "\n"
      << "a = " << cfg.a << "\n"
      << "ell = " << cfg.ell << "\n"
      << "picard_tol = " << cfg.picard_tol << "\n"
      << "picard_max_iter = " << cfg.picard_max_iter << "\n"
      << "frame_stride = " << cfg.frame_stride << "\n"
      << "times =";
    for (double t : v.times()) m << " " << t;
    m << "\n";
    for (std::size_t k = 0; k < v.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05zu.pamf", k);
        write_pamf(dir / name, v.frame(k));
    }
    if (!m) throw FormatError("failed writing trajectory manifest");
}

}  // namespace pam
