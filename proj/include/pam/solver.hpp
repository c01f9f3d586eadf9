#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pam/enhancement.hpp"
#include "pam/lattice.hpp"

namespace pam {

// Frames of a trajectory at increasing times t_1 < ... < t_M.
class SpaceTimeField {
public:
    explicit SpaceTimeField(const Grid& grid) : grid_(grid) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return frames_.size(); }
    bool empty() const { return frames_.empty(); }
    const std::vector<double>& times() const { return times_; }
    double time(std::size_t k) const { return times_[k]; }
    const Field& frame(std::size_t k) const { return frames_[k]; }
    Field& frame(std::size_t k) { return frames_[k]; }
    const Field& back() const { return frames_.back(); }

    // Throws GridMismatch for a foreign grid, InvalidArgument unless t is past the last time.
    void push(double t, Field f);

private:
    Grid grid_;
    std::vector<double> times_;
    std::vector<Field> frames_;
};

enum class Quadrature { left_point, trapezoid };

struct SolveConfig {
    double T = 0.2;
    double dt = 1e-3;
    double kappa = 0.1;
    double a = 0.04;
    double ell = 0.0;
    double picard_tol = 1e-8;
    int picard_max_iter = 50;
    Quadrature quadrature = Quadrature::left_point;
    // Strang steps of length dt / split_substeps per mesh step in solve_direct.
    std::size_t split_substeps = 1;
    // Steps per Picard window; 0 solves the whole interval as one window.
    std::size_t picard_window = 0;
    // Record every frame_stride-th step (the last step is always recorded).
    std::size_t frame_stride = 1;
    // Convergence monitor: spacetime norm over every monitor_stride-th frame of a window.
    std::size_t monitor_stride = 10;
    HolderOptions monitor{1.0, PairSampling{64, 4, 4}};

    std::size_t steps() const;
    // Enforces 0 < a < kappa/2 < 1/4, dt > 0, T >= dt; throws InvalidArgument.
    void validate() const;
};

// Strang splitting for du/dt = Delta u + (xi_eps - C) u on the mesh t_k = k dt.
// Throws NonFiniteError when the solution overflows.
SpaceTimeField solve_direct(const Field& xi_eps, double C, const Field& u0, const SolveConfig& cfg);

// One application of the mild-solution map on the mesh of v (t_k = k dt, k = 1..K):
//   M(v)_{t_k} = sum_{j<k} P_{t_k - s_j} (v_{s_j} g + D_1 v_{s_j} h1 + D_2 v_{s_j} h2) dt + P_{t_k} f,
// with s_j = j dt, left-point quadrature and v_{s_0} = f.
SpaceTimeField picard_map(const SpaceTimeField& v, const Field& g, const Field& h1,
                          const Field& h2, const Field& f, const SolveConfig& cfg);

struct TransformedSolution {
    SpaceTimeField v;
    SpaceTimeField u;
    // Relative spacetime-norm increments, one list per window.
    std::vector<std::vector<double>> residuals;
    int iterations = 0;
};

// Picard iteration for v = u e^{-Y}. Since Delta Y = -xi_eps + F*xi_eps for the kernel
// G = -log|x|/2pi, v solves dv = Delta v + v g + grad v . h with g = Z + F*xi, h_i = 2 D_i Y,
// v_0 = u0 e^{-Y}. Returns v and u = v e^{Y}; throws ConvergenceError with the residual history.
TransformedSolution solve_transformed(const Enhancement& enh, const Field& u0,
                                      const SolveConfig& cfg);

struct FeynmanKacResult {
    double mean;
    double std_error;
    std::size_t exits;
    double exit_fraction;
    bool warned;            // more than 1% of paths left the box
};

// Monte Carlo over paths with generator Delta of u0(B_t) exp(int_0^t (xi_eps - C)(B_s) ds).
FeynmanKacResult feynman_kac(const Field& xi_eps, double C, const Field& u0, double t, Point x,
                             std::size_t walkers, double dt_walk, std::uint64_t seed = 1);

// Bilinear interpolation; points outside the node range clamp to the edge cell.
double interpolate(const Field& f, Point x);

// max over frames with t <= T of t^{1-kappa} ||v_t||_{r, e_{ell+t}}.
double spacetime_norm(const SpaceTimeField& v, double r, double ell, double T, double kappa,
                      const HolderOptions& options = {}, std::size_t frame_stride = 1);

// Upper bound of the weight-transfer ratio: e^{-a} (a / (t - s))^a.
double weight_transfer_bound(double a, double s, double t);
// sup over grid nodes of p_a(x) e_{ell+s}(x) / e_{ell+t}(x).
double weight_transfer_ratio(const Grid& grid, double a, double ell, double s, double t);

void write_trajectory(const std::filesystem::path& dir, const SpaceTimeField& v,
                      const SolveConfig& cfg);

}  // namespace pam
