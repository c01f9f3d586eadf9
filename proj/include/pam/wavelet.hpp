#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "pam/lattice.hpp"

namespace pam {

// Orthonormal compactly supported 1D filter bank; 2D wavelets are tensor products.
struct WaveletBasis {
    std::string name;
    int order;                  // r: admissible for norms with |alpha| < r
    std::vector<double> low;    // scaling filter, sum = sqrt(2)
    std::vector<double> high;   // high[m] = (-1)^m low[L-1-m]

    std::size_t taps() const { return low.size(); }

    // Daubechies family with the given number of vanishing moments (4, 6 or 8).
    static WaveletBasis daubechies(int vanishing_moments);
};

// One dyadic level m: translates of spacing 2^-m, three tensor details
// (0: low x1 / high x2, 1: high x1 / low x2, 2: high x1 / high x2).
struct WaveletLevel {
    int level;
    std::size_t side;           // coefficients per axis = 2L 2^m
    double spacing;             // 2^-m
    double offset;              // centre of translate 0 minus -L
    std::array<std::vector<double>, 3> detail;

    double centre(std::size_t k) const;    // support centre along an axis, box coordinates
};

// Coefficients <f, psi^m_x> for m = 0 .. finest-1 and <f, phi^0_x>, with the
// L2 normalisation psi^m_x = 2^m psi(2^m (. - x)).
struct CoefficientPyramid {
    Grid grid;
    std::string basis;
    double collar;
    double support_width;       // support length of phi in units of its spacing
    std::vector<WaveletLevel> levels;   // index = level
    WaveletLevel scaling;       // level-0 scaling coefficients in detail[0]

    int finest_level() const { return static_cast<int>(levels.size()) - 1; }
    // Highest level whose translates satisfy 2^-m >= 4h.
    int max_usable_level() const { return finest_level() - 1; }
    // Whether the translate (k1, k2) of a level has support inside the collar-reduced box.
    bool usable(const WaveletLevel& lvl, std::size_t k1, std::size_t k2) const;
    double energy() const;
};

// Periodic fast pyramid transform down to unit spacing. Requires h = 2^-J with J >= 1.
CoefficientPyramid analyze(const Field& f, const WaveletBasis& basis, double collar = 1.0);
Field synthesize(const CoefficientPyramid& p, const WaveletBasis& basis);

// Empty pyramid of the right shape (all zeros), for synthesising atoms.
CoefficientPyramid zero_pyramid(const Grid& grid, const WaveletBasis& basis, double collar = 1.0);

// max( sup_{m, type, x} |c| / (w(x) 2^{-m - m alpha}), sup_x |c_scaling| / w(x) ) over
// usable coefficients with m <= max_level (default: max usable). Needs |alpha| < order.
double coefficient_norm(const CoefficientPyramid& p, double alpha, const WeightSpec& w,
                        int order, int max_level = -1);
// Same with alpha < 0 enforced.
double neg_holder_norm(const CoefficientPyramid& p, double alpha, const WeightSpec& w,
                       int order, int max_level = -1);

struct LevelRow {
    int level;
    double sup_coeff;           // |c| at the argmax of |c| / w
    double weight_at_argmax;
    double weighted_sup;        // |c| / w there
};

std::vector<LevelRow> level_report(const CoefficientPyramid& p, const WeightSpec& w);

struct RegularityFit {
    double alpha;
    double residual;            // rms residual of the log2 fit
    int min_level;
    int max_level;
};

// Fits log2 sup |c|/w = -(1 + alpha) m + b over [min_level, max_level]. At least four levels.
RegularityFit regularity_estimate(const CoefficientPyramid& p, const WeightSpec& w,
                                  int min_level = 0, int max_level = -1);
// Same fit on precomputed per-level values (e.g. seed averages of log2 sups).
RegularityFit regularity_fit(const std::vector<int>& levels, const std::vector<double>& log2_sup);

void write_pyramid(const std::filesystem::path& dir, const CoefficientPyramid& p);

}  // namespace pam
