#include "pam/wavelet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "pam/error.hpp"
#include "pam/pamf.hpp"
#include "pam/parallel.hpp"

namespace pam {

namespace {

// Daubechies lowpass filters (extremal phase), computed at extended precision
// from the spectral factorisation of the Daubechies polynomial.
const std::vector<double> kDb4 = {
    0.2303778133088965008633,  0.7148465705529156470899,   0.6308807679298589078817,
    -0.02798376941685985421141, -0.1870348117190930840796, 0.03084138183556076362722,
    0.03288301166688519973541, -0.01059740178506903210488};

const std::vector<double> kDb6 = {
    0.1115407433501094636213,    0.4946238903984530856772,   0.7511339080210953506789,
    0.315250351709197629086,     -0.2262646939654398200763,  -0.1297668675672619355623,
    0.09750160558732304910234,   0.02752286553030572862554,  -0.03158203931748602956508,
    0.0005538422011614961392519, 0.004777257510945510639636, -0.001077301085308479564853};

const std::vector<double> kDb8 = {
    0.05441584224310400995501,     0.3128715909142999706592,     0.6756307362972898068078,
    0.5853546836542067127713,      -0.01582910525634930566738,   -0.2840155429615469265162,
    0.0004724845739132827703606,   0.128747426620478458857,      -0.01736930100180754616962,
    -0.04408825393079475150676,    0.01398102791739828164872,    0.008746094047405776716383,
    -0.004870352993451574310422,   -0.0003917403733769470462981, 0.0006754494064505693663695,
    -0.0001174767841247695337306};

int dyadic_depth(const Grid& grid) {
    const double inv_h = 1.0 / grid.spacing();
    const double r = std::round(inv_h);
    if (r < 2.0 || std::abs(inv_h - r) > 1e-12 * r ||
        !std::has_single_bit(static_cast<std::uint64_t>(r))) {
        throw InvalidArgument("wavelet pyramid needs a dyadic spacing h = 2^-J with J >= 1, got h = " +
                              std::to_string(grid.spacing()));
    }
    return std::countr_zero(static_cast<std::uint64_t>(r));
}

struct Step {
    std::vector<double> scaling;
    std::array<std::vector<double>, 3> detail;
};

// One separable analysis step on an s x s periodic array.
Step analysis_step(const std::vector<double>& a, std::size_t s, const WaveletBasis& b) {
    const std::size_t half = s / 2;
    const std::size_t taps = b.taps();
    std::vector<double> lo(s * half), hi(s * half);
    parallel_for(0, s, [&](std::size_t i) {
        const double* row = a.data() + i * s;
        for (std::size_t k = 0; k < half; ++k) {
            double l = 0.0, g = 0.0;
            for (std::size_t m = 0; m < taps; ++m) {
                const double v = row[(2 * k + m) % s];
                l += b.low[m] * v;
                g += b.high[m] * v;
            }
            lo[i * half + k] = l;
            hi[i * half + k] = g;
        }
    });
    Step out;
    out.scaling.assign(half * half, 0.0);
    for (auto& d : out.detail) d.assign(half * half, 0.0);
    parallel_for(0, half, [&](std::size_t k1) {
        for (std::size_t m = 0; m < taps; ++m) {
            const std::size_t i = (2 * k1 + m) % s;
            const double bl = b.low[m];
            const double bh = b.high[m];
            const double* l = lo.data() + i * half;
            const double* g = hi.data() + i * half;
            double* ll = out.scaling.data() + k1 * half;
            double* d0 = out.detail[0].data() + k1 * half;
            double* d1 = out.detail[1].data() + k1 * half;
            double* d2 = out.detail[2].data() + k1 * half;
            for (std::size_t k2 = 0; k2 < half; ++k2) {
                ll[k2] += bl * l[k2];
                d0[k2] += bl * g[k2];
                d1[k2] += bh * l[k2];
                d2[k2] += bh * g[k2];
            }
        }
    });
    return out;
}

// Adjoint of analysis_step (its inverse, by orthonormality).
std::vector<double> synthesis_step(const std::vector<double>& scaling,
                                   const std::array<std::vector<double>, 3>& detail,
                                   std::size_t half, const WaveletBasis& b) {
    const std::size_t s = 2 * half;
    const std::size_t taps = b.taps();
    std::vector<double> lo(s * half, 0.0), hi(s * half, 0.0);
    // Column pass: rows i of lo/hi gather from coarse rows k1 with (i - 2 k1) mod s = m.
    parallel_for(0, s, [&](std::size_t i) {
        double* l = lo.data() + i * half;
        double* g = hi.data() + i * half;
        for (std::size_t m = 0; m < taps; ++m) {
            const std::size_t shifted = (i + s * taps - m) % s;
            if (shifted % 2 != 0) continue;
            const std::size_t k1 = shifted / 2;
            const double bl = b.low[m];
            const double bh = b.high[m];
            const double* ll = scaling.data() + k1 * half;
            const double* d0 = detail[0].data() + k1 * half;
            const double* d1 = detail[1].data() + k1 * half;
            const double* d2 = detail[2].data() + k1 * half;
            for (std::size_t k2 = 0; k2 < half; ++k2) {
                l[k2] += bl * ll[k2] + bh * d1[k2];
                g[k2] += bl * d0[k2] + bh * d2[k2];
            }
        }
    });
    std::vector<double> a(s * s, 0.0);
    parallel_for(0, s, [&](std::size_t i) {
        double* row = a.data() + i * s;
        const double* l = lo.data() + i * half;
        const double* g = hi.data() + i * half;
        for (std::size_t k = 0; k < half; ++k) {
            for (std::size_t m = 0; m < taps; ++m) {
                row[(2 * k + m) % s] += b.low[m] * l[k] + b.high[m] * g[k];
            }
        }
    });
    return a;
}

CoefficientPyramid empty_pyramid(const Grid& grid, const WaveletBasis& basis, double collar) {
    const int depth = dyadic_depth(grid);
    CoefficientPyramid p{grid, basis.name, collar, static_cast<double>(basis.taps() - 1), {}, {}};
    p.levels.resize(depth);
    double offset = 0.0;
    double spacing = grid.spacing();
    std::size_t side = grid.size();
    for (int m = depth - 1; m >= 0; --m) {
        offset += spacing * p.support_width / 2.0;
        spacing *= 2.0;
        side /= 2;
        WaveletLevel& lvl = p.levels[m];
        lvl.level = m;
        lvl.side = side;
        lvl.spacing = spacing;
        lvl.offset = offset;
        for (auto& d : lvl.detail) d.assign(side * side, 0.0);
    }
    p.scaling = p.levels[0];
    for (auto& d : p.scaling.detail) d.clear();
    p.scaling.detail[0].assign(side * side, 0.0);
    return p;
}

}  // namespace

WaveletBasis WaveletBasis::daubechies(int vanishing_moments) {
    const std::vector<double>* low = nullptr;
    int order = 0;
    switch (vanishing_moments) {
        case 4: low = &kDb4; order = 1; break;
        case 6: low = &kDb6; order = 2; break;
        case 8: low = &kDb8; order = 2; break;
        default:
            throw InvalidArgument("Daubechies basis available for 4, 6 or 8 vanishing moments");
    }
    WaveletBasis b{"db" + std::to_string(vanishing_moments), order, *low, {}};
    const std::size_t L = b.low.size();
    b.high.resize(L);
    for (std::size_t m = 0; m < L; ++m) {
        b.high[m] = (m % 2 == 0 ? 1.0 : -1.0) * b.low[L - 1 - m];
    }
    return b;
}

double WaveletLevel::centre(std::size_t k) const {
    return offset + spacing * static_cast<double>(k);
}

bool CoefficientPyramid::usable(const WaveletLevel& lvl, std::size_t k1, std::size_t k2) const {
    const double L = grid.half_width();
    const double reach = 0.5 * support_width * lvl.spacing;
    const double lo = collar + reach;
    const double hi = 2.0 * L - collar - reach;
    const double c1 = lvl.centre(k1);
    const double c2 = lvl.centre(k2);
    return c1 >= lo && c1 <= hi && c2 >= lo && c2 <= hi;
}

double CoefficientPyramid::energy() const {
    double e = 0.0;
    for (const auto& lvl : levels) {
        for (const auto& d : lvl.detail) {
            for (double v : d) e += v * v;
        }
    }
    for (double v : scaling.detail[0]) e += v * v;
    return e;
}

CoefficientPyramid zero_pyramid(const Grid& grid, const WaveletBasis& basis, double collar) {
    return empty_pyramid(grid, basis, collar);
}

CoefficientPyramid analyze(const Field& f, const WaveletBasis& basis, double collar) {
    CoefficientPyramid p = empty_pyramid(f.grid(), basis, collar);
    const double h = f.grid().spacing();
    std::vector<double> a(f.values().begin(), f.values().end());
    for (double& v : a) v *= h;
    std::size_t s = f.grid().size();
    for (int m = p.finest_level(); m >= 0; --m) {
        Step st = analysis_step(a, s, basis);
        p.levels[m].detail = std::move(st.detail);
        a = std::move(st.scaling);
        s /= 2;
    }
    p.scaling.detail[0] = std::move(a);
    return p;
}

Field synthesize(const CoefficientPyramid& p, const WaveletBasis& basis) {
    if (p.basis != basis.name) throw InvalidArgument("pyramid was built with basis " + p.basis);
    std::vector<double> a = p.scaling.detail[0];
    for (const auto& lvl : p.levels) {
        a = synthesis_step(a, lvl.detail, lvl.side, basis);
    }
    const double inv_h = 1.0 / p.grid.spacing();
    for (double& v : a) v *= inv_h;
    return Field(p.grid, std::move(a));
}

namespace {

int resolve_max_level(const CoefficientPyramid& p, int max_level) {
    if (max_level < 0) return p.max_usable_level();
    return std::min(max_level, p.finest_level());
}

struct Argmax {
    double weighted = 0.0;
    double coeff = 0.0;
    double weight = 1.0;
};

Argmax level_sup(const CoefficientPyramid& p, const WaveletLevel& lvl, const WeightSpec& w,
                 std::size_t types) {
    const double L = p.grid.half_width();
    Argmax best;
    std::vector<double> weight_axis(lvl.side);
    for (std::size_t k1 = 0; k1 < lvl.side; ++k1) {
        for (std::size_t k2 = 0; k2 < lvl.side; ++k2) {
            if (!p.usable(lvl, k1, k2)) continue;
            const double wx = w(Point{lvl.centre(k1) - L, lvl.centre(k2) - L});
            for (std::size_t t = 0; t < types; ++t) {
                const double c = std::abs(lvl.detail[t][k1 * lvl.side + k2]);
                if (c / wx > best.weighted) best = {c / wx, c, wx};
            }
        }
    }
    return best;
}

}  // namespace

double coefficient_norm(const CoefficientPyramid& p, double alpha, const WeightSpec& w, int order,
                        int max_level) {
    if (!(std::abs(alpha) < order)) {
        throw InvalidArgument("basis order r = " + std::to_string(order) +
                              " does not resolve |alpha| = " + std::to_string(std::abs(alpha)));
    }
    const int top = resolve_max_level(p, max_level);
    double best = level_sup(p, p.scaling, w, 1).weighted;
    for (int m = 0; m <= top; ++m) {
        const double scale = std::exp2(-m * (1.0 + alpha));
        best = std::max(best, level_sup(p, p.levels[m], w, 3).weighted / scale);
    }
    return best;
}

double neg_holder_norm(const CoefficientPyramid& p, double alpha, const WeightSpec& w, int order,
                       int max_level) {
    if (!(alpha < 0.0)) throw InvalidArgument("negative Hölder norm needs alpha < 0");
    return coefficient_norm(p, alpha, w, order, max_level);
}

std::vector<LevelRow> level_report(const CoefficientPyramid& p, const WeightSpec& w) {
    std::vector<LevelRow> rows;
    for (const auto& lvl : p.levels) {
        const Argmax a = level_sup(p, lvl, w, 3);
        rows.push_back({lvl.level, a.coeff, a.weight, a.weighted});
    }
    return rows;
}

RegularityFit regularity_fit(const std::vector<int>& levels, const std::vector<double>& log2_sup) {
    if (levels.size() != log2_sup.size()) throw InvalidArgument("level/value size mismatch");
    if (levels.size() < 4) {
        throw InvalidArgument("regularity fit needs at least 4 levels, got " +
                              std::to_string(levels.size()));
    }
    const double n = static_cast<double>(levels.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        mx += levels[k];
        my += log2_sup[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        sxx += (levels[k] - mx) * (levels[k] - mx);
        sxy += (levels[k] - mx) * (log2_sup[k] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double r = log2_sup[k] - (my + slope * (levels[k] - mx));
        rss += r * r;
    }
    return {-1.0 - slope, std::sqrt(rss / n), levels.front(), levels.back()};
}

RegularityFit regularity_estimate(const CoefficientPyramid& p, const WeightSpec& w, int min_level,
                                  int max_level) {
    const int top = resolve_max_level(p, max_level);
    std::vector<int> lv;
    std::vector<double> y;
    for (int m = std::max(min_level, 0); m <= top; ++m) {
        const double s = level_sup(p, p.levels[m], w, 3).weighted;
        if (!(s > 0.0)) throw InvalidArgument("level " + std::to_string(m) + " has no usable nonzero coefficient");
        lv.push_back(m);
        y.push_back(std::log2(s));
    }
    return regularity_fit(lv, y);
}

void write_pyramid(const std::filesystem::path& dir, const CoefficientPyramid& p) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt");
    manifest.precision(17);
    manifest << "basis = " << p.basis << "\n"
             << "grid.L = " << p.grid.half_width() << "\n"
             << "grid.n = " << p.grid.size() << "\n"
             << "collar = " << p.collar << "\n"
             << "levels = " << p.levels.size() << "\n";
    std::ofstream small(dir / "small_levels.csv");
    small.precision(17);
    small << "level,type,k1,k2,value\n";
    const double L = p.grid.half_width();
    auto emit = [&](const WaveletLevel& lvl, int type, const std::vector<double>& data,
                    const std::string& stem) {
        if (lvl.side >= 8) {
            const std::string file = stem + ".pamf";
            write_pamf(dir / file, Field(Grid(L, lvl.side), data));
            manifest << stem << " = " << file << " offset " << lvl.offset << "\n";
        } else {
            for (std::size_t k1 = 0; k1 < lvl.side; ++k1) {
                for (std::size_t k2 = 0; k2 < lvl.side; ++k2) {
                    small << (type < 0 ? -1 : lvl.level) << "," << type << "," << k1 << "," << k2
                          << "," << data[k1 * lvl.side + k2] << "\n";
                }
            }
            manifest << stem << " = small_levels.csv offset " << lvl.offset << "\n";
        }
    };
    emit(p.scaling, -1, p.scaling.detail[0], "scaling");
    for (const auto& lvl : p.levels) {
        for (int t = 0; t < 3; ++t) {
            emit(lvl, t, lvl.detail[t], "level" + std::to_string(lvl.level) + "_d" + std::to_string(t));
        }
    }
    if (!manifest || !small) throw FormatError("failed writing pyramid to " + dir.string());
}

}  // namespace pam
