#include "pam/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "pam/error.hpp"
#include "pam/parallel.hpp"

namespace pam {

namespace {

constexpr double kIndexSlack = 1e-9;

}  // namespace

Grid::Grid(double half_width, std::size_t points_per_axis)
    : half_width_(half_width), n_(points_per_axis), h_(0.0) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw InvalidArgument("grid half-width must be positive, got " + std::to_string(half_width));
    }
    if (half_width < 1.0) {
        throw InvalidArgument("grid half-width must be at least 1, got " + std::to_string(half_width));
    }
    if (!std::has_single_bit(points_per_axis)) {
        throw InvalidArgument("points per axis must be a power of two, got " +
                              std::to_string(points_per_axis));
    }
    if (points_per_axis < 8) {
        throw InvalidArgument("points per axis must be at least 8, got " +
                              std::to_string(points_per_axis));
    }
    h_ = 2.0 * half_width_ / static_cast<double>(n_);
}

std::size_t Grid::interior_begin(double collar) const {
    if (collar <= 0.0) return 0;
    const double k = std::ceil(collar / h_ - kIndexSlack);
    return std::min(n_, static_cast<std::size_t>(std::max(0.0, k)));
}

std::size_t Grid::interior_end(double collar) const {
    if (collar <= 0.0) return n_;
    const double last = std::floor((2.0 * half_width_ - collar) / h_ + kIndexSlack);
    if (last < 0.0) return 0;
    return std::min(n_, static_cast<std::size_t>(last) + 1);
}

Grid make_grid(double half_width, std::size_t points_per_axis) {
    return Grid(half_width, points_per_axis);
}

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.nodes(), fill) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.nodes()) {
        throw GridMismatch("field has " + std::to_string(values_.size()) + " values, grid needs " +
                           std::to_string(grid_.nodes()));
    }
}

Field Field::from_function(const Grid& grid, const std::function<double(Point)>& fn) {
    Field f(grid);
    const auto n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) f(i, j) = fn(grid.node(i, j));
    }
    return f;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void Field::require_same_grid(const Field& other) const {
    if (!(grid_ == other.grid_)) throw GridMismatch("fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double c) {
    for (auto& v : values_) v *= c;
    return *this;
}

Field& Field::operator*=(const Field& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= other.values_[k];
    return *this;
}

Field map(const Field& f, const std::function<double(double)>& fn) {
    Field out(f.grid());
    for (std::size_t k = 0; k < f.grid().nodes(); ++k) out[k] = fn(f[k]);
    return out;
}

Field centred_difference(const Field& f, int axis) {
    const auto& g = f.grid();
    const auto n = g.size();
    const double inv2h = 0.5 / g.spacing();
    const double invh = 1.0 / g.spacing();
    Field d(g);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t k = axis == 0 ? i : j;
            auto at = [&](std::size_t kk) { return axis == 0 ? f(kk, j) : f(i, kk); };
            if (k == 0) {
                d(i, j) = (at(1) - at(0)) * invh;
            } else if (k == n - 1) {
                d(i, j) = (at(n - 1) - at(n - 2)) * invh;
            } else {
                d(i, j) = (at(k + 1) - at(k - 1)) * inv2h;
            }
        }
    }
    return d;
}

double pairing(const Field& f, const Field& g) {
    if (!(f.grid() == g.grid())) throw GridMismatch("pairing of fields on different grids");
    double s = 0.0;
    for (std::size_t k = 0; k < f.grid().nodes(); ++k) s += f[k] * g[k];
    const double h = f.grid().spacing();
    return s * h * h;
}

Field reflect(const Field& f) {
    const auto n = f.grid().size();
    Field r(f.grid());
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 1; j < n; ++j) r(i, j) = f(n - i, n - j);
    }
    return r;
}

double WeightSpec::operator()(Point x) const {
    const double r = 1.0 + x.norm();
    switch (kind_) {
        case Kind::polynomial: return std::pow(r, parameter_);
        case Kind::exponential: return std::exp(parameter_ * r);
        case Kind::product: return std::pow(r, parameter_) * std::exp(rate_ * r);
    }
    return 1.0;
}

double eval_weight(const WeightSpec& w, Point x) { return w(x); }

double weighted_sup_norm(const Field& f, const WeightSpec& w, double collar) {
    const auto& g = f.grid();
    const auto b = g.interior_begin(collar);
    const auto e = g.interior_end(collar);
    double best = 0.0;
    for (std::size_t i = b; i < e; ++i) {
        for (std::size_t j = b; j < e; ++j) {
            best = std::max(best, std::abs(f(i, j)) / w(g.node(i, j)));
        }
    }
    return best;
}

namespace {

struct OffsetRow {
    int di;
    std::vector<int> dj;
    std::vector<double> inv_dist_pow;  // |delta|^{-alpha}
};

std::vector<OffsetRow> pair_offsets(const Grid& g, double alpha, bool exact, int dense_radius) {
    const double radius = 1.0 / g.spacing();
    const int r = static_cast<int>(std::floor(radius + kIndexSlack));
    std::vector<OffsetRow> rows;
    for (int di = -r; di <= r; ++di) {
        OffsetRow row{di, {}, {}};
        for (int dj = -r; dj <= r; ++dj) {
            if (di == 0 && dj == 0) continue;
            const double nodes = std::hypot(static_cast<double>(di), static_cast<double>(dj));
            if (nodes > radius + kIndexSlack) continue;
            if (!exact && nodes > dense_radius) {
                const int level = static_cast<int>(std::floor(std::log2(nodes / dense_radius)));
                const int stride = 1 << level;
                if (di % stride != 0 || dj % stride != 0) continue;
            }
            row.dj.push_back(dj);
            row.inv_dist_pow.push_back(std::pow(nodes * g.spacing(), -alpha));
        }
        if (!row.dj.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

double holder_seminorm(const Field& f, double alpha, const WeightSpec& w,
                       const HolderOptions& options) {
    const auto& g = f.grid();
    const auto n = g.size();
    const bool exact = n <= options.sampling.exact_limit;
    const std::size_t stride = exact ? 1 : std::max<std::size_t>(1, options.sampling.base_stride);
    const auto b = g.interior_begin(options.collar);
    const auto e = g.interior_end(options.collar);
    if (e <= b) return 0.0;
    const auto rows = pair_offsets(g, alpha, exact, options.sampling.dense_radius);

    std::vector<std::size_t> base_rows;
    for (std::size_t i = b; i < e; i += stride) base_rows.push_back(i);
    std::vector<double> row_best(base_rows.size(), 0.0);

    const auto lo = static_cast<long>(b);
    const auto hi = static_cast<long>(e);
    parallel_for(0, base_rows.size(), [&](std::size_t r) {
        const long i = static_cast<long>(base_rows[r]);
        double best = 0.0;
        for (std::size_t j0 = b; j0 < e; j0 += stride) {
            const long j = static_cast<long>(j0);
            const double fx = f(base_rows[r], j0);
            const double inv_w = 1.0 / w(g.node(base_rows[r], j0));
            double local = 0.0;
            for (const auto& row : rows) {
                const long yi = i + row.di;
                if (yi < lo || yi >= hi) continue;
                const double* line = &f.values()[static_cast<std::size_t>(yi) * n];
                for (std::size_t k = 0; k < row.dj.size(); ++k) {
                    const long yj = j + row.dj[k];
                    if (yj < lo || yj >= hi) continue;
                    local = std::max(local, std::abs(fx - line[yj]) * row.inv_dist_pow[k]);
                }
            }
            best = std::max(best, local * inv_w);
        }
        row_best[r] = best;
    });
    return *std::max_element(row_best.begin(), row_best.end());
}

double holder_norm_positive(const Field& f, double alpha, const WeightSpec& w,
                            const HolderOptions& options) {
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
        throw InvalidArgument("Hölder exponent must lie in (0,1) or (1,2), got " +
                              std::to_string(alpha));
    }
    const double sup = weighted_sup_norm(f, w, options.collar);
    if (alpha < 1.0) return sup + holder_seminorm(f, alpha, w, options);
    double total = sup;
    for (int axis = 0; axis < 2; ++axis) {
        total += holder_norm_positive(centred_difference(f, axis), alpha - 1.0, w, options);
    }
    return total;
}

}  // namespace pam
