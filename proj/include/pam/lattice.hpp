#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pam {

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;

    double norm() const { return std::hypot(x1, x2); }
};

// Uniform square lattice on [-L, L)^2 with n nodes per axis.
// Node (i, j) sits at (-L + i h, -L + j h); the origin is node (n/2, n/2).
class Grid {
public:
    Grid(double half_width, std::size_t points_per_axis);

    double half_width() const { return half_width_; }
    std::size_t size() const { return n_; }
    std::size_t nodes() const { return n_ * n_; }
    double spacing() const { return h_; }
    std::size_t origin_index() const { return n_ / 2; }

    double coord(std::size_t i) const { return -half_width_ + static_cast<double>(i) * h_; }
    Point node(std::size_t i, std::size_t j) const { return {coord(i), coord(j)}; }
    std::size_t index(std::size_t i, std::size_t j) const { return i * n_ + j; }

    // First and one-past-last node index per axis whose coordinate lies in
    // [-L + collar, L - collar].
    std::size_t interior_begin(double collar) const;
    std::size_t interior_end(double collar) const;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n_ == b.n_ && a.half_width_ == b.half_width_;
    }

private:
    double half_width_;
    std::size_t n_;
    double h_;
};

Grid make_grid(double half_width, std::size_t points_per_axis);

// Real values on the nodes of a grid, row-major in (i, j).
class Field {
public:
    explicit Field(const Grid& grid, double fill = 0.0);
    Field(const Grid& grid, std::vector<double> values);

    static Field from_function(const Grid& grid, const std::function<double(Point)>& fn);

    const Grid& grid() const { return grid_; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * grid_.size() + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * grid_.size() + j]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }

    double at_origin() const {
        const auto o = grid_.origin_index();
        return (*this)(o, o);
    }

    bool all_finite() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double c);
    // Pointwise product.
    Field& operator*=(const Field& other);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, double c) { return a *= c; }
    friend Field operator*(double c, Field a) { return a *= c; }
    friend Field operator*(Field a, const Field& b) { return a *= b; }

private:
    void require_same_grid(const Field& other) const;

    Grid grid_;
    std::vector<double> values_;
};

// Applies fn to every value.
Field map(const Field& f, const std::function<double(double)>& fn);

// Centred difference in direction axis (0 -> x1, 1 -> x2); one-sided on the edge rows.
Field centred_difference(const Field& f, int axis);

// Discrete L2 pairing sum_x f(x) g(x) h^2.
double pairing(const Field& f, const Field& g);

// Point reflection x -> -x on the lattice (node i maps to n - i; node 0 has no
// partner and is set to zero).
Field reflect(const Field& f);

class WeightSpec {
public:
    enum class Kind { polynomial, exponential, product };

    static WeightSpec polynomial(double a) { return WeightSpec(Kind::polynomial, a); }
    static WeightSpec exponential(double ell) { return WeightSpec(Kind::exponential, ell); }
    // p_a e_ell, the weight of a product of a p_a- and an e_ell-weighted field.
    static WeightSpec product(double a, double ell) { return WeightSpec(Kind::product, a, ell); }

    Kind kind() const { return kind_; }
    double parameter() const { return parameter_; }
    double rate() const { return rate_; }

    double operator()(Point x) const;

private:
    WeightSpec(Kind kind, double parameter, double rate = 0.0)
        : kind_(kind), parameter_(parameter), rate_(rate) {}

    Kind kind_;
    double parameter_;
    double rate_;
};

double eval_weight(const WeightSpec& w, Point x);

// How node pairs are enumerated in the Hölder difference quotient.
//
// Grids with n <= exact_limit use every interior base node and every offset in
// the closed unit disc. Finer grids use every base_stride-th base node per
// axis; offsets up to dense_radius nodes are kept, farther offsets are thinned
// to a sub-lattice whose stride doubles with each dyadic ring.
struct PairSampling {
    std::size_t exact_limit = 256;
    std::size_t base_stride = 2;
    int dense_radius = 8;

    static PairSampling exact() { return {static_cast<std::size_t>(-1), 1, 0}; }
};

struct HolderOptions {
    double collar = 1.0;
    PairSampling sampling{};
};

// max over interior nodes of |f(x)| / w(x).
double weighted_sup_norm(const Field& f, const WeightSpec& w, double collar = 1.0);

// Weighted Hölder norm for alpha in (0,1) or (1,2).
double holder_norm_positive(const Field& f, double alpha, const WeightSpec& w,
                            const HolderOptions& options = {});

// Difference part only: sup over pairs 0 < |x - y| <= 1 of |f(x)-f(y)| / (w(x)|x-y|^alpha).
double holder_seminorm(const Field& f, double alpha, const WeightSpec& w,
                       const HolderOptions& options = {});

}  // namespace pam
