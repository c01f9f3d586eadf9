#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "pam/lattice.hpp"

namespace pam {

// Real-to-complex transform of a field zero-padded to 2n x 2n. Padding to twice
// the box makes products of two spectra exact linear (non-circular)
// convolutions of the box data.
class Spectrum {
public:
    explicit Spectrum(const Field& f);

    const Grid& grid() const { return grid_; }
    std::size_t padded_size() const { return 2 * grid_.size(); }
    std::size_t coefficients() const { return padded_size() * (grid_.size() + 1); }

    std::complex<double>* data() { return data_.get(); }
    const std::complex<double>* data() const { return data_.get(); }

    Spectrum(const Spectrum& other);
    Spectrum& operator=(const Spectrum& other);
    Spectrum(Spectrum&&) noexcept = default;
    Spectrum& operator=(Spectrum&&) noexcept = default;

    // Pointwise product, in place.
    Spectrum& operator*=(const Spectrum& other);

    // Inverse transform scaled by h^2: the convolution of the two factors,
    // evaluated back on the box nodes (origin-centred kernel convention).
    Field convolution_result() const;
    // Inverse transform without shift or h^2: a filtered version of the field.
    Field filtered_result() const;

private:
    struct Free {
        void operator()(std::complex<double>* p) const;
    };
    Field inverse(std::size_t shift, double scale) const;

    Grid grid_;
    std::unique_ptr<std::complex<double>[], Free> data_;
};

// Cached spectrum of a kernel tabulated around the origin node.
class SpectralKernel {
public:
    explicit SpectralKernel(const Field& kernel) : spectrum_(kernel) {}

    const Grid& grid() const { return spectrum_.grid(); }
    const Spectrum& spectrum() const { return spectrum_; }

    // (kernel * f)(x) = sum_y kernel(x - y) f(y) h^2.
    Field apply(const Field& f) const;
    Field apply(const Spectrum& f) const;

private:
    Spectrum spectrum_;
};

// Zero-padded discrete convolution scaled by h^2.
Field convolve(const Field& a, const Field& b);

// e^{t Delta} as the exact Fourier multiplier exp(-|k|^2 t) on the padded grid.
class HeatSemigroup {
public:
    HeatSemigroup(const Grid& grid, double t);

    double time() const { return t_; }
    const Grid& grid() const { return grid_; }
    Field apply(const Field& f) const;

private:
    Grid grid_;
    double t_;
    std::vector<double> row_factor_;
    std::vector<double> col_factor_;
};

Field heat_semigroup(const Field& f, double t);

}  // namespace pam
