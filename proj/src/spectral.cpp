#include "pam/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include "pam/error.hpp"

namespace pam {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

const PlanPair& plans_for(std::size_t padded) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find(padded);
    if (it != cache.end()) return it->second;
    const int N = static_cast<int>(padded);
    const std::size_t real_count = padded * padded;
    const std::size_t complex_count = padded * (padded / 2 + 1);
    auto* real = fftw_alloc_real(real_count);
    auto* cplx = fftw_alloc_complex(complex_count);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_2d(N, N, real, cplx, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_2d(N, N, cplx, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(cplx);
    if (p.forward == nullptr || p.backward == nullptr) throw Error("FFTW planning failed");
    return cache.emplace(padded, p).first->second;
}

struct RealBuffer {
    explicit RealBuffer(std::size_t count) : ptr(fftw_alloc_real(count)) {
        if (ptr == nullptr) throw std::bad_alloc();
    }
    ~RealBuffer() { fftw_free(ptr); }
    RealBuffer(const RealBuffer&) = delete;
    RealBuffer& operator=(const RealBuffer&) = delete;
    double* ptr;
};

std::complex<double>* alloc_complex(std::size_t count) {
    auto* p = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(count));
    if (p == nullptr) throw std::bad_alloc();
    return p;
}

}  // namespace

void Spectrum::Free::operator()(std::complex<double>* p) const {
    fftw_free(reinterpret_cast<fftw_complex*>(p));
}

Spectrum::Spectrum(const Field& f) : grid_(f.grid()), data_(alloc_complex(coefficients())) {
    const std::size_t n = grid_.size();
    const std::size_t N = padded_size();
    RealBuffer in(N * N);
    std::memset(in.ptr, 0, N * N * sizeof(double));
    for (std::size_t i = 0; i < n; ++i) {
        std::memcpy(in.ptr + i * N, f.values().data() + i * n, n * sizeof(double));
    }
    fftw_execute_dft_r2c(plans_for(N).forward, in.ptr,
                         reinterpret_cast<fftw_complex*>(data_.get()));
}

Spectrum::Spectrum(const Spectrum& other)
    : grid_(other.grid_), data_(alloc_complex(other.coefficients())) {
    std::memcpy(data_.get(), other.data_.get(), coefficients() * sizeof(std::complex<double>));
}

Spectrum& Spectrum::operator=(const Spectrum& other) {
    if (this != &other) {
        Spectrum copy(other);
        *this = std::move(copy);
    }
    return *this;
}

Spectrum& Spectrum::operator*=(const Spectrum& other) {
    if (!(grid_ == other.grid_)) throw GridMismatch("spectra of different grids");
    auto* a = reinterpret_cast<double*>(data_.get());
    const auto* b = reinterpret_cast<const double*>(other.data_.get());
    const std::size_t count = coefficients();
    // Written out so that a*b and b*a round identically.
    for (std::size_t k = 0; k < count; ++k) {
        const double ar = a[2 * k], ai = a[2 * k + 1];
        const double br = b[2 * k], bi = b[2 * k + 1];
        a[2 * k] = ar * br - ai * bi;
        a[2 * k + 1] = ar * bi + ai * br;
    }
    return *this;
}

Field Spectrum::inverse(std::size_t shift, double scale) const {
    const std::size_t n = grid_.size();
    const std::size_t N = padded_size();
    auto* work = reinterpret_cast<fftw_complex*>(alloc_complex(coefficients()));
    std::memcpy(work, data_.get(), coefficients() * sizeof(fftw_complex));
    RealBuffer out(N * N);
    fftw_execute_dft_c2r(plans_for(N).backward, work, out.ptr);
    fftw_free(work);
    Field f(grid_);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = out.ptr + (i + shift) * N + shift;
        for (std::size_t j = 0; j < n; ++j) f(i, j) = row[j] * scale;
    }
    return f;
}

Field Spectrum::convolution_result() const {
    const double h = grid_.spacing();
    const double N = static_cast<double>(padded_size());
    return inverse(grid_.size() / 2, h * h / (N * N));
}

Field Spectrum::filtered_result() const {
    const double N = static_cast<double>(padded_size());
    return inverse(0, 1.0 / (N * N));
}

Field SpectralKernel::apply(const Field& f) const { return apply(Spectrum(f)); }

Field SpectralKernel::apply(const Spectrum& f) const {
    Spectrum s(f);
    s *= spectrum_;
    return s.convolution_result();
}

Field convolve(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch("convolution of fields on different grids");
    Spectrum s(a);
    s *= Spectrum(b);
    return s.convolution_result();
}

HeatSemigroup::HeatSemigroup(const Grid& grid, double t) : grid_(grid), t_(t) {
    if (!(t >= 0.0)) throw InvalidArgument("heat semigroup time must be nonnegative");
    const std::size_t N = 2 * grid.size();
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(N) * grid.spacing());
    row_factor_.resize(N);
    for (std::size_t p = 0; p < N; ++p) {
        const double m = p <= N / 2 ? static_cast<double>(p) : static_cast<double>(p) - N;
        row_factor_[p] = std::exp(-(m * dk) * (m * dk) * t);
    }
    col_factor_.assign(row_factor_.begin(), row_factor_.begin() + N / 2 + 1);
}

Field HeatSemigroup::apply(const Field& f) const {
    if (!(f.grid() == grid_)) throw GridMismatch("heat semigroup applied on a different grid");
    if (t_ == 0.0) return f;
    Spectrum s(f);
    const std::size_t N = s.padded_size();
    const std::size_t cols = N / 2 + 1;
    auto* d = s.data();
    for (std::size_t p = 0; p < N; ++p) {
        const double rf = row_factor_[p];
        for (std::size_t q = 0; q < cols; ++q) d[p * cols + q] *= rf * col_factor_[q];
    }
    return s.filtered_result();
}

Field heat_semigroup(const Field& f, double t) { return HeatSemigroup(f.grid(), t).apply(f); }

}  // namespace pam
