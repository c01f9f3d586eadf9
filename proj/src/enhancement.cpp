#include "pam/enhancement.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "pam/error.hpp"
#include "pam/pamf.hpp"

namespace pam {

namespace {

double energy(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    const double h = f.grid().spacing();
    return s * h * h;
}

}  // namespace

EnhancementBuilder::EnhancementBuilder(const Grid& grid, double epsilon, const Cutoff& cutoff)
    : grid_(grid),
      epsilon_(epsilon),
      green_(build_green(grid, cutoff)),
      mollifier_(tabulate_mollifier(grid, epsilon)),
      g_(green_.G),
      g1_(green_.G1),
      g2_(green_.G2),
      f_(green_.F),
      c_eps_(0.0) {
    c_eps_ = energy(g1_.apply(mollifier_.spectrum())) + energy(g2_.apply(mollifier_.spectrum()));
}

Enhancement EnhancementBuilder::build_from_field(const Field& xi, std::uint64_t seed) const {
    if (!(xi.grid() == grid_)) throw GridMismatch("noise field is not on the builder's grid");
    Field xi_eps = mollifier_.apply(xi);
    const Spectrum s(xi_eps);
    Field Y = g_.apply(s);
    std::array<Field, 2> grad{g1_.apply(s), g2_.apply(s)};
    Field F_xi = f_.apply(s);
    Field Z(grid_);
    for (std::size_t k = 0; k < grid_.nodes(); ++k) {
        Z[k] = grad[0][k] * grad[0][k] + grad[1][k] * grad[1][k] - c_eps_;
    }
    return Enhancement{epsilon_,        std::move(xi_eps), std::move(Y), std::move(grad),
                       std::move(Z),    c_eps_,            std::move(F_xi), seed};
}

Enhancement EnhancementBuilder::build(const NoiseSample& xi) const {
    return build_from_field(xi.field, xi.seed);
}

Enhancement build_enhancement(const NoiseSample& xi, double epsilon) {
    return EnhancementBuilder(xi.field.grid(), epsilon).build(xi);
}

double c_epsilon_quadrature(double epsilon, const Grid& grid) {
    const GreenKernel green = build_green(grid);
    const Spectrum rho(tabulate_mollifier(grid, epsilon));
    double total = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        total += energy(SpectralKernel(green.gradient(axis)).apply(rho));
    }
    return total;
}

double z_covariance(const Field& eta, double epsilon) {
    const Grid& grid = eta.grid();
    if (epsilon != 0.0 && !(epsilon >= 2.0 * grid.spacing())) {
        throw ResolutionError("mollifier under-resolved in Z covariance");
    }
    const GreenKernel green = build_green(grid);
    std::array<Field, 2> k{green.G1, green.G2};
    if (epsilon > 0.0) {
        const SpectralKernel rho(tabulate_mollifier(grid, epsilon));
        for (auto& f : k) f = rho.apply(f);
    }
    // The gradients are odd, so the correlation of K_a with K_b is -(K_a * K_b).
    const std::array<Spectrum, 2> spec{Spectrum(k[0]), Spectrum(k[1])};
    auto cross = [&](int a, int b) {
        Spectrum s(spec[a]);
        s *= spec[b];
        return s.convolution_result();
    };
    const Field c11 = cross(0, 0);
    const Field c12 = cross(0, 1);
    const Field c22 = cross(1, 1);
    Field squares(grid);
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        squares[p] = c11[p] * c11[p] + 2.0 * c12[p] * c12[p] + c22[p] * c22[p];
    }
    return 2.0 * pairing(eta, convolve(squares, eta));
}

double z_covariance_quadrature(double lambda, double epsilon, const Grid& grid) {
    if (!(lambda >= 4.0 * grid.spacing())) {
        throw ResolutionError("test function radius must be at least 4h");
    }
    return z_covariance(tabulate_test_bump(grid, lambda), epsilon);
}

void write_enhancement(const std::filesystem::path& dir, const Enhancement& e) {
    std::filesystem::create_directories(dir);
    write_pamf(dir / "xi_eps.pamf", e.xi_eps);
    write_pamf(dir / "Y.pamf", e.Y);
    write_pamf(dir / "gradY1.pamf", e.gradY[0]);
    write_pamf(dir / "gradY2.pamf", e.gradY[1]);
    write_pamf(dir / "Z.pamf", e.Z);
    write_pamf(dir / "F_xi.pamf", e.F_xi);
    std::ofstream m(dir / "manifest.txt");
    m.precision(17);
    m << "epsilon = " << e.epsilon << "\n"
      << "C_eps = " << e.C_eps << "\n"
      << "seed = " << e.seed << "\n"
      << "grid.L = " << e.xi_eps.grid().half_width() << "\n"
      << "grid.n = " << e.xi_eps.grid().size() << "\n"
      << "mollifier = bump exp(-1/(1-|x|^2))\n"
      << "cutoff = quintic-smoothstep\n";
    if (!m) throw FormatError("failed writing enhancement manifest");
}

Enhancement read_enhancement(const std::filesystem::path& dir) {
    std::ifstream m(dir / "manifest.txt");
    if (!m) throw FormatError("missing manifest in " + dir.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(m, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    for (const char* key : {"epsilon", "C_eps", "seed"}) {
        if (!kv.count(key)) throw FormatError(std::string("manifest lacks ") + key);
    }
    return Enhancement{std::stod(kv["epsilon"]),
                       read_pamf(dir / "xi_eps.pamf"),
                       read_pamf(dir / "Y.pamf"),
                       {read_pamf(dir / "gradY1.pamf"), read_pamf(dir / "gradY2.pamf")},
                       read_pamf(dir / "Z.pamf"),
                       std::stod(kv["C_eps"]),
                       read_pamf(dir / "F_xi.pamf"),
                       std::stoull(kv["seed"])};
}

}  // namespace pam
