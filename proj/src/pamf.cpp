#include "pam/pamf.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "pam/error.hpp"

namespace pam {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'A', 'M', 'F'};

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    auto bits = std::bit_cast<U>(value);
    std::array<unsigned char, sizeof(T)> bytes{};
    for (std::size_t k = 0; k < sizeof(T); ++k) {
        bytes[k] = static_cast<unsigned char>(bits & 0xffu);
        bits >>= 8;
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw FormatError("PAMF stream truncated");
    }
    U bits = 0;
    for (std::size_t k = sizeof(T); k-- > 0;) bits = (bits << 8) | bytes[k];
    return std::bit_cast<T>(bits);
}

}  // namespace

void write_pamf(std::ostream& out, const Field& f) {
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kPamfVersion);
    put_le<std::uint64_t>(out, f.grid().size());
    put_le<double>(out, f.grid().half_width());
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(f.values().data()),
                  static_cast<std::streamsize>(f.values().size() * sizeof(double)));
    } else {
        for (double v : f.values()) put_le<double>(out, v);
    }
    if (!out) throw FormatError("failed writing PAMF stream");
}

Field read_pamf(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw FormatError("not a PAMF stream (bad magic)");
    }
    const auto version = get_le<std::uint32_t>(in);
    if (version != kPamfVersion) {
        throw FormatError("unsupported PAMF version " + std::to_string(version));
    }
    const auto n = get_le<std::uint64_t>(in);
    const auto half_width = get_le<double>(in);
    if (n == 0 || n > (1u << 16)) throw FormatError("implausible PAMF size " + std::to_string(n));
    Grid grid = [&] {
        try {
            return Grid(half_width, n);
        } catch (const InvalidArgument& e) {
            throw FormatError(std::string("PAMF header describes an invalid grid: ") + e.what());
        }
    }();
    std::vector<double> values(n * n);
    if constexpr (std::endian::native == std::endian::little) {
        const auto bytes = static_cast<std::streamsize>(values.size() * sizeof(double));
        if (!in.read(reinterpret_cast<char*>(values.data()), bytes)) {
            throw FormatError("PAMF payload shorter than n*n values");
        }
    } else {
        for (auto& v : values) v = get_le<double>(in);
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("PAMF payload longer than n*n values");
    }
    return Field(grid, std::move(values));
}

void write_pamf(const std::filesystem::path& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    write_pamf(out, f);
}

Field read_pamf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_pamf(in);
}

}  // namespace pam
