#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "pam/lattice.hpp"

namespace pam {

// Binary field format: "PAMF", u32 version, u64 n, f64 L, then n*n f64
// values row-major. Everything little-endian.
inline constexpr std::uint32_t kPamfVersion = 1;

void write_pamf(std::ostream& out, const Field& f);
Field read_pamf(std::istream& in);

void write_pamf(const std::filesystem::path& path, const Field& f);
Field read_pamf(const std::filesystem::path& path);

}  // namespace pam
