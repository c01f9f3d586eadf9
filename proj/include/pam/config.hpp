#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pam/lattice.hpp"
#include "pam/solver.hpp"

namespace pam {

struct ExperimentConfig {
    std::string name = "default";
    double L = 2.0;
    std::size_t n = 256;
    std::vector<double> eps_ladder{0.25, 0.125, 0.0625};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    SolveConfig solver{};
    std::size_t fk_walkers = 100000;
    double fk_dt = 1e-4;
    double collar = 1.0;
    std::filesystem::path out_dir = "out";

    Grid grid() const { return Grid(L, n); }
    // Every key with its effective value, in a fixed order.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// Flat "section.key = value" document, '#' starts a comment. Lists are comma
// separated; integers accept ranges "a:b" (inclusive) and reals accept "2^-k".
// Throws ConfigError naming the key for unknown keys, bad values or violated
// constraints (a < kappa/2, strictly decreasing ladder, eps_min >= 2h).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Parses "0.125", "2^-3" or "1e-3".
double parse_real(const std::string& key, const std::string& value);

}  // namespace pam
