#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pam/lattice.hpp"

namespace pam {

std::string code_version();

// CSV table whose rows all start with (seed, epsilon, grid_L, grid_n, code_version).
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t rows() const { return rows_.size(); }

    // Values must match the extra columns; nonfinite numbers are rejected.
    void add_row(std::uint64_t seed, double epsilon, const Grid& grid,
                 const std::vector<std::string>& values);
    void add_row(std::uint64_t seed, double epsilon, const Grid& grid,
                 const std::vector<double>& values);

    void write(std::ostream& out) const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string csv_number(double v);

struct Report {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::map<std::string, CsvTable> tables;

    CsvTable& table(const std::string& name, const std::vector<std::string>& columns);
};

// Writes <name>.csv per table plus manifest.txt (experiment, code version, config echo).
void write_report(const std::filesystem::path& dir, const Report& report);

}  // namespace pam
