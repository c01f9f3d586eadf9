#include "pam/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pam/error.hpp"

#ifndef PAM_VERSION
#define PAM_VERSION "unknown"
#endif

namespace pam {

std::string code_version() { return PAM_VERSION; }

std::string csv_number(double v) {
    if (!std::isfinite(v)) throw InvalidArgument("report cells must be finite");
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::uint64_t seed, double epsilon, const Grid& grid,
                       const std::vector<std::string>& values) {
    if (values.size() != columns_.size()) {
        throw InvalidArgument("row has " + std::to_string(values.size()) + " values for " +
                              std::to_string(columns_.size()) + " columns");
    }
    std::vector<std::string> row{std::to_string(seed), csv_number(epsilon),
                                 csv_number(grid.half_width()), std::to_string(grid.size()),
                                 code_version()};
    row.insert(row.end(), values.begin(), values.end());
    rows_.push_back(std::move(row));
}

void CsvTable::add_row(std::uint64_t seed, double epsilon, const Grid& grid,
                       const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(csv_number(v));
    add_row(seed, epsilon, grid, cells);
}

void CsvTable::write(std::ostream& out) const {
    out << "seed,epsilon,grid_L,grid_n,code_version";
    for (const auto& c : columns_) out << "," << c;
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
        out << "\n";
    }
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    write(out);
    if (!out) throw FormatError("failed writing " + path.string());
}

CsvTable& Report::table(const std::string& name, const std::vector<std::string>& columns) {
    auto it = tables.find(name);
    if (it == tables.end()) it = tables.emplace(name, CsvTable(columns)).first;
    return it->second;
}

void write_report(const std::filesystem::path& dir, const Report& report) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, t] : report.tables) t.write(dir / (name + ".csv"));
    std::ofstream m(dir / "manifest.txt");
    m << "experiment = " << report.experiment << "\n"
      << "code_version = " << code_version() << "\n";
    for (const auto& [k, v] : report.config_echo) m << k << " = " << v << "\n";
    for (const auto& [name, t] : report.tables) m << "table." << name << " = " << name << ".csv\n";
    if (!m) throw FormatError("failed writing report manifest");
}

}  // namespace pam
