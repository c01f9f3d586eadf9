// Acceptance run: one line per criterion, nonzero exit if any criterion fails.
// Optional arguments select criteria by number, e.g. `acceptance 2 8`.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "pam/checks.hpp"

using namespace pam;

namespace {

struct Criterion {
    int number;
    std::function<std::vector<CheckResult>()> run;
};

std::vector<Criterion> criteria() {
    return {
        {1, [] { return std::vector{check_renormalisation_identity({})}; }},
        {2, [] { return std::vector{check_c_epsilon_divergence({})}; }},
        {3, [] {
             auto [a, b] = check_monte_carlo({});
             return std::vector{a, b};
         }},
        {4, [] { return std::vector{check_transform_consistency({})}; }},
        {5, [] { return std::vector{check_feynman_kac({})}; }},
        {6, [] { return std::vector{check_wavelet_isometry({})}; }},
        {7, [] { return std::vector{check_regularity_ladder({})}; }},
        {8, [] { return std::vector{check_heat_smoothing({})}; }},
        {9, [] { return std::vector{check_epsilon_cauchy({})}; }},
        {10, [] { return std::vector{check_young_product({})}; }},
    };
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
    bool all = true;
    for (const auto& c : criteria()) {
        if (!only.empty() && !only.count(c.number)) continue;
        const auto start = std::chrono::steady_clock::now();
        std::vector<CheckResult> results;
        std::string error;
        try {
            results = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = error.empty();
        for (const auto& r : results) ok = ok && r.status == CheckStatus::pass;
        all = all && ok;
        std::printf("criterion %d: %s (%.0f s)\n", c.number, ok ? "PASS" : "FAIL", secs);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        for (const auto& r : results) {
            std::printf("    %s [%s]: measured %.6g, band [%.6g, %.6g]; %s\n", r.name.c_str(),
                        status_name(r.status), r.measured, r.lower, r.upper, r.detail.c_str());
        }
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
