#pragma once

#include <optional>
#include <vector>

#include "pam/checks.hpp"
#include "pam/config.hpp"
#include "pam/kernels.hpp"
#include "pam/report.hpp"

namespace pam {

// Per seed and rung: C_eps, both solvers, distances between successive rungs.
// Tables "rungs" and "distances"; a failing rung is marked and the others continue.
// Throws ConfigError when the ladder has fewer than three rungs.
Report run_convergence_study(const ExperimentConfig& cfg);

struct ValidationHooks {
    std::optional<Cutoff> green_cutoff;     // replaces the cutoff in the Green-kernel check only
};

struct ValidationOutcome {
    Report report;
    std::vector<CheckResult> checks;

    bool all_passed() const;
};

// Cross-module property suite sized by the config grid, ladder and seeds.
ValidationOutcome run_validation(const ExperimentConfig& cfg, const ValidationHooks& hooks = {});

}  // namespace pam
