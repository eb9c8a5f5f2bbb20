#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "basin/manifest.hpp"

namespace basin {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::uint64_t seed = 0;
    bool all_passed = false;
    std::vector<SuiteResult> suites;
};

/// Monte Carlo and exact-inequality oracle suites: the L_k sandwich grid,
/// the conditional Beta-Bernoulli posterior calibration, Dirichlet
/// aggregation via block sums, and the double-well restart frequencies.
/// inject_bug perturbs the sandwich check; it exists as a negative control
/// for the reporting path.
ValidationReport run_validation(std::uint64_t seed, bool inject_bug = false);

SuiteResult run_sandwich_suite(bool inject_bug = false);
SuiteResult run_posterior_calibration_suite(std::uint64_t seed);
SuiteResult run_dirichlet_aggregation_suite(std::uint64_t seed);
SuiteResult run_double_well_suite(std::uint64_t seed);

json to_json(const ValidationReport& report);

}  // namespace basin
