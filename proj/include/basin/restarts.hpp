#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "basin/dynamics.hpp"

namespace basin {

struct RestartRecord {
    long index = 0;
    Point x0;
    TerminalOutcome outcome;
};

struct OutcomeCluster {
    Point representative;
    long count = 0;
    double max_within_cluster_distance = 0.0;  // sup-norm, relative to the representative
};

/// Restart outcomes identified up to the observation tolerance eps_obs.
/// Invariants: counts + dagger_count == n; representatives pairwise more
/// than eps_obs apart in sup-norm.
struct OutcomeTally {
    std::vector<OutcomeCluster> clusters;
    long dagger_count = 0;
    long n = 0;
    double eps_obs = 0.0;
};

struct HnReport {
    bool holds = false;
    std::optional<Point> rts;
    long n = 0;
};

/// Runs the solver from n i.i.d. draws (indices 0..n-1 of the sampler
/// re-seeded with base_seed). Records are stored by index, so the result is
/// independent of the worker schedule. workers <= 0 picks a hardware default.
std::vector<RestartRecord> run_restarts(const Solver& solver, const InitialSampler& sampler,
                                        const ConvexDomain& domain, long n, std::uint64_t base_seed,
                                        int workers = 0);

/// Greedy leader clustering of converged terminal points in record order:
/// a point joins the first cluster whose representative is within eps_obs
/// (sup-norm), otherwise founds a new cluster. Dagger outcomes are tallied
/// separately and never merged.
OutcomeTally identify_outcomes(const std::vector<RestartRecord>& records, double eps_obs);

/// H_n holds iff every run converged to the same identified outcome:
/// a single cluster holding all n records and no daggers.
HnReport check_hn(const OutcomeTally& tally);

std::vector<std::pair<Point, double>> empirical_basin_fractions(const OutcomeTally& tally);

}  // namespace basin
