#pragma once

#include <optional>
#include <vector>

#include "basin/inference.hpp"

namespace basin {

/// Prior bundle for conditioning on H_n: Beta prior on the basin size,
/// spike-and-slab for uniqueness, and an MFM prior on the outcome count.
struct PriorsSpec {
    BetaParams basin{1.0, 1.0};
    std::vector<double> eps_grid{1e-4, 1e-3, 1e-2, 5e-2, 1e-1};
    SpikeSlabPrior spike_slab{};
    MfmPrior mfm{};
    void validate() const;
};

struct BasinTailEntry {
    double eps = 0.0;
    double tail = 0.0;        // Pi(s < 1-eps | H_n), exact
    double complement = 0.0;  // Pi(s >= 1-eps | H_n)
    double bound_beta = 0.0;  // raw proposition bound (may exceed 1)
    std::optional<double> bound_poly;      // clamped, when n admits it
    std::optional<double> bound_poly_exp;  // weaker exponential form
};

/// The full posterior report after observing H_n; depends only on n and
/// the priors.
struct HnPosteriors {
    long n = 0;
    BetaParams basin_prior;
    BetaParams basin_posterior;
    std::vector<BasinTailEntry> basin_tails;
    PosteriorSummary spike_slab;
    PosteriorSummary mfm_k1;  // bounds derived from the rate-tight theorem
    double mfm_truncation_tail = 0.0;
};

HnPosteriors compute_hn_posteriors(const PriorsSpec& priors, long n);

/// Density floor f_s(s) >= c (1-s)^kappa near 1 implied by a Beta prior,
/// used to attach the eta-free bound automatically.
PolyDensityParams poly_params_for_beta(const BetaParams& prior);

}  // namespace basin
