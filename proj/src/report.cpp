#include "basin/report.hpp"

#include <cmath>
#include <stdexcept>

#include "basin/special.hpp"

namespace basin {

void PriorsSpec::validate() const {
    basin.validate();
    for (double eps : eps_grid)
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("priors: eps grid entries must be in (0, 1)");
    spike_slab.validate();
    mfm.validate();
}

PolyDensityParams poly_params_for_beta(const BetaParams& prior) {
    prior.validate();
    PolyDensityParams params;
    params.kappa = prior.beta - 1.0;
    params.delta = 0.5;
    const double min_power = prior.alpha >= 1.0 ? std::pow(0.5, prior.alpha - 1.0) : 1.0;
    params.c = min_power * std::exp(-log_beta(prior.alpha, prior.beta));
    return params;
}

HnPosteriors compute_hn_posteriors(const PriorsSpec& priors, long n) {
    priors.validate();
    if (n < 1) throw std::invalid_argument("compute_hn_posteriors: n must be >= 1");

    HnPosteriors out;
    out.n = n;
    out.basin_prior = priors.basin;
    out.basin_posterior = beta_posterior_update(priors.basin, n);

    const PolyDensityParams poly = poly_params_for_beta(priors.basin);
    for (double eps : priors.eps_grid) {
        BasinTailEntry entry;
        entry.eps = eps;
        entry.tail = basin_tail_exact(priors.basin, n, eps);
        entry.complement = 1.0 - entry.tail;
        entry.bound_beta = basin_tail_bound_beta(priors.basin, n, eps);
        if (n >= 2 && 1.0 / static_cast<double>(n) < poly.delta) {
            const double prior_mass = beta_cdf(priors.basin.alpha, priors.basin.beta, 1.0 - eps);
            const PolyBound bound = basin_tail_bound_poly(poly, n, eps, prior_mass);
            entry.bound_poly = bound.poly.value;
            entry.bound_poly_exp = bound.exponential.value;
        }
        out.basin_tails.push_back(entry);
    }

    out.spike_slab = spike_slab_posterior(priors.spike_slab, n);

    const MfmPosterior mfm = mfm_posterior_K(priors.mfm, n);
    out.mfm_truncation_tail = mfm.truncation_tail_bound;
    out.mfm_k1.exact_value = mfm.k1();
    out.mfm_k1.n = n;
    out.mfm_k1.method = "mfm";
    const Interval complement =
        mfm_K1_bounds(priors.mfm.pmf(1), priors.mfm.pmf(2), priors.mfm.alpha, n);
    out.mfm_k1.lower_bound = std::max(0.0, 1.0 - complement.upper - mfm.truncation_tail_bound);
    out.mfm_k1.upper_bound = std::min(1.0, 1.0 - complement.lower);
    return out;
}

}  // namespace basin
