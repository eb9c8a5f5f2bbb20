#include "basin/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "basin/special.hpp"

namespace basin {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

ClampedBound clamped(double raw) { return ClampedBound{clamp01(raw), raw}; }

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

// log sum exp over a small vector of log terms (-inf entries allowed)
double log_sum_exp(const std::vector<double>& logs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : logs) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - m);
    return m + std::log(acc);
}

}  // namespace

void BetaParams::validate() const {
    require(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta),
            "beta params: alpha and beta must be positive");
}

void PolyDensityParams::validate() const {
    require(c > 0.0 && std::isfinite(c), "poly density: c must be positive");
    require(kappa >= 0.0 && std::isfinite(kappa), "poly density: kappa must be nonnegative");
    require(delta > 0.0 && delta <= 1.0, "poly density: delta must be in (0, 1]");
}

void SpikeSlabPrior::validate() const {
    require(p_spike >= 0.0 && p_spike <= 1.0, "spike-slab: p must be in [0, 1]");
    slab.validate();
}

void MfmPrior::validate() const {
    require(alpha > 0.0 && std::isfinite(alpha), "mfm prior: alpha must be positive");
    require(k_max >= 2, "mfm prior: k_max must be >= 2");
    switch (family) {
        case PkFamily::Geometric:
            require(theta > 0.0 && theta < 1.0, "mfm prior: geometric theta must be in (0, 1)");
            break;
        case PkFamily::ZeroTruncatedPoisson:
            require(theta > 0.0 && std::isfinite(theta), "mfm prior: poisson rate must be positive");
            break;
        case PkFamily::CustomPmf: {
            require(!custom_pmf.empty(), "mfm prior: custom pmf is empty");
            double sum = 0.0;
            for (double p : custom_pmf) {
                require(p >= 0.0, "mfm prior: custom pmf entries must be nonnegative");
                sum += p;
            }
            require(std::abs(sum - 1.0) <= 1e-12, "mfm prior: custom pmf must sum to 1");
            break;
        }
    }
}

double MfmPrior::pmf(int k) const {
    if (k < 1) return 0.0;
    switch (family) {
        case PkFamily::Geometric:
            return theta * std::exp(static_cast<double>(k - 1) * std::log1p(-theta));
        case PkFamily::ZeroTruncatedPoisson: {
            const double log_norm = std::log(-std::expm1(-theta));  // log(1 - e^{-theta})
            return std::exp(static_cast<double>(k) * std::log(theta) - theta -
                            std::lgamma(static_cast<double>(k) + 1.0) - log_norm);
        }
        case PkFamily::CustomPmf:
            return k <= static_cast<int>(custom_pmf.size()) ? custom_pmf[static_cast<std::size_t>(k - 1)]
                                                            : 0.0;
    }
    return 0.0;
}

double MfmPrior::tail_mass(int k_above) const {
    if (k_above < 1) return 1.0;
    switch (family) {
        case PkFamily::Geometric:
            return std::exp(static_cast<double>(k_above) * std::log1p(-theta));
        case PkFamily::ZeroTruncatedPoisson: {
            double head = 0.0;
            for (int k = 1; k <= k_above; ++k) head += pmf(k);
            return std::max(0.0, 1.0 - head);
        }
        case PkFamily::CustomPmf: {
            double tail = 0.0;
            for (int k = k_above + 1; k <= static_cast<int>(custom_pmf.size()); ++k)
                tail += custom_pmf[static_cast<std::size_t>(k - 1)];
            return tail;
        }
    }
    return 0.0;
}

BetaParams beta_posterior_update(const BetaParams& prior, long n) {
    prior.validate();
    require(n >= 0, "beta_posterior_update: n must be >= 0");
    return BetaParams{prior.alpha + static_cast<double>(n), prior.beta};
}

double basin_tail_exact(const BetaParams& prior, long n, double eps) {
    prior.validate();
    require(n >= 0, "basin_tail_exact: n must be >= 0");
    require(eps > 0.0 && eps < 1.0, "basin_tail_exact: eps must be in (0, 1)");
    const double a = prior.alpha + static_cast<double>(n);
    if (prior.beta == 1.0) return std::exp(a * std::log1p(-eps));
    return reg_inc_beta(a, prior.beta, 1.0 - eps);
}

double basin_tail_bound_beta(const BetaParams& prior, long n, double eps) {
    prior.validate();
    require(n >= 0, "basin_tail_bound_beta: n must be >= 0");
    require(eps > 0.0 && eps < 1.0, "basin_tail_bound_beta: eps must be in (0, 1)");
    const double a = prior.alpha + static_cast<double>(n);
    return std::pow(a + prior.beta, prior.beta) / std::tgamma(prior.beta + 1.0) *
           std::exp((a - 1.0) * std::log1p(-eps));
}

ClampedBound basin_eta_bound(long n, double eps, double eta, double prior_mass_a_eps,
                             double prior_mass_a_eta) {
    require(n >= 0, "basin_eta_bound: n must be >= 0");
    require(eps > 0.0 && eps < 1.0, "basin_eta_bound: eps must be in (0, 1)");
    require(eta > 0.0 && eta < 1.0, "basin_eta_bound: eta must be in (0, 1)");
    require(prior_mass_a_eps >= 0.0 && prior_mass_a_eps <= 1.0,
            "basin_eta_bound: prior mass of A_eps must be in [0, 1]");
    require(prior_mass_a_eta >= 0.0 && prior_mass_a_eta < 1.0,
            "basin_eta_bound: prior mass of A_eta must be < 1");
    const double log_ratio = static_cast<double>(n) * (std::log1p(-eps) - std::log1p(-eta));
    return clamped(std::exp(log_ratio) * prior_mass_a_eps / (1.0 - prior_mass_a_eta));
}

PolyBound basin_tail_bound_poly(const PolyDensityParams& params, long n, double eps,
                                double prior_mass_a_eps) {
    params.validate();
    require(eps > 0.0 && eps < 1.0, "basin_tail_bound_poly: eps must be in (0, 1)");
    require(prior_mass_a_eps >= 0.0 && prior_mass_a_eps <= 1.0,
            "basin_tail_bound_poly: prior mass must be in [0, 1]");
    require(n >= 2, "basin_tail_bound_poly: n must be >= 2");
    require(1.0 / static_cast<double>(n) < params.delta, "basin_tail_bound_poly: requires 1/n < delta");
    const double nn = static_cast<double>(n);
    const double front = 4.0 * (params.kappa + 1.0) / params.c * std::pow(nn, params.kappa + 1.0);
    PolyBound out;
    out.poly = clamped(front * std::exp(nn * std::log1p(-eps)) * prior_mass_a_eps);
    out.exponential = clamped(front * std::exp(-nn * eps) * prior_mass_a_eps);
    return out;
}

double slab_moment(const BetaParams& slab, long n) {
    slab.validate();
    require(n >= 0, "slab_moment: n must be >= 0");
    if (n == 0) return 1.0;
    // ln E[S^n] = lnB(a+n, b) - lnB(a, b) = lgamma_delta(a, b) - lgamma_delta(a+n, b)
    const double nn = static_cast<double>(n);
    return std::exp(lgamma_delta(slab.alpha, slab.beta) - lgamma_delta(slab.alpha + nn, slab.beta));
}

PosteriorSummary spike_slab_posterior(const SpikeSlabPrior& prior, long n) {
    prior.validate();
    require(n >= 0, "spike_slab_posterior: n must be >= 0");
    PosteriorSummary out;
    out.n = n;
    out.method = "spike-slab";
    const double p = prior.p_spike;
    if (p == 0.0) {
        out.exact_value = 0.0;
    } else if (p == 1.0) {
        out.exact_value = 1.0;
    } else {
        out.exact_value = p / (p + (1.0 - p) * slab_moment(prior.slab, n));
    }
    return out;
}

double moment_tail_bound(const std::function<double(double)>& tail_f, double delta, long n) {
    require(delta > 0.0 && delta <= 1.0, "moment_tail_bound: delta must be in (0, 1]");
    require(n >= 1, "moment_tail_bound: n must be >= 1");
    const double nn = static_cast<double>(n);
    const auto integrand = [&](double u) { return std::exp(-(nn - 1.0) * u) * tail_f(u); };
    const double integral = adaptive_simpson(integrand, 0.0, delta, 1e-12);
    return nn * integral + std::exp(nn * std::log1p(-delta));
}

double poly_tail_rate_bound(double big_c, double gamma, double delta, long n) {
    require(big_c > 0.0, "poly_tail_rate_bound: C must be positive");
    require(gamma > 0.0, "poly_tail_rate_bound: gamma must be positive");
    require(delta > 0.0 && delta <= 1.0, "poly_tail_rate_bound: delta must be in (0, 1]");
    require(n >= 2, "poly_tail_rate_bound: n must be >= 2");
    const double nn = static_cast<double>(n);
    return big_c * std::tgamma(gamma + 1.0) * nn / std::pow(nn - 1.0, gamma + 1.0) +
           std::exp(nn * std::log1p(-delta));
}

double mfm_component_likelihood(double alpha, int k, long n) {
    require(alpha > 0.0 && std::isfinite(alpha), "mfm_component_likelihood: alpha must be positive");
    require(k >= 1, "mfm_component_likelihood: k must be >= 1");
    require(n >= 1, "mfm_component_likelihood: n must be >= 1");
    if (k == 1) return 1.0;
    const double a = alpha / static_cast<double>(k);
    const double nn = static_cast<double>(n);
    // ln L = lnG(alpha) - lnG(a) - [lnG(alpha+n) - lnG(a+n)]
    const double log_l = (std::lgamma(alpha) - std::lgamma(a)) - lgamma_delta(a + nn, alpha - a);
    return std::exp(log_l);
}

Interval mfm_Lk_bounds(double alpha, int k, long n) {
    require(alpha > 0.0 && std::isfinite(alpha), "mfm_Lk_bounds: alpha must be positive");
    require(k >= 1, "mfm_Lk_bounds: k must be >= 1");
    require(n >= 1, "mfm_Lk_bounds: n must be >= 1");
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    const double delta_k = alpha * (1.0 - 1.0 / kk);
    const double a = alpha / kk;
    Interval out;
    out.lower = std::exp(-std::log(kk) + delta_k * (std::log(a) - std::log(nn - 1.0 + a)));
    out.upper = std::exp(-std::log(kk) + delta_k * (std::log1p(alpha) - std::log(nn + alpha)));
    return out;
}

MfmPosterior mfm_posterior_K(const MfmPrior& prior, long n) {
    prior.validate();
    require(n >= 1, "mfm_posterior_K: n must be >= 1");
    MfmPosterior out;
    out.k_max = prior.k_max;
    out.mass.resize(static_cast<std::size_t>(prior.k_max));
    double norm = 0.0;
    double l_last = 1.0;
    for (int k = 1; k <= prior.k_max; ++k) {
        l_last = mfm_component_likelihood(prior.alpha, k, n);
        const double u = prior.pmf(k) * l_last;
        out.mass[static_cast<std::size_t>(k - 1)] = u;
        norm += u;
    }
    if (norm <= 0.0) throw std::invalid_argument("mfm_posterior_K: prior has no mass on k <= k_max");
    for (double& m : out.mass) m /= norm;
    // L_k decreases in k, so the omitted mass is at most L_{k_max} * P(K > k_max).
    out.truncation_tail_bound = l_last * prior.tail_mass(prior.k_max) / norm;
    return out;
}

Interval mfm_K1_bounds(double pi1, double pi2, double alpha, long n) {
    require(pi1 > 0.0 && pi2 > 0.0, "mfm_K1_bounds: pi1 and pi2 must be positive");
    require(pi1 + pi2 <= 1.0 + 1e-12, "mfm_K1_bounds: pi1 + pi2 must be <= 1");
    require(alpha > 0.0, "mfm_K1_bounds: alpha must be positive");
    require(n >= 1, "mfm_K1_bounds: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double half_alpha = 0.5 * alpha;
    Interval out;
    out.lower = pi2 * 0.5 * std::exp(half_alpha * (std::log(half_alpha) - std::log(nn - 1.0 + half_alpha)));
    out.upper = (1.0 - pi1) / pi1 * 0.5 *
                std::exp(half_alpha * (std::log1p(alpha) - std::log(nn + alpha)));
    return out;
}

CoarsenParams dirichlet_coarsen_params(double alpha_total, int K, int m) {
    require(alpha_total > 0.0, "dirichlet_coarsen_params: alpha must be positive");
    require(K >= 1 && m >= 1, "dirichlet_coarsen_params: K and m must be >= 1");
    return CoarsenParams{alpha_total / (static_cast<double>(m) * static_cast<double>(K)),
                         alpha_total / static_cast<double>(K)};
}

double mfm_partition_loglik(double alpha, int k, const std::vector<long>& counts) {
    require(alpha > 0.0 && std::isfinite(alpha), "mfm_partition_likelihood: alpha must be positive");
    require(k >= 1, "mfm_partition_likelihood: k must be >= 1");
    require(!counts.empty(), "mfm_partition_likelihood: counts must be non-empty");
    const int m = static_cast<int>(counts.size());
    if (m > k) return -std::numeric_limits<double>::infinity();
    long n = 0;
    for (long c : counts) {
        require(c >= 1, "mfm_partition_likelihood: counts must be positive");
        n += c;
    }
    const double a = alpha / static_cast<double>(k);
    double log_l = -lgamma_delta(alpha, static_cast<double>(n));  // lnG(alpha) - lnG(alpha+n)
    for (int i = 0; i < m; ++i) log_l += std::log(static_cast<double>(k - i));
    for (long c : counts) log_l += lgamma_delta(a, static_cast<double>(c));
    return log_l;
}

double mfm_partition_likelihood(double alpha, int k, const std::vector<long>& counts) {
    const double log_l = mfm_partition_loglik(alpha, k, counts);
    return std::isfinite(log_l) ? std::exp(log_l) : 0.0;
}

CalibrationResult empirical_bayes_calibrate(const std::vector<std::vector<long>>& counts_per_instance,
                                            PkFamily family, const std::vector<double>& theta_grid,
                                            const std::vector<double>& alpha_grid, int k_max) {
    require(!counts_per_instance.empty(), "empirical_bayes_calibrate: no instances");
    require(!theta_grid.empty() && !alpha_grid.empty(), "empirical_bayes_calibrate: empty grid");
    require(k_max >= 2, "empirical_bayes_calibrate: k_max must be >= 2");
    for (const auto& counts : counts_per_instance) {
        require(!counts.empty(),
                "empirical_bayes_calibrate: instance with no converged outcomes (all-dagger)");
        require(static_cast<int>(counts.size()) <= k_max,
                "empirical_bayes_calibrate: an instance observes more outcomes than k_max; raise k_max");
    }

    CalibrationResult out;
    out.theta_grid = theta_grid;
    out.alpha_grid = alpha_grid;
    out.loglik.assign(theta_grid.size(), std::vector<double>(alpha_grid.size(), 0.0));

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
        MfmPrior prior;
        prior.family = family;
        prior.theta = theta_grid[ti];
        prior.k_max = k_max;
        prior.alpha = 1.0;  // validated per-alpha below
        for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
            prior.alpha = alpha_grid[ai];
            prior.validate();
            double total = 0.0;
            for (const auto& counts : counts_per_instance) {
                const int m = static_cast<int>(counts.size());
                std::vector<double> log_terms;
                log_terms.reserve(static_cast<std::size_t>(k_max - m + 1));
                for (int k = m; k <= k_max; ++k) {
                    const double log_pk = std::log(prior.pmf(k));
                    log_terms.push_back(log_pk + mfm_partition_loglik(prior.alpha, k, counts));
                }
                const double log_marginal = log_sum_exp(log_terms);
                total += log_marginal;

                // Auditable truncation tail: bound the likelihood for k > k_max.
                long n = 0;
                double log_cap = 0.0;
                for (long c : counts) {
                    n += c;
                    log_cap += std::lgamma(static_cast<double>(c));  // (c-1)!
                    for (long t = 1; t < c; ++t) log_cap += std::log1p(prior.alpha / (k_max * static_cast<double>(t)));
                }
                log_cap += m * std::log(prior.alpha) - lgamma_delta(prior.alpha, static_cast<double>(n));
                const double tail = prior.tail_mass(k_max);
                if (tail > 0.0) {
                    const double rel_tail = std::exp(std::log(tail) + log_cap - log_marginal);
                    out.max_truncation_tail = std::max(out.max_truncation_tail, rel_tail);
                }
            }
            out.loglik[ti][ai] = total;
            if (total > best) {
                best = total;
                out.theta_hat = theta_grid[ti];
                out.alpha_hat = alpha_grid[ai];
            }
        }
    }
    return out;
}

CalibrationResult empirical_bayes_calibrate(const std::vector<OutcomeTally>& tallies, PkFamily family,
                                            const std::vector<double>& theta_grid,
                                            const std::vector<double>& alpha_grid, int k_max) {
    std::vector<std::vector<long>> counts_per_instance;
    counts_per_instance.reserve(tallies.size());
    for (const OutcomeTally& tally : tallies) {
        std::vector<long> counts;
        counts.reserve(tally.clusters.size());
        for (const OutcomeCluster& cluster : tally.clusters) counts.push_back(cluster.count);
        if (counts.empty())
            throw std::invalid_argument(
                "empirical_bayes_calibrate: tally with no converged outcomes (all-dagger)");
        counts_per_instance.push_back(std::move(counts));
    }
    return empirical_bayes_calibrate(counts_per_instance, family, theta_grid, alpha_grid, k_max);
}

}  // namespace basin
