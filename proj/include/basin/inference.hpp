#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "basin/restarts.hpp"

namespace basin {

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
    void validate() const;
};

/// Polynomial lower bound on the prior density near 1:
/// f_s(s) >= c (1-s)^kappa on (1-delta, 1).
struct PolyDensityParams {
    double c = 1.0;
    double kappa = 0.0;
    double delta = 1.0;  // in (0, 1]
    void validate() const;
};

/// p * delta_1 + (1-p) * W with a Beta slab W.
struct SpikeSlabPrior {
    double p_spike = 0.5;
    BetaParams slab{1.0, 1.0};
    void validate() const;
};

enum class PkFamily { Geometric, ZeroTruncatedPoisson, CustomPmf };

/// Mixture-of-finite-models prior: K ~ P_K, basin sizes | K=k symmetric
/// Dirichlet(alpha/k). Posterior sums are truncated at k_max with a reported
/// rigorous tail bound.
struct MfmPrior {
    PkFamily family = PkFamily::Geometric;
    double theta = 0.5;  // Geometric success probability, or ZT-Poisson rate
    std::vector<double> custom_pmf;
    double alpha = 1.0;
    int k_max = 200;

    void validate() const;
    double pmf(int k) const;
    double tail_mass(int k_above) const;  // sum of pmf over k > k_above
};

struct PosteriorSummary {
    double exact_value = 0.0;
    std::optional<double> lower_bound;
    std::optional<double> upper_bound;
    long n = 0;
    std::string method;
};

/// Probability bound clamped to [0, 1]; the raw formula value is retained
/// because several of the closed-form bounds exceed 1 at small n.
struct ClampedBound {
    double value = 1.0;
    double raw = 1.0;
};

struct PolyBound {
    ClampedBound poly;         // with (1-eps)^n
    ClampedBound exponential;  // weaker form with e^{-n eps}
};

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
};

/// Beta(alpha, beta) -> Beta(alpha + n, beta) after observing H_n.
BetaParams beta_posterior_update(const BetaParams& prior, long n);

/// Pi(A_eps | H_n) = I_{1-eps}(alpha+n, beta) with A_eps = {s < 1-eps};
/// equal to (1-eps)^{alpha+n} when beta = 1.
double basin_tail_exact(const BetaParams& prior, long n, double eps);

/// (alpha+n+beta)^beta / Gamma(beta+1) * (1-eps)^{alpha+n-1}; dominates the
/// exact tail but may exceed 1.
double basin_tail_bound_beta(const BetaParams& prior, long n, double eps);

/// (1-eps)^n Pi(A_eps) / ((1-eta)^n (1 - Pi(A_eta))), clamped.
ClampedBound basin_eta_bound(long n, double eps, double eta, double prior_mass_a_eps,
                             double prior_mass_a_eta);

/// 4(kappa+1)/c * n^{kappa+1} (1-eps)^n Pi(A_eps), plus the weaker
/// exponential form. Requires n >= 2 and 1/n < delta.
PolyBound basin_tail_bound_poly(const PolyDensityParams& params, long n, double eps,
                                double prior_mass_a_eps);

/// E[S^n] for S ~ Beta(a, b), via log-Beta.
double slab_moment(const BetaParams& slab, long n);

/// Pi(s = 1 | H_n) = p / (p + (1-p) E_W[S^n]).
PosteriorSummary spike_slab_posterior(const SpikeSlabPrior& prior, long n);

/// n * int_0^delta e^{-(n-1)u} F(u) du + (1-delta)^n with F(u) = P(S >= 1-u),
/// quadrature at absolute tolerance 1e-12.
double moment_tail_bound(const std::function<double(double)>& tail_f, double delta, long n);

/// C Gamma(gamma+1) n / (n-1)^{gamma+1} + (1-delta)^n for n >= 2.
double poly_tail_rate_bound(double big_c, double gamma, double delta, long n);

/// L_k(n) = P(H_n | K = k) = Gamma(alpha) Gamma(alpha/k + n) /
/// (Gamma(alpha/k) Gamma(alpha + n)), in log space; exactly 1 at k = 1.
double mfm_component_likelihood(double alpha, int k, long n);

/// Two-sided bounds sandwiching L_k(n), with exponent delta_k = alpha(1-1/k).
Interval mfm_Lk_bounds(double alpha, int k, long n);

struct MfmPosterior {
    std::vector<double> mass;  // mass[i] = P(K = i+1 | H_n) for k = 1..k_max
    double truncation_tail_bound = 0.0;
    int k_max = 0;
    double k1() const { return mass.empty() ? 0.0 : mass.front(); }
};

/// Posterior over the number of components: masses proportional to
/// pi_k L_k(n), truncated at k_max; the tail bound uses monotonicity of L_k.
MfmPosterior mfm_posterior_K(const MfmPrior& prior, long n);

/// Theorem bounds on the complement 1 - P(K=1 | H_n).
Interval mfm_K1_bounds(double pi1, double pi2, double alpha, long n);

struct CoarsenParams {
    double fine;    // alpha / (m K)
    double coarse;  // alpha / K
};

/// Symmetric Dirichlet parameters consistent with refinement-coarsening
/// invariance (a_K = alpha / K).
CoarsenParams dirichlet_coarsen_params(double alpha_total, int K, int m);

/// Probability that n labeled draws realize exactly the observed grouping
/// into m = |counts| distinct outcomes under symmetric Dirichlet(alpha/k)
/// with exchangeable component identities; zero when m > k.
double mfm_partition_likelihood(double alpha, int k, const std::vector<long>& counts);
double mfm_partition_loglik(double alpha, int k, const std::vector<long>& counts);

struct CalibrationResult {
    double theta_hat = 0.0;
    double alpha_hat = 0.0;
    std::vector<double> theta_grid;
    std::vector<double> alpha_grid;
    std::vector<std::vector<double>> loglik;  // [theta][alpha]
    double max_truncation_tail = 0.0;         // worst per-instance tail on the prob scale
};

/// Empirical-Bayes grid search: maximizes the summed log marginal likelihood
/// of the observed outcome counts over (theta, alpha).
CalibrationResult empirical_bayes_calibrate(const std::vector<std::vector<long>>& counts_per_instance,
                                            PkFamily family, const std::vector<double>& theta_grid,
                                            const std::vector<double>& alpha_grid, int k_max = 200);

CalibrationResult empirical_bayes_calibrate(const std::vector<OutcomeTally>& tallies, PkFamily family,
                                            const std::vector<double>& theta_grid,
                                            const std::vector<double>& alpha_grid, int k_max = 200);

}  // namespace basin
