#pragma once

#include <functional>
#include <vector>

namespace basin {

/// ln Gamma(x + d) - ln Gamma(x) for x > 0, d >= 0, evaluated without the
/// catastrophic cancellation of subtracting two large lgamma values. Keeps
/// Gamma-ratio probabilities accurate to ~1e-14 relative even at n = 1e4.
double lgamma_delta(double x, double d);

/// ln B(a, b)
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// CDF of Beta(a, b) at x.
double beta_cdf(double a, double b, double x);

/// Adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol);

/// Kolmogorov distribution complement Q(lambda) = P(sup |B| > lambda).
double ks_complement_cdf(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF
/// (asymptotic p-value; intended for large samples).
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace basin
