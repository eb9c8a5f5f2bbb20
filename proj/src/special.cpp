#include "basin/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace basin {

namespace {

// Stirling correction S(z) with lnGamma(z) = (z-1/2)ln z - z + ln(2*pi)/2 + S(z).
// Truncation error below 1e-17 for z >= 20.
double stirling_tail(double z) {
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    return inv * (1.0 / 12.0 +
                  inv2 * (-1.0 / 360.0 +
                          inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
}

constexpr double kStirlingCut = 20.0;

}  // namespace

double lgamma_delta(double x, double d) {
    if (!(x > 0.0) || !(d >= 0.0) || !std::isfinite(x) || !std::isfinite(d))
        throw std::invalid_argument("lgamma_delta: requires x > 0 and d >= 0");
    if (d == 0.0) return 0.0;
    // lnG(x+d) - lnG(x) = lnG(x+1+d) - lnG(x+1) - [ln(x+d) - ln(x)]
    double shift = 0.0;
    while (x < kStirlingCut) {
        shift -= std::log1p(d / x);
        x += 1.0;
    }
    return shift + (x - 0.5) * std::log1p(d / x) + d * (std::log(x + d) - 1.0) +
           stirling_tail(x + d) - stirling_tail(x);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("log_beta: requires a, b > 0");
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("reg_inc_beta: requires a, b > 0");
    if (!(x >= 0.0) || !(x <= 1.0)) throw std::invalid_argument("reg_inc_beta: x must be in [0, 1]");
    return boost::math::ibeta(a, b, x);
}

double beta_cdf(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return reg_inc_beta(a, b, x);
}

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                       double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tolerance must be positive");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, 48);
}

double ks_complement_cdf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.18) return 1.0;  // series converges too slowly; Q is 1 to double precision
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 128; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double u = cdf(samples[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - u;
        const double lo = u - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    KsResult out;
    out.statistic = d;
    out.p_value = ks_complement_cdf(std::sqrt(n) * d);
    return out;
}

}  // namespace basin
