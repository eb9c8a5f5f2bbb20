#include "basin/validate.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "basin/problems.hpp"
#include "basin/rng.hpp"
#include "basin/special.hpp"

namespace basin {

namespace {

std::string format_detail(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

}  // namespace

SuiteResult run_sandwich_suite(bool inject_bug) {
    SuiteResult suite;
    suite.name = "lk-sandwich";
    const std::vector<double> alphas = {0.1, 0.5, 1.0, 5.0};
    const std::vector<long> ns = {1, 10, 100, 1000, 10000};
    int checks = 0, violations = 0;
    double worst = 0.0;
    for (double alpha : alphas) {
        for (int k = 1; k <= 10; ++k) {
            for (long n : ns) {
                double l = mfm_component_likelihood(alpha, k, n);
                if (inject_bug) l *= 1.0 + 1e-6;
                const Interval bounds = mfm_Lk_bounds(alpha, k, n);
                const double low_slack = (l - bounds.lower) / bounds.lower;
                const double high_slack = (bounds.upper - l) / bounds.upper;
                worst = std::min(worst, std::min(low_slack, high_slack));
                if (low_slack < -1e-12 || high_slack < -1e-12) ++violations;
                ++checks;
            }
        }
    }
    suite.passed = violations == 0;
    suite.detail = format_detail("%d checks, %d violations, worst relative slack %.3e", checks,
                                 violations, worst);
    return suite;
}

SuiteResult run_posterior_calibration_suite(std::uint64_t seed) {
    SuiteResult suite;
    suite.name = "posterior-calibration";
    suite.passed = true;
    std::string detail;
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long n : {5L, 20L}) {
        constexpr std::size_t replications = 100000;
        std::vector<double> accepted;
        accepted.reserve(replications);
        while (accepted.size() < replications) {
            const double s = unif(eng);
            bool all_success = true;
            for (long i = 0; i < n && all_success; ++i) all_success = unif(eng) < s;
            if (all_success) accepted.push_back(s);
        }
        const double exponent = static_cast<double>(n) + 1.0;
        const KsResult ks = ks_test(std::move(accepted),
                                    [exponent](double s) { return std::pow(s, exponent); });
        const bool ok = ks.p_value > 0.01;
        suite.passed = suite.passed && ok;
        if (!detail.empty()) detail += "; ";
        detail += format_detail("n=%ld: KS D=%.5f p=%.4f", n, ks.statistic, ks.p_value);
    }
    suite.detail = detail;
    return suite;
}

SuiteResult run_dirichlet_aggregation_suite(std::uint64_t seed) {
    SuiteResult suite;
    suite.name = "dirichlet-aggregation";
    suite.passed = true;
    std::string detail;
    std::mt19937_64 eng(seed);
    const std::vector<std::tuple<double, int, int>> configs = {{1.0, 2, 3}, {2.0, 3, 2}};
    for (const auto& [alpha, big_k, m] : configs) {
        const CoarsenParams params = dirichlet_coarsen_params(alpha, big_k, m);
        const int fine_count = big_k * m;
        std::gamma_distribution<double> gamma(params.fine, 1.0);
        constexpr std::size_t samples = 100000;
        std::vector<double> block_sums;
        block_sums.reserve(samples);
        while (block_sums.size() < samples) {
            double total = 0.0, block = 0.0;
            for (int i = 0; i < fine_count; ++i) {
                const double g = gamma(eng);
                total += g;
                if (i < m) block += g;
            }
            if (total <= 0.0) continue;
            block_sums.push_back(block / total);
        }
        const double a = params.coarse;
        const double b = alpha - params.coarse;
        const KsResult ks =
            ks_test(std::move(block_sums), [a, b](double x) { return beta_cdf(a, b, x); });
        const bool ok = ks.p_value > 0.01;
        suite.passed = suite.passed && ok;
        if (!detail.empty()) detail += "; ";
        detail += format_detail("(alpha=%g,K=%d,m=%d): KS D=%.5f p=%.4f", alpha, big_k, m,
                                ks.statistic, ks.p_value);
    }
    suite.detail = detail;
    return suite;
}

SuiteResult run_double_well_suite(std::uint64_t seed) {
    SuiteResult suite;
    suite.name = "double-well";
    const ConvexDomain domain = ConvexDomain::box(Vector::Constant(1, -2.0), Vector::Constant(1, 2.0));
    const ProblemField problem = make_named_field(json{{"kind", "double-well"}});
    const SolverConfig cfg = SolverConfig::defaults_for(domain);
    const Solver solver = solver_from(domain, problem.field, cfg);
    const long n = 10000;
    const auto records = run_restarts(solver, InitialSampler::uniform(seed), domain, n, seed);
    const OutcomeTally tally = identify_outcomes(records, 1e-6 * domain.diameter_hint());

    bool ok = tally.clusters.size() == 2 && tally.dagger_count == 0;
    double worst_offset = 0.0, worst_freq = 0.0, worst_residual = 0.0;
    if (ok) {
        for (const OutcomeCluster& cluster : tally.clusters) {
            const double x = cluster.representative[0];
            worst_offset = std::max(worst_offset, std::abs(std::abs(x) - 1.0));
            const double freq = static_cast<double>(cluster.count) / static_cast<double>(n);
            worst_freq = std::max(worst_freq, std::abs(freq - 0.5));
            worst_residual = std::max(
                worst_residual, projected_residual(domain, problem.field, cluster.representative));
        }
        const double band = 3.0 * std::sqrt(0.25 / static_cast<double>(n));
        ok = worst_offset <= 1e-6 && worst_freq <= band && worst_residual <= 1e-8;
    }
    suite.passed = ok;
    suite.detail = format_detail(
        "clusters=%zu daggers=%ld max|x|-1=%.2e max|freq-0.5|=%.4f max residual=%.2e",
        tally.clusters.size(), tally.dagger_count, worst_offset, worst_freq, worst_residual);
    return suite;
}

ValidationReport run_validation(std::uint64_t seed, bool inject_bug) {
    ValidationReport report;
    report.seed = seed;
    report.suites.push_back(run_sandwich_suite(inject_bug));
    report.suites.push_back(run_posterior_calibration_suite(mix_seed_index(seed, 1)));
    report.suites.push_back(run_dirichlet_aggregation_suite(mix_seed_index(seed, 2)));
    report.suites.push_back(run_double_well_suite(mix_seed_index(seed, 3)));
    report.all_passed = true;
    for (const SuiteResult& suite : report.suites) report.all_passed = report.all_passed && suite.passed;
    return report;
}

json to_json(const ValidationReport& report) {
    json suites = json::array();
    for (const SuiteResult& suite : report.suites)
        suites.push_back(
            json{{"name", suite.name}, {"passed", suite.passed}, {"detail", suite.detail}});
    return json{{"seed", report.seed}, {"all_passed", report.all_passed}, {"suites", std::move(suites)}};
}

}  // namespace basin
