// Acceptance suite: runs every acceptance criterion end to end and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "basin/blp.hpp"
#include "basin/pipeline.hpp"
#include "basin/tables.hpp"
#include "basin/rng.hpp"
#include "basin/validate.hpp"

using namespace basin;

namespace {

struct Criterion {
    int id;
    std::string title;
    double budget_ms;  // stated runtime limit
    std::function<std::string()> run;  // empty string = pass, otherwise failure detail
};

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

std::string check_table(const PosteriorTable& got, const std::vector<std::vector<std::string>>& want) {
    int mismatches = 0;
    std::string first;
    for (std::size_t r = 0; r < want.size(); ++r)
        for (std::size_t c = 0; c < want[r].size(); ++c)
            if (got.display[r][c] != want[r][c]) {
                if (mismatches == 0)
                    first = " first mismatch n=" + std::to_string(got.rows[r]) + " col " +
                            got.col_labels[c] + ": got " + got.display[r][c] + " want " + want[r][c];
                ++mismatches;
            }
    if (mismatches == 0) return "";
    return std::to_string(mismatches) + " cell(s) differ;" + first;
}

// reference Table 1: P(s >= 1-eps | H_n) under Beta(1,1)
const std::vector<std::vector<std::string>> kTable1 = {
    {"0.0011", "0.0109", "0.1047", "0.4312", "0.6862"},
    {"0.0100", "0.0961", "0.6376", "0.9944", "1-2.39e-05"},
    {"0.0953", "0.6327", "1-4.27e-05", "1-5.03e-23", "1-1.57e-46"},
    {"0.6322", "1-4.51e-05", "1-2.23e-44", "1-1.64e-223", "1-2.40e-458"},
};

// reference Table 2: P(s = 1 | H_n) under the spike and slab with W = Beta(1,1)
const std::vector<std::vector<std::string>> kTable2 = {
    {"0.0109", "0.100", "0.550", "0.917"},
    {"0.0918", "0.505", "0.918", "0.990"},
    {"0.501", "0.910", "0.991", "0.999"},
    {"0.909", "0.990", "0.999", "1.000"},
};

// reference Table 3: lower bounds on P(K = 1 | H_n), geometric then ZT-Poisson(1)
const std::vector<std::vector<std::string>> kTable3 = {
    {"0.552", "0.693", "0.787", "0.949", "0.679", "0.779", "0.847", "0.964"},
    {"0.601", "0.825", "0.930", "1-3.90e-04", "0.713", "0.874", "0.949", "1-2.80e-04"},
    {"0.644", "0.902", "0.978", "1-1.38e-06", "0.745", "0.929", "0.984", "1-9.89e-07"},
    {"0.683", "0.945", "0.993", "1-4.40e-09", "0.772", "0.960", "0.995", "1-3.16e-09"},
};

std::string criterion_tables(const PosteriorTable& table, const std::vector<std::vector<std::string>>& want) {
    return check_table(table, want);
}

constexpr std::uint64_t kSuiteSeed = 1;

std::string suite_status(const SuiteResult& suite) { return suite.passed ? "" : suite.detail; }

std::string criterion_sandwich() { return suite_status(run_sandwich_suite()); }

std::string criterion_mfm_exact_vs_bounds() {
    const std::vector<double> alphas = {0.1, 0.5, 1.0, 5.0};
    const std::vector<long> ns = {1, 10, 100, 1000, 10000};  // same grid as the sandwich
    const PosteriorTable table3 = make_table3();
    for (PkFamily family : {PkFamily::Geometric, PkFamily::ZeroTruncatedPoisson}) {
        MfmPrior prior;
        prior.family = family;
        prior.theta = family == PkFamily::Geometric ? 0.5 : 1.0;
        prior.k_max = 200;
        const std::size_t column_base = family == PkFamily::Geometric ? 0 : 4;
        for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            prior.alpha = alphas[ai];
            for (long n : ns) {
                const MfmPosterior posterior = mfm_posterior_K(prior, n);
                const double complement = 1.0 - posterior.k1();
                const Interval bounds = mfm_K1_bounds(prior.pmf(1), prior.pmf(2), prior.alpha, n);
                if (complement < bounds.lower * (1.0 - 1e-10))
                    return "complement below the theorem lower bound at alpha=" +
                           std::to_string(prior.alpha) + " n=" + std::to_string(n);
                if (complement > bounds.upper + posterior.truncation_tail_bound + 1e-15)
                    return "complement above the theorem upper bound at alpha=" +
                           std::to_string(prior.alpha) + " n=" + std::to_string(n);
                // P(K=1|H_n) must also clear the tabulated lower bound
                for (std::size_t ri = 0; ri < table3.rows.size(); ++ri) {
                    if (table3.rows[ri] != n) continue;
                    const double cell = table3.value[ri][column_base + ai];
                    if (posterior.k1() < cell - 1e-12)
                        return "posterior below the tabulated lower bound at alpha=" +
                               std::to_string(prior.alpha) + " n=" + std::to_string(n);
                }
            }
        }
    }
    return "";
}

std::string criterion_posterior_calibration() {
    return suite_status(run_posterior_calibration_suite(mix_seed_index(kSuiteSeed, 1)));
}

std::string criterion_dirichlet_aggregation() {
    return suite_status(run_dirichlet_aggregation_suite(mix_seed_index(kSuiteSeed, 2)));
}

std::string criterion_double_well() {
    return suite_status(run_double_well_suite(mix_seed_index(kSuiteSeed, 3)));
}

std::string criterion_monopoly_and_duopoly() {
    MixedLogitModel model;
    model.J = 1;
    model.delta = vec({1.0});
    model.price_coefs = vec({1.0});
    model.ownership = Eigen::MatrixXd::Ones(1, 1);
    model.costs = vec({1.0});

    EquilibriumOptions options;
    options.n_restarts = 50;
    options.seed = 7;
    const EquilibriumResult result = equilibrium_pipeline(model, options);
    if (!result.hn.holds) return "H_50 does not hold for the monopoly";
    if (result.tally.clusters.size() != 1) return "expected a single price cluster";

    // oracle: bisection on p = 2 + e^{1-p}
    double lo = 2.0, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (2.0 + std::exp(1.0 - mid) - mid > 0.0 ? lo : hi) = mid;
    }
    const double p_star = 0.5 * (lo + hi);
    char buf[128];
    if (std::abs(result.price[0] - p_star) > 1e-4) {
        std::snprintf(buf, sizeof(buf), "price %.6f vs oracle %.6f", result.price[0], p_star);
        return buf;
    }
    if (!(result.foc_residual <= 1e-6)) {
        std::snprintf(buf, sizeof(buf), "FOC residual %.3e > 1e-6", result.foc_residual);
        return buf;
    }

    MixedLogitModel separate;
    separate.J = 2;
    separate.delta = vec({1.0, 1.0});
    separate.price_coefs = vec({0.8, 1.2});
    separate.ownership = Eigen::MatrixXd::Identity(2, 2);
    separate.costs = vec({1.0, 1.0});
    MixedLogitModel joint = separate;
    joint.ownership = Eigen::MatrixXd::Ones(2, 2);

    EquilibriumOptions duo_options;
    duo_options.n_restarts = 20;
    duo_options.seed = 19;
    duo_options.margin_cap = 40.0;
    const EquilibriumResult sep = equilibrium_pipeline(separate, duo_options);
    const EquilibriumResult merged = equilibrium_pipeline(joint, duo_options);
    if (!sep.hn.holds || !merged.hn.holds) return "duopoly H_n does not hold";
    for (int j = 0; j < 2; ++j)
        if (!(merged.price[j] > sep.price[j]))
            return "joint-ownership price does not exceed the separate-firm price";
    return "";
}

std::string criterion_jacobian() {
    std::mt19937_64 eng(11);
    std::uniform_int_distribution<int> j_dist(1, 5), r_dist(1, 50);
    std::uniform_real_distribution<double> delta_dist(-1.0, 2.0), alpha_dist(0.5, 2.0),
        cost_dist(0.5, 2.0), offset_dist(0.2, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        MixedLogitModel model;
        model.J = j_dist(eng);
        model.delta = Vector(model.J);
        model.costs = Vector(model.J);
        for (int j = 0; j < model.J; ++j) {
            model.delta[j] = delta_dist(eng);
            model.costs[j] = cost_dist(eng);
        }
        const int r = r_dist(eng);
        model.price_coefs = Vector(r);
        for (int i = 0; i < r; ++i) model.price_coefs[i] = alpha_dist(eng);
        model.ownership = Eigen::MatrixXd::Identity(model.J, model.J);

        Point p = model.costs;
        for (int j = 0; j < model.J; ++j) p[j] += offset_dist(eng);

        const Eigen::MatrixXd jac = share_jacobian(model, p);
        Eigen::MatrixXd fd(model.J, model.J);
        for (int l = 0; l < model.J; ++l) {
            const double h = 1e-5 * std::max(1.0, std::abs(p[l]));
            Point hi = p, lo = p;
            hi[l] += h;
            lo[l] -= h;
            fd.col(l) = (shares(model, hi).inside - shares(model, lo).inside) / (2.0 * h);
        }
        const double rel =
            (jac - fd).cwiseAbs().maxCoeff() / (jac.cwiseAbs().maxCoeff() + 1e-12);
        if (rel > 1e-6) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "trial %d: relative error %.3e > 1e-6", trial, rel);
            return buf;
        }
    }
    return "";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Table 1 reproduction (20 cells at printed precision)", 1000,
         [] { return criterion_tables(make_table1(), kTable1); }},
        {2, "Table 2 reproduction (16 cells at printed precision)", 1000,
         [] { return criterion_tables(make_table2(), kTable2); }},
        {3, "Table 3 reproduction (32 cells at printed precision)", 1000,
         [] { return criterion_tables(make_table3(), kTable3); }},
        {4, "L_k(n) sandwich grid (200 checks, 1e-12 relative slack)", 1000, criterion_sandwich},
        {5, "Exact MFM posterior within theorem bounds and above Table 3", 5000,
         criterion_mfm_exact_vs_bounds},
        {6, "Conditional Beta-Bernoulli calibration (KS at the 1% level)", 30000,
         criterion_posterior_calibration},
        {7, "Dirichlet aggregation block sums (KS at the 1% level)", 30000,
         criterion_dirichlet_aggregation},
        {8, "Double-well ground truth (1e4 restarts, binomial bands)", 60000, criterion_double_well},
        {9, "Mixed-logit monopoly oracle and merger comparison", 60000,
         criterion_monopoly_and_duopoly},
        {10, "Share Jacobian vs central finite differences (20 models)", 10000, criterion_jacobian},
        {11, "Theory-only results covered via criteria 8-9 (informational)", 1000,
         [] { return std::string(); }},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            failure = criterion.run();
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        if (failure.empty() && ms > criterion.budget_ms) {
            char over[64];
            std::snprintf(over, sizeof(over), "exceeded the %.0f ms runtime limit", criterion.budget_ms);
            failure = over;
        }
        if (failure.empty()) {
            std::printf("criterion %02d [PASS] %s (%.0f ms)\n", criterion.id,
                        criterion.title.c_str(), ms);
        } else {
            std::printf("criterion %02d [FAIL] %s (%.0f ms): %s\n", criterion.id,
                        criterion.title.c_str(), ms, failure.c_str());
            ++failures;
        }
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
