#include "basin/restarts.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace basin {

std::vector<RestartRecord> run_restarts(const Solver& solver, const InitialSampler& sampler,
                                        const ConvexDomain& domain, long n, std::uint64_t base_seed,
                                        int workers) {
    if (n < 1) throw std::invalid_argument("run_restarts: n must be >= 1");
    const InitialSampler seeded = sampler.with_seed(base_seed);
    seeded.validate_support(domain);

    std::vector<RestartRecord> records(static_cast<std::size_t>(n));

    int w = workers;
    if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    if (static_cast<long>(w) > n) w = static_cast<int>(n);

    auto run_index = [&](long i) {
        RestartRecord& rec = records[static_cast<std::size_t>(i)];
        rec.index = i;
        rec.x0 = seeded.sample(domain, static_cast<std::uint64_t>(i));
        rec.outcome = solver(rec.x0);
    };

    if (w == 1) {
        for (long i = 0; i < n; ++i) run_index(i);
        return records;
    }

    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                run_index(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return records;
}

OutcomeTally identify_outcomes(const std::vector<RestartRecord>& records, double eps_obs) {
    if (!(eps_obs > 0.0)) throw std::invalid_argument("identify_outcomes: eps_obs must be positive");
    OutcomeTally tally;
    tally.n = static_cast<long>(records.size());
    tally.eps_obs = eps_obs;
    for (const RestartRecord& rec : records) {
        if (!rec.outcome.converged) {
            ++tally.dagger_count;
            continue;
        }
        const Point& y = rec.outcome.point;
        bool placed = false;
        for (OutcomeCluster& cluster : tally.clusters) {
            const double dist = (y - cluster.representative).lpNorm<Eigen::Infinity>();
            if (dist <= eps_obs) {
                ++cluster.count;
                if (dist > cluster.max_within_cluster_distance) cluster.max_within_cluster_distance = dist;
                placed = true;
                break;
            }
        }
        if (!placed) {
            OutcomeCluster cluster;
            cluster.representative = y;
            cluster.count = 1;
            tally.clusters.push_back(std::move(cluster));
        }
    }
    return tally;
}

HnReport check_hn(const OutcomeTally& tally) {
    if (tally.n < 1) throw std::invalid_argument("check_hn: tally.n must be >= 1");
    HnReport report;
    report.n = tally.n;
    report.holds = tally.dagger_count == 0 && tally.clusters.size() == 1 &&
                   tally.clusters.front().count == tally.n;
    if (report.holds) report.rts = tally.clusters.front().representative;
    return report;
}

std::vector<std::pair<Point, double>> empirical_basin_fractions(const OutcomeTally& tally) {
    if (tally.n < 1) throw std::invalid_argument("empirical_basin_fractions: tally.n must be >= 1");
    std::vector<std::pair<Point, double>> fractions;
    fractions.reserve(tally.clusters.size());
    for (const OutcomeCluster& cluster : tally.clusters)
        fractions.emplace_back(cluster.representative,
                               static_cast<double>(cluster.count) / static_cast<double>(tally.n));
    return fractions;
}

}  // namespace basin
