#include "basin/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "basin/problems.hpp"
#include "basin/tables.hpp"

namespace basin {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SolveOutput solve_manifest(const RunManifest& manifest, int workers) {
    const std::string kind = manifest.field_spec.at("kind").get<std::string>();
    SolveOutput out;
    json& result = out.result;
    result["schema_version"] = manifest.schema_version;
    result["manifest"] = to_json(manifest);

    if (kind == "blp") {
        if (!manifest.field_spec.contains("model"))
            throw ConfigError("manifest.field: blp requires a 'model' section");
        const MixedLogitModel model = model_from_json(manifest.field_spec["model"]);
        EquilibriumOptions options;
        options.n_restarts = manifest.n;
        options.seed = manifest.seed;
        options.solver = manifest.solver;
        options.eps_obs = manifest.eps_obs;
        options.margin_cap = manifest.field_spec.value("margin_cap", 50.0);
        options.priors = manifest.priors;
        options.workers = workers;
        const EquilibriumResult eq = equilibrium_pipeline(model, options);
        result["kind"] = "blp";
        result["result"] = to_json(eq);
        out.tally = eq.tally;
        result["timestamp"] = utc_timestamp();
        return out;
    }

    if (!manifest.domain)
        throw ConfigError("manifest: field kind '" + kind + "' requires a 'domain' section");
    const ConvexDomain& domain = *manifest.domain;
    const ProblemField problem = make_named_field(manifest.field_spec);
    if (problem.dim != domain.dim())
        throw ConfigError("manifest: field dimension " + std::to_string(problem.dim) +
                          " does not match domain dimension " + std::to_string(domain.dim()));
    const SolverConfig cfg = manifest.solver.value_or(SolverConfig::defaults_for(domain));
    const InitialSampler sampler = manifest.sampler.value_or(InitialSampler::uniform(manifest.seed));
    const double eps_obs = manifest.eps_obs > 0.0 ? manifest.eps_obs : 1e-6 * domain.diameter_hint();

    const Solver solver = solver_from(domain, problem.field, cfg);
    const std::vector<RestartRecord> records =
        run_restarts(solver, sampler, domain, manifest.n, manifest.seed, workers);
    out.tally = identify_outcomes(records, eps_obs);
    const HnReport hn = check_hn(out.tally);

    result["kind"] = "generic";
    if (manifest.store_records) {
        json recs = json::array();
        for (const RestartRecord& record : records) recs.push_back(to_json(record));
        result["records"] = std::move(recs);
    }
    result["solver"] = to_json(cfg);
    result["tally"] = to_json(out.tally);
    result["hn"] = to_json(hn);
    json fractions = json::array();
    for (const auto& [rep, fraction] : empirical_basin_fractions(out.tally)) {
        json f;
        f["fraction"] = fraction;
        json coords = json::array();
        for (Eigen::Index i = 0; i < rep.size(); ++i) coords.push_back(rep[i]);
        f["representative"] = std::move(coords);
        fractions.push_back(std::move(f));
    }
    result["fractions"] = std::move(fractions);
    if (manifest.has_priors && hn.holds)
        result["posteriors"] = to_json(compute_hn_posteriors(manifest.priors, out.tally.n));
    result["timestamp"] = utc_timestamp();
    return out;
}

json infer_from_tally(const OutcomeTally& tally, const PriorsSpec& priors, bool force) {
    const HnReport hn = check_hn(tally);
    if (!hn.holds && !force)
        throw NotHnError(
            "tally does not satisfy H_n (the posteriors condition on all runs reaching one outcome); "
            "pass --force to condition on n anyway");
    json report;
    report["hn"] = to_json(hn);
    report["forced"] = !hn.holds;
    report["posteriors"] = to_json(compute_hn_posteriors(priors, tally.n));
    return report;
}

std::string tally_csv(const OutcomeTally& tally) {
    std::vector<std::vector<std::string>> cells;
    const int dim = tally.clusters.empty() ? 0 : static_cast<int>(tally.clusters.front().representative.size());
    std::vector<std::string> header;
    for (int i = 0; i < dim; ++i) header.push_back("rep_" + std::to_string(i));
    header.emplace_back("count");
    header.emplace_back("fraction");
    cells.push_back(std::move(header));
    char buf[40];
    for (const OutcomeCluster& cluster : tally.clusters) {
        std::vector<std::string> row;
        for (int i = 0; i < dim; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", cluster.representative[i]);
            row.emplace_back(buf);
        }
        row.push_back(std::to_string(cluster.count));
        std::snprintf(buf, sizeof(buf), "%.17g",
                      static_cast<double>(cluster.count) / static_cast<double>(tally.n));
        row.emplace_back(buf);
        cells.push_back(std::move(row));
    }
    return emit_csv(cells);
}

}  // namespace basin
