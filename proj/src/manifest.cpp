#include "basin/manifest.hpp"

#include <fstream>

namespace basin {

namespace {

json vec_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vec_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const json& item : j) {
        if (!item.is_number()) throw ConfigError(std::string(what) + ": expected an array of numbers");
        v[i++] = item.get<double>();
    }
    return v;
}

const json& need(const json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(context) + ": missing required field '" + key + "'");
    return *it;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

}  // namespace

json to_json(const ConvexDomain& domain) {
    json j;
    j["dim"] = domain.dim();
    switch (domain.kind()) {
        case DomainKind::Box:
            j["kind"] = "box";
            j["lower"] = vec_to_json(domain.lower());
            j["upper"] = vec_to_json(domain.upper());
            break;
        case DomainKind::Ball:
            j["kind"] = "ball";
            j["center"] = vec_to_json(domain.center());
            j["radius"] = domain.radius();
            break;
        case DomainKind::All:
            j["kind"] = "all";
            break;
    }
    return j;
}

ConvexDomain domain_from_json(const json& j) {
    const std::string kind = need(j, "kind", "domain").get<std::string>();
    if (kind == "box")
        return ConvexDomain::box(vec_from_json(need(j, "lower", "domain"), "domain.lower"),
                                 vec_from_json(need(j, "upper", "domain"), "domain.upper"));
    if (kind == "ball")
        return ConvexDomain::ball(vec_from_json(need(j, "center", "domain"), "domain.center"),
                                  need(j, "radius", "domain").get<double>());
    if (kind == "all") return ConvexDomain::all(need(j, "dim", "domain").get<int>());
    throw ConfigError("domain: unknown kind '" + kind + "' (expected box, ball, or all)");
}

json to_json(const SolverConfig& cfg) {
    return json{{"h", cfg.h},
                {"residual_tol", cfg.residual_tol},
                {"stall_window", cfg.stall_window},
                {"max_steps", cfg.max_steps},
                {"blowup_norm", cfg.blowup_norm}};
}

SolverConfig solver_config_from_json(const json& j) {
    SolverConfig cfg;
    cfg.h = need(j, "h", "solver").get<double>();
    cfg.residual_tol = get_or(j, "residual_tol", cfg.residual_tol);
    cfg.stall_window = get_or(j, "stall_window", cfg.stall_window);
    cfg.max_steps = get_or(j, "max_steps", cfg.max_steps);
    cfg.blowup_norm = get_or(j, "blowup_norm", cfg.blowup_norm);
    cfg.validate();
    return cfg;
}

json to_json(const InitialSampler& sampler) {
    json j;
    j["seed"] = sampler.seed;
    if (sampler.kind == SamplerKind::UniformOnDomain) {
        j["kind"] = "uniform";
    } else {
        j["kind"] = "uniform-box";
        j["lower"] = vec_to_json(sampler.box_lower);
        j["upper"] = vec_to_json(sampler.box_upper);
    }
    return j;
}

InitialSampler sampler_from_json(const json& j) {
    const std::string kind = get_or<std::string>(j, "kind", "uniform");
    const std::uint64_t seed = get_or<std::uint64_t>(j, "seed", 0);
    if (kind == "uniform") return InitialSampler::uniform(seed);
    if (kind == "uniform-box")
        return InitialSampler::uniform_on_box(vec_from_json(need(j, "lower", "sampler"), "sampler.lower"),
                                              vec_from_json(need(j, "upper", "sampler"), "sampler.upper"),
                                              seed);
    throw ConfigError("sampler: unknown kind '" + kind + "' (expected uniform or uniform-box)");
}

json to_json(const TerminalOutcome& outcome) {
    json j;
    j["steps"] = outcome.steps;
    if (outcome.converged) {
        j["status"] = "converged";
        j["point"] = vec_to_json(outcome.point);
        j["residual"] = outcome.residual;
    } else {
        j["status"] = "dagger";
        switch (outcome.reason) {
            case DaggerReason::MaxSteps: j["reason"] = "max-steps"; break;
            case DaggerReason::Blowup: j["reason"] = "blowup"; break;
            case DaggerReason::NonFinite: j["reason"] = "non-finite"; break;
        }
    }
    return j;
}

json to_json(const RestartRecord& record) {
    json j;
    j["index"] = record.index;
    j["x0"] = vec_to_json(record.x0);
    j["outcome"] = to_json(record.outcome);
    return j;
}

json to_json(const OutcomeTally& tally) {
    json clusters = json::array();
    for (const OutcomeCluster& cluster : tally.clusters)
        clusters.push_back(json{{"representative", vec_to_json(cluster.representative)},
                                {"count", cluster.count},
                                {"max_within_cluster_distance", cluster.max_within_cluster_distance}});
    json j{{"n", tally.n},
           {"eps_obs", tally.eps_obs},
           {"dagger_count", tally.dagger_count},
           {"clusters", std::move(clusters)}};
    j["hn"] = to_json(check_hn(tally));
    return j;
}

OutcomeTally tally_from_json(const json& j) {
    OutcomeTally tally;
    tally.n = need(j, "n", "tally").get<long>();
    tally.eps_obs = need(j, "eps_obs", "tally").get<double>();
    tally.dagger_count = get_or<long>(j, "dagger_count", 0);
    long counted = tally.dagger_count;
    for (const json& cj : need(j, "clusters", "tally")) {
        OutcomeCluster cluster;
        cluster.representative = vec_from_json(need(cj, "representative", "tally.cluster"),
                                               "tally.cluster.representative");
        cluster.count = need(cj, "count", "tally.cluster").get<long>();
        cluster.max_within_cluster_distance = get_or(cj, "max_within_cluster_distance", 0.0);
        counted += cluster.count;
        tally.clusters.push_back(std::move(cluster));
    }
    if (counted != tally.n)
        throw ConfigError("tally: cluster counts plus dagger_count must sum to n");
    return tally;
}

json to_json(const HnReport& report) {
    json j{{"holds", report.holds}, {"n", report.n}};
    if (report.rts) j["rts"] = vec_to_json(*report.rts);
    return j;
}

json to_json(const BetaParams& params) { return json{{"alpha", params.alpha}, {"beta", params.beta}}; }

BetaParams beta_params_from_json(const json& j) {
    BetaParams params;
    params.alpha = get_or(j, "alpha", 1.0);
    params.beta = get_or(j, "beta", 1.0);
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("priors: ") + e.what());
    }
    return params;
}

json to_json(const PriorsSpec& priors) {
    json mfm{{"alpha", priors.mfm.alpha}, {"k_max", priors.mfm.k_max}};
    switch (priors.mfm.family) {
        case PkFamily::Geometric:
            mfm["family"] = "geometric";
            mfm["theta"] = priors.mfm.theta;
            break;
        case PkFamily::ZeroTruncatedPoisson:
            mfm["family"] = "zt-poisson";
            mfm["theta"] = priors.mfm.theta;
            break;
        case PkFamily::CustomPmf:
            mfm["family"] = "custom";
            mfm["pmf"] = priors.mfm.custom_pmf;
            break;
    }
    return json{{"beta", to_json(priors.basin)},
                {"eps_grid", priors.eps_grid},
                {"spike_slab", json{{"p", priors.spike_slab.p_spike}, {"slab", to_json(priors.spike_slab.slab)}}},
                {"mfm", std::move(mfm)}};
}

PriorsSpec priors_from_json(const json& j) {
    PriorsSpec priors;
    if (j.contains("beta")) priors.basin = beta_params_from_json(j["beta"]);
    if (j.contains("eps_grid")) {
        priors.eps_grid.clear();
        for (const json& e : j["eps_grid"]) priors.eps_grid.push_back(e.get<double>());
    }
    if (j.contains("spike_slab")) {
        const json& ss = j["spike_slab"];
        priors.spike_slab.p_spike = get_or(ss, "p", 0.5);
        if (ss.contains("slab")) priors.spike_slab.slab = beta_params_from_json(ss["slab"]);
    }
    if (j.contains("mfm")) {
        const json& m = j["mfm"];
        const std::string family = get_or<std::string>(m, "family", "geometric");
        if (family == "geometric") priors.mfm.family = PkFamily::Geometric;
        else if (family == "zt-poisson") priors.mfm.family = PkFamily::ZeroTruncatedPoisson;
        else if (family == "custom") priors.mfm.family = PkFamily::CustomPmf;
        else throw ConfigError("priors.mfm: unknown family '" + family + "'");
        priors.mfm.theta = get_or(m, "theta", priors.mfm.theta);
        priors.mfm.alpha = get_or(m, "alpha", priors.mfm.alpha);
        priors.mfm.k_max = get_or(m, "k_max", priors.mfm.k_max);
        if (m.contains("pmf")) priors.mfm.custom_pmf = m["pmf"].get<std::vector<double>>();
    }
    try {
        priors.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("priors: ") + e.what());
    }
    return priors;
}

json to_json(const HnPosteriors& posteriors) {
    json tails = json::array();
    for (const BasinTailEntry& entry : posteriors.basin_tails) {
        json t{{"eps", entry.eps},
               {"tail", entry.tail},
               {"complement", entry.complement},
               {"bound_beta", entry.bound_beta}};
        if (entry.bound_poly) t["bound_poly"] = *entry.bound_poly;
        if (entry.bound_poly_exp) t["bound_poly_exp"] = *entry.bound_poly_exp;
        tails.push_back(std::move(t));
    }
    json mfm{{"posterior_k1", posteriors.mfm_k1.exact_value},
             {"truncation_tail", posteriors.mfm_truncation_tail}};
    if (posteriors.mfm_k1.lower_bound) mfm["k1_lower"] = *posteriors.mfm_k1.lower_bound;
    if (posteriors.mfm_k1.upper_bound) mfm["k1_upper"] = *posteriors.mfm_k1.upper_bound;
    return json{{"n", posteriors.n},
                {"basin", json{{"prior", to_json(posteriors.basin_prior)},
                               {"posterior", to_json(posteriors.basin_posterior)},
                               {"tails", std::move(tails)}}},
                {"spike_slab", json{{"posterior_uniqueness", posteriors.spike_slab.exact_value}}},
                {"mfm", std::move(mfm)}};
}

json to_json(const MixedLogitModel& model) {
    json ownership = json::array();
    for (int j = 0; j < model.J; ++j) {
        json row = json::array();
        for (int l = 0; l < model.J; ++l) row.push_back(model.ownership(j, l));
        ownership.push_back(std::move(row));
    }
    return json{{"J", model.J},
                {"delta", vec_to_json(model.delta)},
                {"price_coefs", vec_to_json(model.price_coefs)},
                {"ownership", std::move(ownership)},
                {"costs", vec_to_json(model.costs)}};
}

MixedLogitModel model_from_json(const json& j) {
    MixedLogitModel model;
    model.J = need(j, "J", "model").get<int>();
    model.delta = vec_from_json(need(j, "delta", "model"), "model.delta");
    model.price_coefs = vec_from_json(need(j, "price_coefs", "model"), "model.price_coefs");
    model.costs = vec_from_json(need(j, "costs", "model"), "model.costs");
    const json& rows = need(j, "ownership", "model");
    if (!rows.is_array() || static_cast<int>(rows.size()) != model.J)
        throw ConfigError("model.ownership: expected a J x J matrix");
    model.ownership.resize(model.J, model.J);
    for (int r = 0; r < model.J; ++r) {
        const Vector row = vec_from_json(rows[static_cast<std::size_t>(r)], "model.ownership row");
        if (row.size() != model.J) throw ConfigError("model.ownership: expected a J x J matrix");
        model.ownership.row(r) = row;
    }
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    return model;
}

json to_json(const EquilibriumResult& result) {
    json j;
    j["all_dagger"] = result.all_dagger;
    j["tally"] = to_json(result.tally);
    j["hn"] = to_json(result.hn);
    if (!result.all_dagger) {
        j["price"] = vec_to_json(result.price);
        j["inside_shares"] = vec_to_json(result.inside_shares);
        j["outside_share"] = result.outside_share;
        j["foc_residual"] = result.foc_residual;
        j["cluster_foc_residuals"] = result.cluster_foc_residuals;
    }
    if (result.posteriors) j["posteriors"] = to_json(*result.posteriors);
    return j;
}

RunManifest manifest_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("manifest: expected a JSON object");
    RunManifest m;
    m.schema_version = get_or(j, "schema_version", 1);
    if (m.schema_version != 1) throw ConfigError("manifest: unsupported schema_version");
    m.field_spec = need(j, "field", "manifest");
    if (!m.field_spec.contains("kind")) throw ConfigError("manifest.field: missing required field 'kind'");
    if (j.contains("domain")) m.domain = domain_from_json(j["domain"]);
    if (j.contains("solver")) m.solver = solver_config_from_json(j["solver"]);
    m.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (j.contains("sampler")) m.sampler = sampler_from_json(j["sampler"]);
    m.n = need(j, "n", "manifest").get<long>();
    if (m.n < 1) throw ConfigError("manifest: n must be >= 1");
    m.eps_obs = get_or(j, "eps_obs", 0.0);
    m.store_records = get_or(j, "store_records", false);
    if (j.contains("priors")) {
        m.priors = priors_from_json(j["priors"]);
        m.has_priors = true;
    }
    return m;
}

json to_json(const RunManifest& manifest) {
    json j;
    j["schema_version"] = manifest.schema_version;
    if (manifest.domain) j["domain"] = to_json(*manifest.domain);
    j["field"] = manifest.field_spec;
    if (manifest.solver) j["solver"] = to_json(*manifest.solver);
    j["seed"] = manifest.seed;
    if (manifest.sampler) j["sampler"] = to_json(*manifest.sampler);
    j["n"] = manifest.n;
    if (manifest.eps_obs > 0.0) j["eps_obs"] = manifest.eps_obs;
    if (manifest.store_records) j["store_records"] = true;
    if (manifest.has_priors) j["priors"] = to_json(manifest.priors);
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

}  // namespace basin
