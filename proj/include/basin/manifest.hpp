#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "basin/blp.hpp"
#include "basin/report.hpp"
#include "basin/restarts.hpp"

namespace basin {

using json = nlohmann::json;

/// Bad or missing configuration; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conditioning event violated: the tally does not satisfy H_n and --force
/// was not given; the CLI maps this to exit code 4.
struct NotHnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json to_json(const ConvexDomain& domain);
ConvexDomain domain_from_json(const json& j);

json to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const json& j);

json to_json(const InitialSampler& sampler);
InitialSampler sampler_from_json(const json& j);

json to_json(const TerminalOutcome& outcome);
json to_json(const RestartRecord& record);

json to_json(const OutcomeTally& tally);
OutcomeTally tally_from_json(const json& j);

json to_json(const HnReport& report);

json to_json(const BetaParams& params);
BetaParams beta_params_from_json(const json& j);

json to_json(const PriorsSpec& priors);
PriorsSpec priors_from_json(const json& j);

json to_json(const HnPosteriors& posteriors);

json to_json(const MixedLogitModel& model);
MixedLogitModel model_from_json(const json& j);

json to_json(const EquilibriumResult& result);

/// Everything needed to replay a run: domain, field descriptor, solver
/// config, sampler seed, n and the observation tolerance.
struct RunManifest {
    int schema_version = 1;
    std::optional<ConvexDomain> domain;  // omitted for blp fields (derived from costs)
    json field_spec;                     // {"kind": ..., ...}
    std::optional<SolverConfig> solver;
    std::uint64_t seed = 0;
    std::optional<InitialSampler> sampler;
    long n = 100;
    double eps_obs = 0.0;  // <= 0 selects the 1e-6 * diameter default
    PriorsSpec priors;
    bool has_priors = false;
    bool store_records = false;  // embed per-restart records in the result
};

RunManifest manifest_from_json(const json& j);
json to_json(const RunManifest& manifest);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace basin
