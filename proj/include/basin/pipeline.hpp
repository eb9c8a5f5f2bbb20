#pragma once

#include "basin/manifest.hpp"

namespace basin {

struct SolveOutput {
    json result;
    OutcomeTally tally;
};

/// Runs the manifest end to end: equilibrium pipeline for blp fields, the
/// generic restart pipeline otherwise. The result JSON embeds the manifest
/// so the run is replayable; only the timestamp field varies between
/// replays.
SolveOutput solve_manifest(const RunManifest& manifest, int workers = 0);

/// Posterior report conditioned on H_n. Throws NotHnError when the tally
/// does not satisfy H_n unless force is set.
json infer_from_tally(const OutcomeTally& tally, const PriorsSpec& priors, bool force);

/// One row per cluster: representative coords, count, fraction.
std::string tally_csv(const OutcomeTally& tally);

std::string utc_timestamp();

}  // namespace basin
