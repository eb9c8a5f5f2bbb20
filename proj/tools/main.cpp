#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "basin/pipeline.hpp"
#include "basin/tables.hpp"
#include "basin/validate.hpp"

namespace fs = std::filesystem;
using basin::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNotHn = 4;

void write_out(const fs::path& out_dir, const std::string& name, const std::string& text) {
    fs::create_directories(out_dir);
    basin::write_text_file((out_dir / name).string(), text);
}

int cmd_solve(const std::string& config_path, const std::string& out_dir, long n_override,
              std::uint64_t seed_override, bool seed_given, double eps_obs_override, int workers) {
    basin::RunManifest manifest = basin::manifest_from_json(basin::load_json_file(config_path));
    if (n_override > 0) manifest.n = n_override;
    if (seed_given) manifest.seed = seed_override;
    if (eps_obs_override > 0.0) manifest.eps_obs = eps_obs_override;

    const basin::SolveOutput output = basin::solve_manifest(manifest, workers);
    write_out(out_dir, "result.json", output.result.dump(2) + "\n");
    write_out(out_dir, "tally.csv", basin::tally_csv(output.tally));
    write_out(out_dir, "tally.json", basin::to_json(output.tally).dump(2) + "\n");
    std::cout << "wrote " << (fs::path(out_dir) / "result.json").string() << "\n";
    return kExitOk;
}

int cmd_infer(const std::string& tally_path, const std::string& prior_path, bool force,
              const std::string& out_dir) {
    const basin::OutcomeTally tally = basin::tally_from_json(basin::load_json_file(tally_path));
    basin::PriorsSpec priors;
    if (!prior_path.empty()) priors = basin::priors_from_json(basin::load_json_file(prior_path));
    const json report = basin::infer_from_tally(tally, priors, force);
    write_out(out_dir, "posteriors.json", report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_tables(const std::string& which, const std::string& out_dir) {
    std::vector<basin::PosteriorTable> tables;
    if (which == "all" || which == "table1") tables.push_back(basin::make_table1());
    if (which == "all" || which == "table2") tables.push_back(basin::make_table2());
    if (which == "all" || which == "table3") tables.push_back(basin::make_table3());
    if (tables.empty()) throw basin::ConfigError("tables: unknown selection '" + which + "'");
    for (const basin::PosteriorTable& table : tables) {
        write_out(out_dir, table.name + ".csv", basin::table_csv(table));
        write_out(out_dir, table.name + ".json", basin::table_json(table).dump(2) + "\n");
        std::cout << "wrote " << (fs::path(out_dir) / (table.name + ".csv")).string() << "\n";
    }
    return kExitOk;
}

int cmd_validate(std::uint64_t seed, const std::string& out_dir, bool inject_bug) {
    const basin::ValidationReport report = basin::run_validation(seed, inject_bug);
    const json j = basin::to_json(report);
    if (!out_dir.empty()) write_out(out_dir, "validation.json", j.dump(2) + "\n");
    for (const basin::SuiteResult& suite : report.suites)
        std::cout << (suite.passed ? "[PASS] " : "[FAIL] ") << suite.name << ": " << suite.detail
                  << "\n";
    return report.all_passed ? kExitOk : kExitValidation;
}

int cmd_calibrate(const std::string& tally_dir, const std::string& config_path,
                  const std::string& out_dir) {
    const json config = basin::load_json_file(config_path);
    std::vector<basin::OutcomeTally> tallies;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(tally_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files)
        tallies.push_back(basin::tally_from_json(basin::load_json_file(file.string())));
    if (tallies.empty()) throw basin::ConfigError("calibrate: no tally .json files in " + tally_dir);

    const std::string family_name = config.value("family", std::string("geometric"));
    basin::PkFamily family;
    if (family_name == "geometric") family = basin::PkFamily::Geometric;
    else if (family_name == "zt-poisson") family = basin::PkFamily::ZeroTruncatedPoisson;
    else throw basin::ConfigError("calibrate: family must be geometric or zt-poisson");
    if (!config.contains("theta_grid") || !config.contains("alpha_grid"))
        throw basin::ConfigError("calibrate: config requires theta_grid and alpha_grid");
    const auto theta_grid = config["theta_grid"].get<std::vector<double>>();
    const auto alpha_grid = config["alpha_grid"].get<std::vector<double>>();
    const int k_max = config.value("k_max", 200);

    const basin::CalibrationResult result =
        basin::empirical_bayes_calibrate(tallies, family, theta_grid, alpha_grid, k_max);

    json surface = json::array();
    for (std::size_t ti = 0; ti < theta_grid.size(); ++ti)
        for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai)
            surface.push_back(json{{"theta", theta_grid[ti]},
                                   {"alpha", alpha_grid[ai]},
                                   {"loglik", result.loglik[ti][ai]}});
    const json out{{"family", family_name},
                   {"theta_hat", result.theta_hat},
                   {"alpha_hat", result.alpha_hat},
                   {"instances", tallies.size()},
                   {"max_truncation_tail", result.max_truncation_tail},
                   {"surface", std::move(surface)}};
    write_out(out_dir, "calibration.json", out.dump(2) + "\n");
    std::cout << "theta_hat=" << result.theta_hat << " alpha_hat=" << result.alpha_hat << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-restart solver runs with Bayesian inference on basin sizes and uniqueness"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", tally_path, tally_dir, which = "all";
    long n_override = 0;
    std::uint64_t seed = 0;
    double eps_obs = 0.0;
    int workers = 0;
    bool force = false, inject_bug = false;

    CLI::App* solve = app.add_subcommand("solve", "Run a solver manifest and write result + tally");
    solve->add_option("--config", config_path, "Run manifest JSON")->required();
    solve->add_option("--out", out_dir, "Output directory");
    solve->add_option("--n", n_override, "Override restart count");
    CLI::Option* seed_opt = solve->add_option("--seed", seed, "Override base seed");
    solve->add_option("--eps-obs", eps_obs, "Override identification tolerance");
    solve->add_option("--workers", workers, "Worker threads (0 = auto)")
        ->envname("BASIN_INFER_WORKERS");

    CLI::App* infer = app.add_subcommand("infer", "Posterior report from a tally file");
    infer->add_option("tally", tally_path, "Tally JSON file")->required();
    infer->add_option("--config", config_path, "Prior spec JSON");
    infer->add_flag("--force", force, "Condition on H_n even if the tally violates it");
    infer->add_option("--out", out_dir, "Output directory");

    CLI::App* tables = app.add_subcommand("tables", "Reproduce the posterior tables as CSV");
    tables->add_option("--which", which, "all | table1 | table2 | table3");
    tables->add_option("--out", out_dir, "Output directory");

    CLI::App* validate = app.add_subcommand("validate", "Run the Monte Carlo oracle suites");
    validate->add_option("--seed", seed, "Suite seed");
    validate->add_option("--out", out_dir, "Output directory (optional report)");
    validate->add_flag("--inject-bug", inject_bug, "Negative control: corrupt the sandwich check")
        ->group("");  // hidden test fixture

    CLI::App* calibrate = app.add_subcommand("calibrate", "Empirical-Bayes fit over a tally directory");
    calibrate->add_option("dir", tally_dir, "Directory of tally JSON files")->required();
    calibrate->add_option("--config", config_path, "Calibration grid JSON")->required();
    calibrate->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (solve->parsed())
            return cmd_solve(config_path, out_dir, n_override, seed, seed_opt->count() > 0, eps_obs,
                             workers);
        if (infer->parsed()) return cmd_infer(tally_path, config_path, force, out_dir);
        if (tables->parsed()) return cmd_tables(which, out_dir);
        if (validate->parsed()) return cmd_validate(seed, out_dir, inject_bug);
        if (calibrate->parsed()) return cmd_calibrate(tally_dir, config_path, out_dir);
    } catch (const basin::NotHnError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotHn;
    } catch (const basin::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
