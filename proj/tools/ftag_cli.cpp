// ftag: experiment runner and code construction tool.
#include "ftag/experiments.hpp"
#include "ftag/polar.hpp"
#include "ftag/results.hpp"
#include "ftag/selftest.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <iostream>

using namespace ftag;
using namespace ftag::harness;

namespace {

int cmd_run(const std::string& config_path, const std::string& experiment, const std::vector<std::string>& sets,
            std::size_t workers, std::string out_dir)
{
    Config cfg;
    if (!config_path.empty())
        cfg = Config::from_file(config_path);
    if (!experiment.empty())
        cfg.set("experiment", experiment);
    for (const auto& s : sets)
        cfg.apply_override(s);
    if (!cfg.has("experiment"))
        throw ConfigError("give a config file or --experiment");

    const auto result = run_experiment(cfg, workers);
    if (out_dir.empty())
        out_dir = default_output_dir();
    const auto path = write_result(result, out_dir);
    fmt::print("{}: {} rows, {:.1f} s on {} worker(s) -> {}\n", result.manifest.experiment, result.rows.size(),
               result.manifest.wall_seconds, result.manifest.workers, path);
    return 0;
}

int cmd_construct(std::size_t n_e, std::size_t k_e, double sigma2, const std::string& method, bool show_rel)
{
    if (!(sigma2 > 0.0))
        throw ConfigError("--sigma2 must be positive");
    const auto m = polar::construction_from_string(method);
    const auto spec = m == polar::Construction::gaussian_approx
                          ? polar::construct_ga(n_e, k_e, sigma2)
                          : polar::construct_bhattacharyya(n_e, k_e, std::exp(-1.0 / (2.0 * sigma2)));
    fmt::print("{}\n", polar::format_golden_row(spec));
    if (show_rel)
        for (std::size_t i = 0; i < spec.n; ++i)
            fmt::print("{} {} {}\n", i, spec.frozen_mask[i] ? "frozen" : "info", format_number(spec.reliabilities[i]));
    return 0;
}

int cmd_list()
{
    for (const auto& e : catalog()) {
        fmt::print("{}\n  {}\n", e.id, e.description);
        for (const auto& [k, v] : e.defaults)
            fmt::print("    {} = {}\n", k, v);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Frozen-tag authentication simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(code_version));

    auto* run = app.add_subcommand("run", "Run a catalog experiment and write CSV + manifest");
    std::string config_path;
    std::string experiment;
    std::vector<std::string> sets;
    std::size_t workers = 0;
    std::string out_dir;
    run->add_option("config", config_path, "Config file (key = value lines)");
    run->add_option("--experiment,-e", experiment, "Experiment id (see 'list')");
    run->add_option("--set,-s", sets, "Override a key: key=value")->allow_extra_args(false);
    run->add_option("--workers,-j", workers, "Worker threads (0 = all cores)");
    run->add_option("--out,-o", out_dir, "Output directory (default $FTAG_OUTPUT_DIR or ./results)");

    auto* construct = app.add_subcommand("construct", "Construct a polar code and print its information set");
    std::size_t n_e = 0;
    std::size_t k_e = 0;
    double sigma2 = 1.0;
    std::string method = "ga";
    bool show_rel = false;
    construct->add_option("--Ne", n_e, "Code length")->required();
    construct->add_option("--Ke", k_e, "Information length")->required();
    construct->add_option("--sigma2", sigma2, "Design noise variance");
    construct->add_option("--method", method, "ga or bhattacharyya");
    construct->add_flag("--reliabilities", show_rel, "Also print per-index reliabilities");

    auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
    auto* list = app.add_subcommand("list", "List catalog experiments and their keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run)
            return cmd_run(config_path, experiment, sets, workers, out_dir);
        if (*construct)
            return cmd_construct(n_e, k_e, sigma2, method, show_rel);
        if (*selftest)
            return run_selftest(std::cout) == 0 ? 0 : 2;
        if (*list)
            return cmd_list();
    } catch (const ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return 1;
    } catch (const Error& e) {
        fmt::print(stderr, "invalid argument: {}\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 0;
}
