#include <fsuq/runner.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using fsuq::RunConfig;

// flag name -> copies the flag-parsed value over a config-file value, so
// anything typed on the command line wins
const std::vector<std::pair<const char*, std::function<void(RunConfig&, const RunConfig&)>>>
    kFlagOverrides = {
        {"--seed", [](RunConfig& d, const RunConfig& s) { d.seed = s.seed; }},
        {"--alphas", [](RunConfig& d, const RunConfig& s) { d.alphas = s.alphas; }},
        {"--ms", [](RunConfig& d, const RunConfig& s) { d.ms = s.ms; }},
        {"--mf", [](RunConfig& d, const RunConfig& s) { d.mf = s.mf; }},
        {"--nh", [](RunConfig& d, const RunConfig& s) { d.nh = s.nh; }},
        {"--interaction",
         [](RunConfig& d, const RunConfig& s) { d.interaction = s.interaction; }},
        {"--out", [](RunConfig& d, const RunConfig& s) { d.out = s.out; }},
        {"--workers", [](RunConfig& d, const RunConfig& s) { d.workers = s.workers; }},
        {"--u-cr", [](RunConfig& d, const RunConfig& s) { d.u_cr = s.u_cr; }},
        {"--kl-fraction",
         [](RunConfig& d, const RunConfig& s) { d.kl_fraction = s.kl_fraction; }},
        {"--kl-points",
         [](RunConfig& d, const RunConfig& s) { d.kl_points = s.kl_points; }},
        {"--window-um",
         [](RunConfig& d, const RunConfig& s) { d.window_um = s.window_um; }},
        {"--input", [](RunConfig& d, const RunConfig& s) { d.input = s.input; }},
        {"--map", [](RunConfig& d, const RunConfig& s) { d.map = s.map; }},
        {"--bins", [](RunConfig& d, const RunConfig& s) { d.bins = s.bins; }},
        {"--stations", [](RunConfig& d, const RunConfig& s) { d.stations = s.stations; }},
        {"--cdf-points",
         [](RunConfig& d, const RunConfig& s) { d.cdf_points = s.cdf_points; }},
};

void add_options(CLI::App* sub, RunConfig& cfg, std::string& config_path) {
    sub->add_option("--seed", cfg.seed, "rng seed for every random draw");
    sub->add_option("--alphas", cfg.alphas,
                    "membership levels; must include 0 and 1")
        ->delimiter(',');
    sub->add_option("--ms", cfg.ms, "Monte Carlo sample count per cut point");
    sub->add_option("--mf", cfg.mf, "cut point budget per level");
    sub->add_option("--nh", cfg.nh, "quadrature cells (0 = command default)");
    sub->add_option("--interaction", cfg.interaction, "non | full | both");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--config", config_path,
                    "JSON config file; explicit flags override its values");
    sub->add_option("--workers", cfg.workers, "worker threads");
    sub->add_option("--u-cr", cfg.u_cr, "displacement threshold for the failure study");
    sub->add_option("--kl-fraction", cfg.kl_fraction,
                    "retained variance for the field truncation");
    sub->add_option("--kl-points", cfg.kl_points, "field grid cells");
    sub->add_option("--window-um", cfg.window_um,
                    "field window length in micrometers");
    sub->add_option("--input", cfg.input, "input file (cut table, values, or pgm)");
    sub->add_option("--map", cfg.map, "extend map: identity | square | negate | exp");
    sub->add_option("--bins", cfg.bins, "histogram bins for membership fitting");
    sub->add_option("--stations", cfg.stations, "field stations near the loaded end");
    sub->add_option("--cdf-points", cfg.cdf_points, "CDF evaluation grid size");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzy-stochastic uncertainty toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_subcommand("example1",
                       "fuzzy mean, displacement field, and CDF study of the "
                       "lognormal two-meter bar");
    app.add_subcommand("example2",
                       "displacement field, CDF, and failure study of the "
                       "composite micro bar");
    app.add_subcommand("extend", "push a cut table through a named scalar map");
    app.add_subcommand("fit", "fit a membership function to a column of values");
    app.add_subcommand("ingest",
                       "coarsen a fiber map into bar samples and moment memberships");
    app.add_subcommand("kl-info",
                       "report the field truncation order for a retained-variance "
                       "target");
    for (CLI::App* sub : app.get_subcommands({}))
        add_options(sub, cfg, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    RunConfig resolved = cfg;
    if (!config_path.empty()) {
        try {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
            resolved = fsuq::run_config_from_json(nlohmann::json::parse(in), RunConfig{});
            for (const auto& [flag, apply] : kFlagOverrides)
                if (sub->count(flag) > 0) apply(resolved, cfg);
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "config error: " << config_path << " is not valid JSON: "
                      << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }

    return fsuq::run_command(sub->get_name(), resolved, std::cout);
}
