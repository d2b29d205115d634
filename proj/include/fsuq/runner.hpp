#pragma once

#include <fsuq/fuzzy_variable.hpp>

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fsuq {

// One knob set shared by every command; each command reads the subset it
// needs.  nh = 0 means "use the command's default mesh".  The cut point
// budget mf counts points along a chain; box cuts get round(mf^(1/d))
// points per axis so the total stays near mf regardless of dimension.
struct RunConfig {
    std::uint64_t seed = 2024;
    std::vector<double> alphas;        // empty -> default_levels()
    int ms = 10000;
    int mf = 181;
    int nh = 0;
    std::string interaction = "full";  // non | full | both
    std::string out = "fsuq-out";
    int workers = 1;

    double u_cr = 6.9e-5;       // displacement threshold for the failure study
    double kl_fraction = 0.9;   // retained variance for the truncation order
    int kl_points = 100;        // field grid cells
    double window_um = 1000.0;  // field window length in micrometers

    std::string input;           // cut table / value column / pixel map path
    std::string map = "identity";  // extend: identity | square | negate | exp
    int bins = 20;               // histogram bins for membership fitting
    int stations = 11;           // bar-end field stations (lognormal study)
    int cdf_points = 41;         // evaluation grid size for CDF envelopes
};

// applies the known keys of `j` onto `base`; unknown keys or wrong types
// are config errors
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base);
nlohmann::json config_to_json(const RunConfig& config);

// Command bodies behind the CLI, callable in-process.  Each validates its
// config, writes its data files plus run_report.json under config.out, and
// returns the process exit code: 0 ok, 2 bad config, 3 numerical failure.
int run_example1(const RunConfig& config, std::ostream& log);
int run_example2(const RunConfig& config, std::ostream& log);
int run_extend(const RunConfig& config, std::ostream& log);
int run_fit(const RunConfig& config, std::ostream& log);
int run_ingest(const RunConfig& config, std::ostream& log);
int run_kl_info(const RunConfig& config, std::ostream& log);

// name -> command body, or exit 2 on an unknown name
int run_command(const std::string& name, const RunConfig& config, std::ostream& log);

}  // namespace fsuq
