#include <fsuq/runner.hpp>

#include <fsuq/data_pipeline.hpp>
#include <fsuq/elliptic.hpp>
#include <fsuq/extension.hpp>
#include <fsuq/io.hpp>
#include <fsuq/parallel.hpp>
#include <fsuq/sampler.hpp>
#include <fsuq/stochastic_field.hpp>
#include <fsuq/translation.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fsuq {

namespace fs = std::filesystem;

namespace {

// Membership vertices of the four compliance moments (mean, std, skewness,
// excess kurtosis) measured on the coarsened composite bars, ten vertices
// each across the five working levels.
const std::array<std::vector<double>, 4> kMomentVertices = {{
    {0.1222, 0.1249, 0.1277, 0.1304, 0.1330, 0.1360, 0.1388, 0.1445, 0.1502, 0.1559},
    {0.0200, 0.0217, 0.0236, 0.0236, 0.0285, 0.0345, 0.0360, 0.0360, 0.0408, 0.0430},
    {0.0, 0.25, 0.50, 0.75, 1.00, 1.20, 1.25, 1.50, 1.75, 2.00},
    {-1.00, -0.55, -0.20, 0.0, 0.50, 1.00, 1.50, 2.00, 3.30, 4.50},
}};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void validate_common(const RunConfig& c) {
    if (c.ms < 1) throw std::invalid_argument("ms must be at least 1");
    if (c.mf < 2) throw std::invalid_argument("mf must be at least 2");
    if (c.nh < 0) throw std::invalid_argument("nh must be nonnegative");
    if (c.workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (c.out.empty()) throw std::invalid_argument("output directory must be set");
}

std::vector<double> resolved_levels(const RunConfig& c) {
    std::vector<double> levels = c.alphas.empty() ? default_levels() : c.alphas;
    for (double a : levels)
        if (!std::isfinite(a) || a < 0.0 || a > 1.0)
            throw std::invalid_argument("alpha levels must lie in [0, 1]");
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.front() != 0.0 || levels.back() != 1.0)
        throw std::invalid_argument("alpha levels must include 0 and 1");
    return levels;
}

std::vector<Interaction> resolved_modes(const std::string& name) {
    if (name == "non") return {Interaction::NonInteractive};
    if (name == "full") return {Interaction::FullyInteractivePolygonal};
    if (name == "both")
        return {Interaction::NonInteractive, Interaction::FullyInteractivePolygonal};
    throw std::invalid_argument("interaction must be one of non, full, both");
}

const char* mode_tag(Interaction mode) {
    return mode == Interaction::NonInteractive ? "non" : "full";
}

// mf counts cut points along a chain; a box cut gets mf^(1/d) per axis so
// the tensor grid stays near the same total budget
int cut_resolution(const FuzzyVector& fvec, int m_f) {
    if (fvec.mode() == Interaction::NonInteractive && fvec.dim() > 1) {
        double per_axis = std::pow(static_cast<double>(m_f), 1.0 / fvec.dim());
        return std::max(2, static_cast<int>(std::llround(per_axis)));
    }
    return m_f;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1.0);
    xs.back() = hi;
    return xs;
}

std::string format_point(const std::vector<double>& z) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
    os << ")";
    return os.str();
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("short write to " + path.string());
}

void write_report(const fs::path& out_dir, const std::string& command,
                  const RunConfig& config, const std::vector<std::string>& outputs,
                  const nlohmann::json& results, const nlohmann::json& timings) {
    nlohmann::json report{{"command", command},
                          {"config", config_to_json(config)},
                          {"outputs", outputs},
                          {"results", results},
                          {"timings_ms", timings}};
    write_file(out_dir / "run_report.json",
               [&](std::ostream& o) { o << report.dump(2) << "\n"; });
}

int guarded(std::ostream& log, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const BetaInfeasible& e) {
        log << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateSpread& e) {
        log << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

// Extremes of the mean displacement across whole station vectors at once,
// one engine call per cut point.  Matches the scalar extension path (same
// cut discretization, same downward nesting hull) but shares the per-point
// setup cost over all stations.
std::vector<FuzzyVariable> mean_field_sweep(const BoundModel& bound,
                                            const std::vector<double>& stations,
                                            const FuzzyVector& fvec,
                                            const std::vector<double>& levels,
                                            int resolution, int workers) {
    const int n_lev = static_cast<int>(levels.size());
    const int n_st = static_cast<int>(stations.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> lo(n_lev, std::vector<double>(n_st, inf));
    std::vector<std::vector<double>> hi(n_lev, std::vector<double>(n_st, -inf));

    for (int j = 0; j < n_lev; ++j) {
        auto points = discretize(fvec.joint_alpha_cut(levels[j]), resolution);
        std::vector<std::vector<double>> rows(points.size());
        parallel_for(static_cast<int>(points.size()), workers, [&](int k) {
            try {
                std::vector<double> row(stations.size());
                bound.mean_displacement(points[k], stations, row);
                rows[k] = std::move(row);
            } catch (const std::exception& e) {
                throw std::runtime_error("mean displacement failed at z = " +
                                         format_point(points[k]) + ": " + e.what());
            }
        });
        for (const auto& row : rows)
            for (int s = 0; s < n_st; ++s) {
                lo[j][s] = std::min(lo[j][s], row[s]);
                hi[j][s] = std::max(hi[j][s], row[s]);
            }
    }

    std::vector<FuzzyVariable> field;
    field.reserve(stations.size());
    for (int s = 0; s < n_st; ++s) {
        for (int j = n_lev - 2; j >= 0; --j) {
            lo[j][s] = std::min(lo[j][s], lo[j + 1][s]);
            hi[j][s] = std::max(hi[j][s], hi[j + 1][s]);
        }
        std::vector<Interval> cuts;
        cuts.reserve(levels.size());
        for (int j = 0; j < n_lev; ++j) cuts.push_back({lo[j][s], hi[j][s]});
        field.push_back(from_alpha_cuts(levels, std::move(cuts)));
    }
    return field;
}

// sample spread at a fixed station over the widest cut, for grid placement
// and the reported MC tolerance
struct SampleSpread {
    double lo = 0.0;
    double hi = 0.0;
};

SampleSpread sample_spread(const BoundModel& bound, const FuzzyVector& fvec,
                           double station, int m_s, int resolution, int workers) {
    auto points = discretize(fvec.joint_alpha_cut(0.0), resolution);
    std::vector<double> mins(points.size()), maxs(points.size());
    parallel_for(static_cast<int>(points.size()), workers, [&](int k) {
        std::vector<double> u(static_cast<std::size_t>(m_s));
        bound.displacement_samples(points[k], station, u);
        auto [lo_it, hi_it] = std::minmax_element(u.begin(), u.end());
        mins[k] = *lo_it;
        maxs[k] = *hi_it;
    });
    return {*std::min_element(mins.begin(), mins.end()),
            *std::max_element(maxs.begin(), maxs.end())};
}

double standard_error(const std::vector<double>& samples) {
    if (samples.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    double m2 = 0.0;
    for (double v : samples) m2 += (v - mean) * (v - mean);
    return std::sqrt(m2 / (samples.size() - 1.0) / static_cast<double>(samples.size()));
}

FuzzyVariable resampled_polygon(const std::vector<double>& vertices,
                                const std::vector<double>& levels) {
    FuzzyVariable base = make_polygonal(vertices);
    if (levels == base.levels()) return base;
    std::vector<Interval> cuts;
    cuts.reserve(levels.size());
    for (double a : levels) cuts.push_back(base.alpha_cut(a));
    return from_alpha_cuts(levels, std::move(cuts));
}

std::ifstream open_input(const std::string& path, const char* what) {
    if (path.empty())
        throw std::invalid_argument(std::string("--input is required: ") + what);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return in;
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base) {
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "seed") base.seed = value.get<std::uint64_t>();
            else if (key == "alphas") base.alphas = value.get<std::vector<double>>();
            else if (key == "ms") base.ms = value.get<int>();
            else if (key == "mf") base.mf = value.get<int>();
            else if (key == "nh") base.nh = value.get<int>();
            else if (key == "interaction") base.interaction = value.get<std::string>();
            else if (key == "out") base.out = value.get<std::string>();
            else if (key == "workers") base.workers = value.get<int>();
            else if (key == "u_cr") base.u_cr = value.get<double>();
            else if (key == "kl_fraction") base.kl_fraction = value.get<double>();
            else if (key == "kl_points") base.kl_points = value.get<int>();
            else if (key == "window_um") base.window_um = value.get<double>();
            else if (key == "input") base.input = value.get<std::string>();
            else if (key == "map") base.map = value.get<std::string>();
            else if (key == "bins") base.bins = value.get<int>();
            else if (key == "stations") base.stations = value.get<int>();
            else if (key == "cdf_points") base.cdf_points = value.get<int>();
            else throw std::invalid_argument("unknown config key: " + key);
        } catch (const nlohmann::json::exception&) {
            throw std::invalid_argument("config key '" + key + "' has the wrong type");
        }
    }
    return base;
}

nlohmann::json config_to_json(const RunConfig& c) {
    return {{"seed", c.seed},
            {"alphas", c.alphas},
            {"ms", c.ms},
            {"mf", c.mf},
            {"nh", c.nh},
            {"interaction", c.interaction},
            {"out", c.out},
            {"workers", c.workers},
            {"u_cr", c.u_cr},
            {"kl_fraction", c.kl_fraction},
            {"kl_points", c.kl_points},
            {"window_um", c.window_um},
            {"input", c.input},
            {"map", c.map},
            {"bins", c.bins},
            {"stations", c.stations},
            {"cdf_points", c.cdf_points}};
}

int run_example1(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        validate_common(config);
        if (config.stations < 2)
            throw std::invalid_argument("stations must be at least 2");
        if (config.cdf_points < 2)
            throw std::invalid_argument("cdf_points must be at least 2");
        std::vector<double> levels = resolved_levels(config);
        std::vector<Interaction> modes = resolved_modes(config.interaction);

        SolveConfig solve = lognormal_bar_config();
        if (config.nh > 0) solve.n_h = config.nh;

        fs::path out_dir(config.out);
        fs::create_directories(out_dir);

        auto t_total = Clock::now();
        Example1Model model(solve.L);
        Sampler sampler(config.seed);
        auto draws = standard_normal(
            sampler, static_cast<std::size_t>(config.ms) * model.y_dim());
        auto bound = model.bind(solve, draws, config.ms);

        FuzzyVariable z1 = make_triangular(1.00, 1.06, 1.20, levels);
        FuzzyVariable z2 = make_triangular(0.10, 0.13, 0.20, levels);

        // MC tolerance of the reported mean at the most plausible parameters
        std::vector<double> modal_samples(static_cast<std::size_t>(config.ms));
        bound->displacement_samples({1.06, 0.13}, solve.L, modal_samples);
        double modal_se = standard_error(modal_samples);

        std::vector<double> stations = linspace(0.9 * solve.L, solve.L, config.stations);
        std::vector<double> end_station{solve.L};
        std::vector<double> u0_grid = linspace(0.2, 0.6, config.cdf_points);

        std::vector<std::string> outputs;
        nlohmann::json results{{"q1_modal_standard_error", modal_se}};
        nlohmann::json timings;

        for (Interaction mode : modes) {
            auto t_mode = Clock::now();
            const std::string tag = mode_tag(mode);
            FuzzyVector fvec({z1, z2}, mode);
            int res = cut_resolution(fvec, config.mf);
            fs::path mode_dir = out_dir / tag;
            fs::create_directories(mode_dir);

            FuzzyVariable q1 = mean_field_sweep(*bound, end_station, fvec, levels, res,
                                                config.workers)[0];
            write_file(mode_dir / "q1_membership.csv",
                       [&](std::ostream& o) { write_cut_table_csv(o, q1); });
            outputs.push_back(tag + "/q1_membership.csv");

            auto field =
                mean_field_sweep(*bound, stations, fvec, levels, res, config.workers);
            write_file(mode_dir / "q2_field.csv",
                       [&](std::ostream& o) { write_field_csv(o, stations, field); });
            outputs.push_back(tag + "/q2_field.csv");

            BatchSampler end_batch = [&bound, &solve](const std::vector<double>& z,
                                                      std::vector<double>& out) {
                bound->displacement_samples(z, solve.L, out);
            };
            PBoxFamily q3 = fuzzy_cdf_from_batches(end_batch, fvec, config.ms, u0_grid,
                                                   levels, res, config.workers);
            write_file(mode_dir / "q3_pbox.csv",
                       [&](std::ostream& o) { write_pbox_csv(o, q3); });
            outputs.push_back(tag + "/q3_pbox.csv");

            results[tag] = {{"q1", to_json(q1)}, {"cut_points", res}};
            timings[tag] = ms_since(t_mode);
            log << "example1 [" << tag << "]: q1 zero cut ["
                << q1.alpha_cut(0.0).lo << ", " << q1.alpha_cut(0.0).hi << "]\n";
        }

        timings["total"] = ms_since(t_total);
        write_report(out_dir, "example1", config, outputs, results, timings);
        log << "example1: wrote " << outputs.size() << " data files under "
            << out_dir.string() << "\n";
    });
}

int run_example2(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        validate_common(config);
        if (config.cdf_points < 2)
            throw std::invalid_argument("cdf_points must be at least 2");
        if (config.kl_points < 2)
            throw std::invalid_argument("kl_points must be at least 2");
        if (!(config.window_um > 0.0))
            throw std::invalid_argument("window_um must be positive");
        if (!(config.kl_fraction > 0.0 && config.kl_fraction <= 1.0))
            throw std::invalid_argument("kl_fraction must lie in (0, 1]");
        if (!std::isfinite(config.u_cr))
            throw std::invalid_argument("u_cr must be finite");
        std::vector<double> levels = resolved_levels(config);
        std::vector<Interaction> modes = resolved_modes(config.interaction);

        SolveConfig solve = composite_bar_config();
        if (config.nh > 0) solve.n_h = config.nh;

        fs::path out_dir(config.out);
        fs::create_directories(out_dir);

        auto t_total = Clock::now();
        const double h_um = config.window_um / config.kl_points;
        std::vector<double> grid(static_cast<std::size_t>(config.kl_points));
        for (int i = 0; i < config.kl_points; ++i) grid[i] = (i + 0.5) * h_um;
        KLExpansion kl = kl_decompose(grid, CovarianceSpec{});
        int m = kl_truncation_order(kl, config.kl_fraction);
        log << "example2: " << m << " field modes retain " << 100.0 * config.kl_fraction
            << "% of the variance on " << config.kl_points << " cells\n";

        Example2Model model(kl, m);
        Sampler sampler(config.seed);
        auto draws =
            standard_normal(sampler, static_cast<std::size_t>(config.ms) * m);
        auto bound = model.bind(solve, draws, config.ms);

        std::vector<FuzzyVariable> marginals;
        for (const auto& vertices : kMomentVertices)
            marginals.push_back(resampled_polygon(vertices, levels));

        // field stations on the cell boundaries of the observation window
        const double meters_per_um = 1e-6;
        std::vector<double> stations =
            linspace(0.0, config.window_um * meters_per_um, config.kl_points + 1);
        const double x_quarter = solve.L / 4.0;

        std::vector<std::string> outputs;
        nlohmann::json results{{"kl_modes", m}, {"u_cr", config.u_cr}};
        nlohmann::json timings;

        for (Interaction mode : modes) {
            auto t_mode = Clock::now();
            const std::string tag = mode_tag(mode);
            FuzzyVector fvec = mode == Interaction::FullyInteractivePolygonal
                                   ? build_moment_vector(marginals)
                                   : FuzzyVector(marginals, mode);
            int res = cut_resolution(fvec, config.mf);
            fs::path mode_dir = out_dir / tag;
            fs::create_directories(mode_dir);

            auto field =
                mean_field_sweep(*bound, stations, fvec, levels, res, config.workers);
            write_file(mode_dir / "q4_field.csv",
                       [&](std::ostream& o) { write_field_csv(o, stations, field); });
            outputs.push_back(tag + "/q4_field.csv");

            SampleSpread spread =
                sample_spread(*bound, fvec, x_quarter, config.ms, res, config.workers);
            double pad = 0.05 * (spread.hi - spread.lo);
            if (!(pad > 0.0)) pad = std::max(std::abs(spread.hi), 1.0) * 1e-6;
            std::vector<double> u_grid =
                linspace(spread.lo - pad, spread.hi + pad, config.cdf_points);

            BatchSampler quarter_batch = [&bound, x_quarter](
                                             const std::vector<double>& z,
                                             std::vector<double>& out) {
                bound->displacement_samples(z, x_quarter, out);
            };
            PBoxFamily q5 = fuzzy_cdf_from_batches(quarter_batch, fvec, config.ms,
                                                   u_grid, levels, res, config.workers);
            write_file(mode_dir / "q5_pbox.csv",
                       [&](std::ostream& o) { write_pbox_csv(o, q5); });
            outputs.push_back(tag + "/q5_pbox.csv");

            BatchSampler limit_state = [&bound, x_quarter, u_cr = config.u_cr](
                                           const std::vector<double>& z,
                                           std::vector<double>& out) {
                bound->displacement_samples(z, x_quarter, out);
                for (double& v : out) v = u_cr - v;
            };
            FuzzyVariable q6 = failure_probability_from_batches(
                limit_state, fvec, config.ms, levels, res, config.workers);
            write_file(mode_dir / "q6_membership.csv",
                       [&](std::ostream& o) { write_cut_table_csv(o, q6); });
            outputs.push_back(tag + "/q6_membership.csv");

            results[tag] = {{"q6", to_json(q6)}, {"cut_points", res}};
            timings[tag] = ms_since(t_mode);
            log << "example2 [" << tag << "]: q6 zero cut ["
                << q6.alpha_cut(0.0).lo << ", " << q6.alpha_cut(0.0).hi << "]\n";
        }

        timings["total"] = ms_since(t_total);
        write_report(out_dir, "example2", config, outputs, results, timings);
        log << "example2: wrote " << outputs.size() << " data files under "
            << out_dir.string() << "\n";
    });
}

int run_extend(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        validate_common(config);
        auto in = open_input(config.input, "a cut table to push through the map");
        FuzzyVariable variable =
            fs::path(config.input).extension() == ".json"
                ? fuzzy_variable_from_json(nlohmann::json::parse(in))
                : read_cut_table_csv(in);

        CrispMap g;
        if (config.map == "identity")
            g = [](const std::vector<double>& z) { return z[0]; };
        else if (config.map == "square")
            g = [](const std::vector<double>& z) { return z[0] * z[0]; };
        else if (config.map == "negate")
            g = [](const std::vector<double>& z) { return -z[0]; };
        else if (config.map == "exp")
            g = [](const std::vector<double>& z) { return std::exp(z[0]); };
        else
            throw std::invalid_argument(
                "map must be one of identity, square, negate, exp");

        std::vector<double> levels =
            config.alphas.empty() ? variable.levels() : resolved_levels(config);
        FuzzyVector fvec({variable}, Interaction::NonInteractive);
        auto t0 = Clock::now();
        FuzzyVariable mapped =
            extend(g, fvec, levels, cut_resolution(fvec, config.mf), config.workers);

        fs::path out_dir(config.out);
        fs::create_directories(out_dir);
        write_file(out_dir / "extended.csv",
                   [&](std::ostream& o) { write_cut_table_csv(o, mapped); });
        write_report(out_dir, "extend", config, {"extended.csv"},
                     {{"map", config.map},
                      {"input_support", {variable.support().lo, variable.support().hi}},
                      {"output_support", {mapped.support().lo, mapped.support().hi}}},
                     {{"total", ms_since(t0)}});
        log << "extend: " << config.map << " support ["
            << mapped.support().lo << ", " << mapped.support().hi << "]\n";
    });
}

int run_fit(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        validate_common(config);
        if (config.bins < 1) throw std::invalid_argument("bins must be at least 1");
        std::vector<double> levels =
            config.alphas.empty() ? default_levels() : resolved_levels(config);
        auto in = open_input(config.input, "a one-column value csv");
        std::vector<double> values = read_value_column_csv(in);
        if (values.empty()) throw std::invalid_argument("input has no values");

        fs::path out_dir(config.out);
        fs::create_directories(out_dir);
        auto t0 = Clock::now();

        auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
        nlohmann::json results{{"count", values.size()}};
        FuzzyVariable variable = make_triangular(*mn_it, *mn_it, *mn_it, levels);
        if (*mn_it == *mx_it) {
            // constant column: nothing to spread, the membership is crisp
            results["crisp"] = true;
            results["value"] = *mn_it;
            log << "fit: constant column, crisp membership at " << *mn_it << "\n";
        } else {
            FittedMembership fitted = fit_membership(values, config.bins, levels);
            variable = fitted.variable;
            results["crisp"] = variable.is_crisp();
            results["bins"] = config.bins;
            results["rss_rising"] = fitted.rss_rising;
            results["rss_falling"] = fitted.rss_falling;
            log << "fit: support [" << variable.support().lo << ", "
                << variable.support().hi << "], rss " << fitted.rss_rising << " / "
                << fitted.rss_falling << "\n";
        }

        write_file(out_dir / "fit_membership.csv",
                   [&](std::ostream& o) { write_cut_table_csv(o, variable); });
        write_file(out_dir / "fit_polyline.csv",
                   [&](std::ostream& o) { write_membership_csv(o, variable); });
        write_report(out_dir, "fit", config, {"fit_membership.csv", "fit_polyline.csv"},
                     results, {{"total", ms_since(t0)}});
    });
}

int run_ingest(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        validate_common(config);
        if (config.bins < 1) throw std::invalid_argument("bins must be at least 1");
        std::vector<double> levels =
            config.alphas.empty() ? default_levels() : resolved_levels(config);

        fs::path out_dir(config.out);
        fs::create_directories(out_dir);
        auto t0 = Clock::now();

        PixelMap map;
        bool synthesized = config.input.empty();
        if (synthesized) {
            map = synthesize_fiber_map(config.seed);
            log << "ingest: synthesized a " << map.width << "x" << map.height
                << " map, volume fraction " << map.volume_fraction() << "\n";
        } else {
            auto in = open_input(config.input, "a binary fiber map (pgm)");
            map = read_pgm(in);
            log << "ingest: read a " << map.width << "x" << map.height
                << " map, volume fraction " << map.volume_fraction() << "\n";
        }

        std::vector<std::string> outputs;
        if (synthesized) {
            write_file(out_dir / "map.pgm", [&](std::ostream& o) { write_pgm(o, map); });
            outputs.push_back("map.pgm");
        }

        SampleEnsemble ensemble = harmonic_coarsen(map);
        write_file(out_dir / "ingest_ensemble.csv",
                   [&](std::ostream& o) { write_ensemble_csv(o, ensemble); });
        outputs.push_back("ingest_ensemble.csv");

        auto tracks = moment_tracks(ensemble);
        std::vector<FuzzyVariable> fitted;
        nlohmann::json moment_results;
        const std::array<const char*, 4> names{"z1", "z2", "z3", "z4"};
        for (std::size_t i = 0; i < tracks.size(); ++i) {
            FittedMembership fit = fit_membership(tracks[i], config.bins, levels);
            fitted.push_back(fit.variable);
            std::string file = std::string(names[i]) + "_membership.csv";
            write_file(out_dir / file,
                       [&](std::ostream& o) { write_cut_table_csv(o, fit.variable); });
            outputs.push_back(file);
            moment_results[names[i]] = {
                {"support", {fit.variable.support().lo, fit.variable.support().hi}},
                {"rss_rising", fit.rss_rising},
                {"rss_falling", fit.rss_falling}};
        }

        FuzzyVector moment_vector = build_moment_vector(fitted);
        nlohmann::json vec_json{{"interaction", "full"}, {"marginals", nlohmann::json::array()}};
        for (const auto& v : moment_vector.components())
            vec_json["marginals"].push_back(to_json(v));
        write_file(out_dir / "moment_vector.json",
                   [&](std::ostream& o) { o << vec_json.dump(2) << "\n"; });
        outputs.push_back("moment_vector.json");

        write_report(out_dir, "ingest", config, outputs,
                     {{"volume_fraction", map.volume_fraction()},
                      {"bars", ensemble.bars},
                      {"stations", ensemble.stations},
                      {"moments", moment_results}},
                     {{"total", ms_since(t0)}});
        log << "ingest: " << ensemble.bars << " bars x " << ensemble.stations
            << " stations, moment fits written\n";
    });
}

int run_kl_info(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        validate_common(config);
        if (config.kl_points < 2)
            throw std::invalid_argument("kl_points must be at least 2");
        if (!(config.window_um > 0.0))
            throw std::invalid_argument("window_um must be positive");
        if (!(config.kl_fraction > 0.0 && config.kl_fraction <= 1.0))
            throw std::invalid_argument("kl_fraction must lie in (0, 1]");

        auto t0 = Clock::now();
        const double h_um = config.window_um / config.kl_points;
        std::vector<double> grid(static_cast<std::size_t>(config.kl_points));
        for (int i = 0; i < config.kl_points; ++i) grid[i] = (i + 0.5) * h_um;
        CovarianceSpec spec;
        KLExpansion kl = kl_decompose(grid, spec);
        int m = kl_truncation_order(kl, config.kl_fraction);

        double trace = 0.0;
        for (double x : grid) trace += covariance(x, x, spec);
        trace *= kl.spacing;
        double total = 0.0;
        for (double lambda : kl.eigenvalues) total += lambda;
        double trace_rel_error = std::abs(total - trace) / trace;

        fs::path out_dir(config.out);
        fs::create_directories(out_dir);
        write_file(out_dir / "eigenpairs.csv",
                   [&](std::ostream& o) { write_eigenpairs_csv(o, kl); });
        write_report(out_dir, "kl-info", config, {"eigenpairs.csv"},
                     {{"m", m},
                      {"trace_rel_error", trace_rel_error},
                      {"lambda_max", kl.eigenvalues.empty() ? 0.0 : kl.eigenvalues[0]},
                      {"cells", config.kl_points}},
                     {{"total", ms_since(t0)}});

        log << "kl-info: m = " << m << " modes retain " << 100.0 * config.kl_fraction
            << "% of the variance on " << config.kl_points << " cells over [0, "
            << config.window_um << "] um\n";
        log << "kl-info: eigenvalue sum vs kernel trace differs by "
            << trace_rel_error << " (relative)\n";
    });
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& log) {
    if (name == "example1") return run_example1(config, log);
    if (name == "example2") return run_example2(config, log);
    if (name == "extend") return run_extend(config, log);
    if (name == "fit") return run_fit(config, log);
    if (name == "ingest") return run_ingest(config, log);
    if (name == "kl-info") return run_kl_info(config, log);
    log << "config error: unknown command '" << name << "'\n";
    return 2;
}

}  // namespace fsuq
