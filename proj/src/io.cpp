#include <fsuq/io.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace fsuq {

namespace {

void version_line(std::ostream& out, const char* schema) {
    out << "# fsuq csv v1: " << schema << "\n";
}

double parse_double(std::string_view field) {
    double v{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        throw std::invalid_argument("not a number: '" + std::string(field) + "'");
    return v;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trimmed(line.substr(start)));
            return out;
        }
        out.push_back(trimmed(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

// content rows of a csv stream: comments and blank lines dropped, an
// optional leading header row skipped when it does not parse as numbers
std::vector<std::vector<double>> read_csv_rows(std::istream& in,
                                               std::size_t min_fields) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool may_be_header = true;
    while (std::getline(in, line)) {
        std::string_view content = trimmed(line);
        if (content.empty() || content.front() == '#') continue;
        std::vector<std::string_view> fields = split_fields(content);
        bool numeric = true;
        std::vector<double> row;
        try {
            for (std::string_view f : fields) row.push_back(parse_double(f));
        } catch (const std::invalid_argument&) {
            numeric = false;
        }
        if (!numeric) {
            if (may_be_header) {
                may_be_header = false;
                continue;
            }
            throw std::invalid_argument("malformed csv row: '" + line + "'");
        }
        may_be_header = false;
        if (row.size() < min_fields)
            throw std::invalid_argument("csv row too short: '" + line + "'");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

void write_cut_table_csv(std::ostream& out, const FuzzyVariable& variable) {
    version_line(out, "cut-table");
    out << "alpha,lo,hi\n";
    for (std::size_t i = 0; i < variable.levels().size(); ++i)
        out << format_double(variable.levels()[i]) << ','
            << format_double(variable.cuts()[i].lo) << ','
            << format_double(variable.cuts()[i].hi) << "\n";
}

FuzzyVariable read_cut_table_csv(std::istream& in) {
    std::vector<std::vector<double>> rows = read_csv_rows(in, 3);
    if (rows.empty()) throw std::invalid_argument("cut table csv has no rows");
    std::vector<double> levels;
    std::vector<Interval> cuts;
    for (const auto& row : rows) {
        levels.push_back(row[0]);
        cuts.push_back(make_interval(row[1], row[2]));
    }
    return from_alpha_cuts(std::move(levels), std::move(cuts));
}

void write_membership_csv(std::ostream& out, const FuzzyVariable& variable) {
    version_line(out, "membership");
    out << "abscissa,degree\n";
    for (const auto& [x, degree] : variable.membership_polyline())
        out << format_double(x) << ',' << format_double(degree) << "\n";
}

void write_pbox_csv(std::ostream& out, const PBoxFamily& family) {
    if (family.left.size() != family.levels.size() ||
        family.right.size() != family.levels.size())
        throw std::invalid_argument("pbox envelope count does not match levels");
    version_line(out, "pbox");
    out << "alpha,u0,F_left,F_right\n";
    for (std::size_t a = 0; a < family.levels.size(); ++a) {
        if (family.left[a].size() != family.evaluation_grid.size() ||
            family.right[a].size() != family.evaluation_grid.size())
            throw std::invalid_argument("pbox envelope length does not match grid");
        for (std::size_t g = 0; g < family.evaluation_grid.size(); ++g)
            out << format_double(family.levels[a]) << ','
                << format_double(family.evaluation_grid[g]) << ','
                << format_double(family.left[a][g]) << ','
                << format_double(family.right[a][g]) << "\n";
    }
}

void write_field_csv(std::ostream& out, const std::vector<double>& stations,
                     const std::vector<FuzzyVariable>& values) {
    if (stations.size() != values.size())
        throw std::invalid_argument("field stations and values differ in length");
    version_line(out, "field");
    out << "x,alpha,lo,hi\n";
    for (std::size_t k = 0; k < stations.size(); ++k) {
        const FuzzyVariable& v = values[k];
        for (std::size_t i = 0; i < v.levels().size(); ++i)
            out << format_double(stations[k]) << ','
                << format_double(v.levels()[i]) << ','
                << format_double(v.cuts()[i].lo) << ','
                << format_double(v.cuts()[i].hi) << "\n";
    }
}

void write_points_csv(std::ostream& out,
                      const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("no points to dump");
    std::size_t dim = points.front().size();
    version_line(out, "points");
    for (std::size_t d = 0; d < dim; ++d)
        out << (d ? ",z" : "z") << d + 1;
    out << "\n";
    for (const auto& p : points) {
        if (p.size() != dim)
            throw std::invalid_argument("inconsistent point dimension");
        for (std::size_t d = 0; d < dim; ++d)
            out << (d ? "," : "") << format_double(p[d]);
        out << "\n";
    }
}

void write_eigenpairs_csv(std::ostream& out, const KLExpansion& kl,
                          int max_modes) {
    int count = static_cast<int>(kl.eigenvalues.size());
    if (max_modes >= 0) count = std::min(count, max_modes);
    version_line(out, "eigenpairs");
    out << "j,lambda";
    for (double x : kl.grid) out << ",phi_" << format_double(x);
    out << "\n";
    for (int j = 0; j < count; ++j) {
        out << j + 1 << ',' << format_double(kl.eigenvalues[j]);
        for (std::size_t i = 0; i < kl.grid.size(); ++i)
            out << ',' << format_double(kl.eigenvectors(static_cast<int>(i), j));
        out << "\n";
    }
}

void write_ensemble_csv(std::ostream& out, const SampleEnsemble& ensemble) {
    version_line(out, "ensemble");
    out << "bar,station,x_j,a,b\n";
    for (int b = 0; b < ensemble.bars; ++b)
        for (int j = 0; j < ensemble.stations; ++j) {
            double a = ensemble.value(b, j);
            out << b << ',' << j << ',' << format_double(ensemble.station_x[j])
                << ',' << format_double(a) << ',' << format_double(1.0 / a)
                << "\n";
        }
}

nlohmann::json to_json(const FuzzyVariable& variable) {
    nlohmann::json cuts = nlohmann::json::array();
    for (const Interval& c : variable.cuts())
        cuts.push_back({c.lo, c.hi});
    return {{"levels", variable.levels()}, {"cuts", std::move(cuts)}};
}

FuzzyVariable fuzzy_variable_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("levels") || !j.contains("cuts") ||
        !j["levels"].is_array() || !j["cuts"].is_array())
        throw std::invalid_argument("fuzzy variable json needs levels and cuts");
    std::vector<double> levels = j["levels"].get<std::vector<double>>();
    std::vector<Interval> cuts;
    for (const auto& pair : j["cuts"]) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("each cut must be a [lo, hi] pair");
        cuts.push_back(make_interval(pair[0].get<double>(), pair[1].get<double>()));
    }
    return from_alpha_cuts(std::move(levels), std::move(cuts));
}

nlohmann::json to_json(const JointAlphaCut& cut) {
    if (cut.is_box()) {
        nlohmann::json bounds = nlohmann::json::array();
        for (const Interval& b : cut.box().bounds) bounds.push_back({b.lo, b.hi});
        return {{"type", "box"}, {"bounds", std::move(bounds)}};
    }
    return {{"type", "polyline"}, {"vertices", cut.polyline().vertices}};
}

JointAlphaCut joint_cut_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("joint cut json needs a type tag");
    std::string type = j["type"].get<std::string>();
    if (type == "box") {
        if (!j.contains("bounds") || !j["bounds"].is_array())
            throw std::invalid_argument("box cut json needs bounds");
        BoxCut box;
        for (const auto& pair : j["bounds"])
            box.bounds.push_back(
                make_interval(pair[0].get<double>(), pair[1].get<double>()));
        if (box.bounds.empty()) throw std::invalid_argument("empty box cut");
        return JointAlphaCut{std::move(box)};
    }
    if (type == "polyline") {
        if (!j.contains("vertices") || !j["vertices"].is_array() ||
            j["vertices"].empty())
            throw std::invalid_argument("polyline cut json needs vertices");
        PolylineCut chain;
        chain.vertices = j["vertices"].get<std::vector<std::vector<double>>>();
        std::size_t dim = chain.vertices.front().size();
        if (dim == 0) throw std::invalid_argument("zero-dimensional vertex");
        chain.arc.assign(chain.vertices.size(), 0.0);
        for (std::size_t i = 1; i < chain.vertices.size(); ++i) {
            if (chain.vertices[i].size() != dim)
                throw std::invalid_argument("inconsistent vertex dimension");
            double d2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                double d = chain.vertices[i][k] - chain.vertices[i - 1][k];
                d2 += d * d;
            }
            chain.arc[i] = chain.arc[i - 1] + std::sqrt(d2);
        }
        return JointAlphaCut{std::move(chain)};
    }
    throw std::invalid_argument("unknown joint cut type '" + type + "'");
}

void write_pgm(std::ostream& out, const PixelMap& map) {
    if (map.width < 1 || map.height < 1 ||
        map.occupancy.size() != static_cast<std::size_t>(map.width) * map.height)
        throw std::invalid_argument("pixel map is inconsistent");
    out << "P5\n" << map.width << ' ' << map.height << "\n255\n";
    std::vector<char> bytes(map.occupancy.size());
    for (std::size_t i = 0; i < map.occupancy.size(); ++i)
        bytes[i] = map.occupancy[i] ? static_cast<char>(255) : 0;
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

namespace {

std::string pgm_token(std::istream& in) {
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) throw std::invalid_argument("truncated pgm header");
    std::string token;
    do {
        token.push_back(static_cast<char>(c));
        c = in.get();
    } while (c != EOF && !std::isspace(c));
    return token;
}

int pgm_int(std::istream& in) {
    std::string token = pgm_token(in);
    int v{};
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || p != token.data() + token.size())
        throw std::invalid_argument("bad pgm header field '" + token + "'");
    return v;
}

}  // namespace

PixelMap read_pgm(std::istream& in) {
    if (pgm_token(in) != "P5")
        throw std::invalid_argument("not a binary pgm (expected P5)");
    PixelMap map;
    map.width = pgm_int(in);
    map.height = pgm_int(in);
    int maxval = pgm_int(in);
    if (map.width < 1 || map.height < 1 || maxval < 1 || maxval > 255)
        throw std::invalid_argument("unsupported pgm geometry");
    std::size_t total = static_cast<std::size_t>(map.width) * map.height;
    std::vector<char> bytes(total);
    in.read(bytes.data(), static_cast<std::streamsize>(total));
    if (static_cast<std::size_t>(in.gcount()) != total)
        throw std::invalid_argument("pgm pixel data truncated");
    map.occupancy.resize(total);
    for (std::size_t i = 0; i < total; ++i)
        map.occupancy[i] = bytes[i] != 0;
    return map;
}

nlohmann::json run_length_json(const PixelMap& map) {
    if (map.occupancy.size() != static_cast<std::size_t>(map.width) * map.height)
        throw std::invalid_argument("pixel map is inconsistent");
    std::vector<long> runs;
    std::uint8_t expected = 0;
    std::size_t i = 0;
    while (i < map.occupancy.size()) {
        long run = 0;
        while (i < map.occupancy.size() &&
               (map.occupancy[i] != 0) == (expected != 0)) {
            ++run;
            ++i;
        }
        runs.push_back(run);
        expected = expected ? 0 : 1;
    }
    return {{"width", map.width}, {"height", map.height}, {"runs", runs}};
}

PixelMap pixel_map_from_run_length(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("width") || !j.contains("height") ||
        !j.contains("runs") || !j["runs"].is_array())
        throw std::invalid_argument("run-length json needs width, height, runs");
    PixelMap map;
    map.width = j["width"].get<int>();
    map.height = j["height"].get<int>();
    if (map.width < 1 || map.height < 1)
        throw std::invalid_argument("map dimensions must be positive");
    std::size_t total = static_cast<std::size_t>(map.width) * map.height;
    map.occupancy.reserve(total);
    std::uint8_t value = 0;
    for (const auto& entry : j["runs"]) {
        long run = entry.get<long>();
        if (run < 0) throw std::invalid_argument("negative run length");
        if (map.occupancy.size() + static_cast<std::size_t>(run) > total)
            throw std::invalid_argument("run lengths overflow the map");
        map.occupancy.insert(map.occupancy.end(), static_cast<std::size_t>(run),
                             value);
        value = value ? 0 : 1;
    }
    if (map.occupancy.size() != total)
        throw std::invalid_argument("run lengths do not fill the map");
    return map;
}

std::vector<double> read_value_column_csv(std::istream& in) {
    std::vector<std::vector<double>> rows = read_csv_rows(in, 1);
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) values.push_back(row[0]);
    return values;
}

}  // namespace fsuq
