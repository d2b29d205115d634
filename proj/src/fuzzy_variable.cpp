#include <fsuq/fuzzy_variable.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fsuq {

namespace {
constexpr double kNestingTol = 1e-12;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}
}  // namespace

Interval make_interval(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi), "interval endpoints must be finite");
    require(lo <= hi, "interval requires lo <= hi");
    return {lo, hi};
}

std::vector<double> default_levels() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

std::vector<std::string> validate_cut_table(const std::vector<double>& levels,
                                            const std::vector<Interval>& cuts) {
    std::vector<std::string> out;
    if (levels.size() < 2) out.push_back("need at least levels 0 and 1");
    if (levels.size() != cuts.size()) out.push_back("level/cut count mismatch");
    if (!levels.empty() && levels.front() != 0.0) out.push_back("first level must be 0");
    if (!levels.empty() && levels.back() != 1.0) out.push_back("last level must be 1");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i - 1] < levels[i])) {
            out.push_back("levels must strictly ascend");
            break;
        }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!std::isfinite(cuts[i].lo) || !std::isfinite(cuts[i].hi)) {
            std::ostringstream os;
            os << "cut at level index " << i << " has non-finite endpoint";
            out.push_back(os.str());
        } else if (cuts[i].lo > cuts[i].hi) {
            std::ostringstream os;
            os << "cut at level index " << i << " is empty (lo > hi)";
            out.push_back(os.str());
        }
    }
    if (levels.size() == cuts.size()) {
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            if (cuts[i].lo < cuts[i - 1].lo || cuts[i].hi > cuts[i - 1].hi) {
                std::ostringstream os;
                os << "cuts not nested between levels "
                   << (i - 1 < levels.size() ? levels[i - 1] : 0.0) << " and "
                   << (i < levels.size() ? levels[i] : 1.0);
                out.push_back(os.str());
            }
        }
    }
    return out;
}

FuzzyVariable from_alpha_cuts(std::vector<double> levels, std::vector<Interval> cuts) {
    // absorb rounding-scale nesting violations before auditing
    for (std::size_t i = 1; i < cuts.size() && i < levels.size(); ++i) {
        if (cuts[i].lo < cuts[i - 1].lo && cuts[i - 1].lo - cuts[i].lo <= kNestingTol)
            cuts[i].lo = cuts[i - 1].lo;
        if (cuts[i].hi > cuts[i - 1].hi && cuts[i].hi - cuts[i - 1].hi <= kNestingTol)
            cuts[i].hi = cuts[i - 1].hi;
        if (cuts[i].lo > cuts[i].hi && cuts[i].lo - cuts[i].hi <= kNestingTol)
            cuts[i].lo = cuts[i].hi = 0.5 * (cuts[i].lo + cuts[i].hi);
    }
    auto violations = validate_cut_table(levels, cuts);
    if (!violations.empty()) {
        std::string msg = "invalid cut table:";
        for (auto& v : violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
    return FuzzyVariable(std::move(levels), std::move(cuts));
}

FuzzyVariable make_triangular(double l, double m, double r, std::vector<double> levels) {
    require(std::isfinite(l) && std::isfinite(m) && std::isfinite(r),
            "triangular vertices must be finite");
    require(l <= m && m <= r, "triangular requires l <= m <= r");
    if (levels.empty()) levels = default_levels();
    std::vector<Interval> cuts;
    cuts.reserve(levels.size());
    for (double a : levels) cuts.push_back({l + a * (m - l), r - a * (r - m)});
    return from_alpha_cuts(std::move(levels), std::move(cuts));
}

FuzzyVariable make_polygonal(const std::vector<double>& vertices,
                             std::vector<double> levels) {
    if (levels.empty()) levels = default_levels();
    require(vertices.size() == 2 * levels.size(),
            "polygonal requires vertex count = 2 x level count");
    for (std::size_t i = 1; i < vertices.size(); ++i)
        require(vertices[i - 1] <= vertices[i], "polygonal vertices must ascend");
    std::vector<Interval> cuts;
    cuts.reserve(levels.size());
    const std::size_t n = vertices.size();
    for (std::size_t j = 0; j < levels.size(); ++j)
        cuts.push_back({vertices[j], vertices[n - 1 - j]});
    return from_alpha_cuts(std::move(levels), std::move(cuts));
}

Interval FuzzyVariable::alpha_cut(double alpha) const {
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    auto it = std::lower_bound(levels_.begin(), levels_.end(), alpha);
    std::size_t j = static_cast<std::size_t>(it - levels_.begin());
    if (j < levels_.size() && levels_[j] == alpha) return cuts_[j];
    // alpha strictly between levels_[j-1] and levels_[j]
    double t = (alpha - levels_[j - 1]) / (levels_[j] - levels_[j - 1]);
    return {cuts_[j - 1].lo + t * (cuts_[j].lo - cuts_[j - 1].lo),
            cuts_[j - 1].hi + t * (cuts_[j].hi - cuts_[j - 1].hi)};
}

double FuzzyVariable::membership(double v) const {
    if (!cuts_.front().contains(v)) return 0.0;
    // highest stored level whose cut contains v
    std::size_t j = 0;
    for (std::size_t i = cuts_.size(); i-- > 0;) {
        if (cuts_[i].contains(v)) {
            j = i;
            break;
        }
    }
    if (j + 1 == cuts_.size()) return 1.0;
    // invert the binding endpoint curve on [levels_[j], levels_[j+1]]
    const Interval& a = cuts_[j];
    const Interval& b = cuts_[j + 1];
    double t_lo = 1.0, t_hi = 1.0;
    if (v < b.lo) t_lo = (a.lo == b.lo) ? 1.0 : (v - a.lo) / (b.lo - a.lo);
    if (v > b.hi) t_hi = (a.hi == b.hi) ? 1.0 : (a.hi - v) / (a.hi - b.hi);
    double t = std::clamp(std::min(t_lo, t_hi), 0.0, 1.0);
    return levels_[j] + t * (levels_[j + 1] - levels_[j]);
}

std::vector<std::pair<double, double>> FuzzyVariable::membership_polyline() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(2 * cuts_.size());
    for (std::size_t i = 0; i < cuts_.size(); ++i)
        out.emplace_back(cuts_[i].lo, levels_[i]);
    for (std::size_t i = cuts_.size(); i-- > 0;)
        out.emplace_back(cuts_[i].hi, levels_[i]);
    return out;
}

std::vector<std::string> FuzzyVariable::validate() const {
    return validate_cut_table(levels_, cuts_);
}

}  // namespace fsuq
