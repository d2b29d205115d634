#include <fsuq/fuzzy_vector.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fsuq {

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(d2);
}

}  // namespace

int JointAlphaCut::dim() const {
    if (is_box()) return static_cast<int>(box().bounds.size());
    return static_cast<int>(polyline().vertices.front().size());
}

FuzzyVector::FuzzyVector(std::vector<FuzzyVariable> components, Interaction mode)
    : components_(std::move(components)), mode_(mode) {
    if (components_.empty())
        throw std::invalid_argument("fuzzy vector needs at least one component");
    std::set<double> merged;
    for (const auto& c : components_) merged.insert(c.levels().begin(), c.levels().end());
    levels_.assign(merged.begin(), merged.end());
}

JointAlphaCut FuzzyVector::joint_alpha_cut(double alpha) const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0,1]");

    if (mode_ == Interaction::NonInteractive) {
        BoxCut box;
        box.bounds.reserve(components_.size());
        for (const auto& c : components_) box.bounds.push_back(c.alpha_cut(alpha));
        return {box};
    }

    // levels the chain passes through: the requested one plus every stored
    // level above it
    std::vector<double> pass = {alpha};
    for (double l : levels_)
        if (l > alpha) pass.push_back(l);

    PolylineCut pl;
    auto push = [&](const std::vector<double>& v) {
        if (!pl.vertices.empty() && dist(pl.vertices.back(), v) == 0.0) return;
        if (pl.vertices.empty()) {
            pl.arc.push_back(0.0);
        } else {
            pl.arc.push_back(pl.arc.back() + dist(pl.vertices.back(), v));
        }
        pl.vertices.push_back(v);
    };

    std::vector<double> v(components_.size());
    for (double l : pass) {
        for (std::size_t i = 0; i < components_.size(); ++i)
            v[i] = components_[i].alpha_cut(l).lo;
        push(v);
    }
    for (auto it = pass.rbegin(); it != pass.rend(); ++it) {
        for (std::size_t i = 0; i < components_.size(); ++i)
            v[i] = components_[i].alpha_cut(*it).hi;
        push(v);
    }
    return {pl};
}

std::vector<double> arc_length_point(const PolylineCut& cut, double s) {
    if (cut.vertices.empty()) throw std::invalid_argument("empty polyline");
    double L = cut.total_length();
    if (!(s >= 0.0 && s <= L))
        throw std::invalid_argument("arc position outside [0, length]");
    if (cut.vertices.size() == 1) return cut.vertices.front();

    auto it = std::lower_bound(cut.arc.begin(), cut.arc.end(), s);
    std::size_t k = it - cut.arc.begin();
    if (k == 0) return cut.vertices.front();
    double t = (s - cut.arc[k - 1]) / (cut.arc[k] - cut.arc[k - 1]);
    std::vector<double> p(cut.vertices[k].size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = cut.vertices[k - 1][i] + t * (cut.vertices[k][i] - cut.vertices[k - 1][i]);
    return p;
}

namespace {

std::vector<std::vector<double>> discretize_box(const BoxCut& box, int resolution) {
    std::vector<std::vector<double>> axes;
    for (const auto& b : box.bounds) {
        std::vector<double> axis;
        if (b.width() == 0.0) {
            axis.push_back(b.lo);
        } else {
            for (int k = 0; k < resolution; ++k)
                axis.push_back(b.lo + (b.hi - b.lo) * k / (resolution - 1));
            axis.back() = b.hi;
        }
        axes.push_back(std::move(axis));
    }

    std::vector<std::vector<double>> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
        std::vector<double> p(axes.size());
        for (std::size_t i = 0; i < axes.size(); ++i) p[i] = axes[i][idx[i]];
        out.push_back(std::move(p));
        // advance odometer, last axis fastest
        std::size_t i = axes.size();
        while (i > 0) {
            --i;
            if (++idx[i] < axes[i].size()) break;
            idx[i] = 0;
            if (i == 0) return out;
        }
    }
}

std::vector<std::vector<double>> discretize_polyline(const PolylineCut& pl,
                                                     int resolution) {
    if (pl.vertices.size() == 1) return {pl.vertices.front()};
    double L = pl.total_length();
    int n = std::max<int>(resolution, static_cast<int>(pl.vertices.size()));

    std::vector<double> stations(n);
    for (int k = 0; k < n; ++k) stations[k] = std::min(L, L * k / (n - 1));
    stations.back() = L;

    // snap each interior chain vertex onto the nearest unclaimed station so
    // the sample always contains the exact chain geometry
    std::vector<bool> claimed(n, false);
    claimed.front() = claimed.back() = true;
    for (std::size_t j = 1; j + 1 < pl.vertices.size(); ++j) {
        double a = pl.arc[j];
        int k0 = static_cast<int>(std::lround(a / L * (n - 1)));
        k0 = std::clamp(k0, 1, n - 2);
        int k = -1;
        for (int off = 0; off < n; ++off) {
            if (k0 - off >= 1 && !claimed[k0 - off]) {
                k = k0 - off;
                break;
            }
            if (k0 + off <= n - 2 && !claimed[k0 + off]) {
                k = k0 + off;
                break;
            }
        }
        if (k < 0) break;  // more vertices than interior stations; rest stay uniform
        claimed[k] = true;
        stations[k] = a;
    }
    std::sort(stations.begin(), stations.end());

    std::vector<std::vector<double>> out;
    out.reserve(n);
    for (double s : stations) out.push_back(arc_length_point(pl, s));
    return out;
}

}  // namespace

std::vector<std::vector<double>> discretize(const JointAlphaCut& cut, int resolution) {
    if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
    if (cut.is_box()) return discretize_box(cut.box(), resolution);
    return discretize_polyline(cut.polyline(), resolution);
}

}  // namespace fsuq
