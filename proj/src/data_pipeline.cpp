#include <fsuq/data_pipeline.hpp>

#include <fsuq/sampler.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace fsuq {

namespace {

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rss = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 int i0, int i1) {
    LineFit f;
    int n = i1 - i0 + 1;
    if (n < 2) return f;
    double xbar = 0.0, ybar = 0.0;
    for (int i = i0; i <= i1; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= n;
    ybar /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = i0; i <= i1; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = ybar - f.slope * xbar;
    for (int i = i0; i <= i1; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        f.rss += r * r;
    }
    f.ok = true;
    return f;
}

// pool-adjacent-violators, nondecreasing, unit weights
void isotonic_nondecreasing(std::vector<double>& v) {
    std::vector<double> val;
    std::vector<int> cnt;
    val.reserve(v.size());
    cnt.reserve(v.size());
    for (double x : v) {
        val.push_back(x);
        cnt.push_back(1);
        while (val.size() > 1 && val[val.size() - 2] > val.back()) {
            double pooled = val.back() * cnt.back() +
                            val[val.size() - 2] * cnt[cnt.size() - 2];
            int n = cnt.back() + cnt[cnt.size() - 2];
            val.pop_back();
            cnt.pop_back();
            val.back() = pooled / n;
            cnt.back() = n;
        }
    }
    v.clear();
    for (std::size_t i = 0; i < val.size(); ++i)
        v.insert(v.end(), cnt[i], val[i]);
}

// first abscissa along an ascending-x polyline where the height reaches a
double rising_crossing(const std::vector<double>& xs,
                       const std::vector<double>& mu, double a) {
    std::size_t k = 0;
    while (k < mu.size() && mu[k] < a) ++k;
    if (k == 0) return xs.front();
    double run = mu[k] - mu[k - 1];
    return xs[k - 1] + (a - mu[k - 1]) * (xs[k] - xs[k - 1]) / run;
}

// last abscissa where the height is still at least a (descending tail)
double falling_crossing(const std::vector<double>& xs,
                        const std::vector<double>& mu, double a) {
    std::size_t k = mu.size() - 1;
    while (k > 0 && mu[k] < a) --k;
    if (k == mu.size() - 1) return xs.back();
    double run = mu[k] - mu[k + 1];
    return xs[k] + (mu[k] - a) * (xs[k + 1] - xs[k]) / run;
}

}  // namespace

double PixelMap::volume_fraction() const {
    if (occupancy.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::uint8_t p : occupancy) hits += p != 0;
    return static_cast<double>(hits) / static_cast<double>(occupancy.size());
}

SampleEnsemble harmonic_coarsen(const PixelMap& map, int element_px,
                                double a_fiber, double a_matrix) {
    if (element_px < 1) throw std::invalid_argument("element size must be positive");
    if (map.width < 1 || map.height < 1)
        throw std::invalid_argument("empty pixel map");
    if (map.occupancy.size() !=
        static_cast<std::size_t>(map.width) * map.height)
        throw std::invalid_argument("occupancy size does not match dimensions");
    if (map.width % element_px != 0 || map.height % element_px != 0)
        throw std::invalid_argument("map dimensions not divisible by element size");
    if (!(a_fiber > 0.0) || !(a_matrix > 0.0))
        throw std::invalid_argument("phase moduli must be positive");

    SampleEnsemble out;
    out.bars = map.height / element_px;
    out.stations = map.width / element_px;
    out.station_x.resize(out.stations);
    for (int j = 0; j < out.stations; ++j)
        out.station_x[j] = (j + 0.5) * element_px;
    out.modulus.resize(static_cast<std::size_t>(out.bars) * out.stations);

    double n_px = static_cast<double>(element_px) * element_px;
    for (int b = 0; b < out.bars; ++b) {
        for (int j = 0; j < out.stations; ++j) {
            int fiber_px = 0;
            for (int r = 0; r < element_px; ++r) {
                const std::uint8_t* row =
                    map.occupancy.data() +
                    static_cast<std::size_t>(b * element_px + r) * map.width +
                    static_cast<std::size_t>(j) * element_px;
                for (int c = 0; c < element_px; ++c) fiber_px += row[c] != 0;
            }
            double inv_sum =
                fiber_px / a_fiber + (n_px - fiber_px) / a_matrix;
            out.modulus[static_cast<std::size_t>(b) * out.stations + j] =
                n_px / inv_sum;
        }
    }
    return out;
}

std::vector<double> compliance_column(const SampleEnsemble& ensemble,
                                      int station) {
    if (station < 0 || station >= ensemble.stations)
        throw std::invalid_argument("station index out of range");
    std::vector<double> b(ensemble.bars);
    for (int i = 0; i < ensemble.bars; ++i)
        b[i] = 1.0 / ensemble.value(i, station);
    return b;
}

MomentSet sample_moments(const std::vector<double>& values) {
    if (values.size() < 4)
        throw std::invalid_argument("moment estimation needs at least 4 samples");
    double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        double d = v - mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if (m2 == 0.0)
        throw DegenerateSpread("all samples equal: spread moments undefined");
    MomentSet out;
    out.mean = mean;
    out.std = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

std::array<std::vector<double>, 4> moment_tracks(const SampleEnsemble& ensemble) {
    std::array<std::vector<double>, 4> tracks;
    for (auto& t : tracks) t.reserve(ensemble.stations);
    for (int j = 0; j < ensemble.stations; ++j) {
        MomentSet m = sample_moments(compliance_column(ensemble, j));
        tracks[0].push_back(m.mean);
        tracks[1].push_back(m.std);
        tracks[2].push_back(m.skewness);
        tracks[3].push_back(m.excess_kurtosis);
    }
    return tracks;
}

FittedMembership fit_membership(const std::vector<double>& values, int bins,
                                std::vector<double> levels) {
    if (levels.empty()) levels = default_levels();
    if (bins < 1) throw std::invalid_argument("bin count must be positive");
    if (values.size() < 3)
        throw std::invalid_argument("membership fit needs at least 3 values");
    std::set<double> distinct(values.begin(), values.end());
    if (distinct.size() < 3)
        throw std::invalid_argument("membership fit needs at least 3 distinct values");

    double lo = *distinct.begin();
    double hi = *distinct.rbegin();
    double width = (hi - lo) / bins;
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
    edges.back() = hi;

    std::vector<double> counts(bins, 0.0);
    for (double v : values) {
        int idx = std::min(bins - 1, static_cast<int>((v - lo) / width));
        counts[std::max(0, idx)] += 1.0;
    }
    std::vector<double> centers(bins);
    for (int i = 0; i < bins; ++i) centers[i] = 0.5 * (edges[i] + edges[i + 1]);

    int peak = 0;
    for (int i = 1; i < bins; ++i)
        if (counts[i] > counts[peak]) peak = i;

    int nonzero = 0;
    for (double c : counts) nonzero += c > 0.0;
    if (nonzero == 1) {
        std::vector<double> heights(bins, 0.0);
        heights[peak] = 1.0;
        double c = centers[peak];
        return {make_triangular(c, c, c, levels), edges, heights, 0.0, 0.0};
    }

    LineFit rising = fit_line(centers, counts, 0, peak);
    LineFit falling = fit_line(centers, counts, peak, bins - 1);

    std::vector<double> mu(bins, 0.0);
    double rise_den = rising.intercept + rising.slope * centers[peak];
    double fall_den = falling.intercept + falling.slope * centers[peak];
    for (int i = 0; i < bins; ++i) {
        double raw;
        if (i <= peak)
            raw = (rising.ok && rise_den > 0.0)
                      ? (rising.intercept + rising.slope * centers[i]) / rise_den
                      : counts[i] / counts[peak];
        else
            raw = (falling.ok && fall_den > 0.0)
                      ? (falling.intercept + falling.slope * centers[i]) / fall_den
                      : counts[i] / counts[peak];
        mu[i] = std::clamp(raw, 0.0, 1.0);
    }
    mu[peak] = 1.0;

    // quasi-concavity repair, limb by limb
    std::vector<double> up(mu.begin(), mu.begin() + peak + 1);
    isotonic_nondecreasing(up);
    std::copy(up.begin(), up.end(), mu.begin());
    std::vector<double> down(mu.rbegin(), mu.rend() - peak);
    isotonic_nondecreasing(down);
    std::copy(down.rbegin(), down.rend(), mu.begin() + peak);
    for (double& m : mu) m = std::clamp(m, 0.0, 1.0);
    mu[peak] = 1.0;

    // rising polyline with a zero anchor from the line root when the first
    // bin is still positive; the root is clamped into the data range
    std::vector<double> rx(centers.begin(), centers.begin() + peak + 1);
    std::vector<double> ry(mu.begin(), mu.begin() + peak + 1);
    if (ry.front() > 0.0) {
        double anchor = edges.front();
        if (rising.ok && rising.slope > 0.0) {
            double root = -rising.intercept / rising.slope;
            if (root > anchor && root < rx.front()) anchor = root;
        }
        rx.insert(rx.begin(), anchor);
        ry.insert(ry.begin(), 0.0);
    }
    std::vector<double> fx(centers.begin() + peak, centers.end());
    std::vector<double> fy(mu.begin() + peak, mu.end());
    if (fy.back() > 0.0) {
        double anchor = edges.back();
        if (falling.ok && falling.slope < 0.0) {
            double root = -falling.intercept / falling.slope;
            if (root < anchor && root > fx.back()) anchor = root;
        }
        fx.push_back(anchor);
        fy.push_back(0.0);
    }

    std::vector<double> los, his;
    for (double a : levels) {
        los.push_back(rising_crossing(rx, ry, a));
        his.push_back(falling_crossing(fx, fy, a));
    }
    std::vector<double> vertices = los;
    vertices.insert(vertices.end(), his.rbegin(), his.rend());

    return {make_polygonal(vertices, levels), edges, mu, rising.rss,
            falling.rss};
}

FuzzyVector build_moment_vector(const std::vector<FuzzyVariable>& fitted) {
    if (fitted.size() != 4)
        throw std::invalid_argument("moment vector needs exactly 4 components");
    return FuzzyVector(fitted, Interaction::FullyInteractivePolygonal);
}

PixelMap synthesize_fiber_map(std::uint64_t seed, int width_px, int height_px,
                              double volume_fraction, double fiber_radius_px) {
    if (width_px < 1 || height_px < 1)
        throw std::invalid_argument("map dimensions must be positive");
    if (!(fiber_radius_px > 0.0))
        throw std::invalid_argument("fiber radius must be positive");
    if (!(volume_fraction >= 0.0) || volume_fraction > 1.0)
        throw std::invalid_argument("volume fraction outside [0, 1]");

    PixelMap map;
    map.width = width_px;
    map.height = height_px;
    map.occupancy.assign(static_cast<std::size_t>(width_px) * height_px, 0);
    if (volume_fraction == 0.0) return map;

    // densest achievable layout is the tangent hexagonal lattice
    double cap = std::numbers::pi / (2.0 * std::sqrt(3.0));
    if (volume_fraction >= cap)
        throw PackingFailure("requested fiber fraction exceeds the packing bound");

    double r = fiber_radius_px;
    double total = static_cast<double>(width_px) * height_px;
    std::vector<std::uint8_t> owners;
    std::vector<std::pair<double, double>> discs;

    auto paint = [&](double cx, double cy, int delta, double& covered) {
        int c0 = std::max(0, static_cast<int>(std::floor(cx - r - 1.0)));
        int c1 = std::min(width_px - 1, static_cast<int>(std::ceil(cx + r + 1.0)));
        int r0 = std::max(0, static_cast<int>(std::floor(cy - r - 1.0)));
        int r1 = std::min(height_px - 1, static_cast<int>(std::ceil(cy + r + 1.0)));
        for (int py = r0; py <= r1; ++py) {
            for (int px = c0; px <= c1; ++px) {
                double dx = px + 0.5 - cx;
                double dy = py + 0.5 - cy;
                if (dx * dx + dy * dy > r * r) continue;
                std::uint8_t& o = owners[static_cast<std::size_t>(py) * width_px + px];
                if (delta > 0) {
                    if (o == 0) covered += 1.0;
                    ++o;
                } else {
                    --o;
                    if (o == 0) covered -= 1.0;
                }
            }
        }
    };

    for (double overshoot : {1.10, 1.16, 1.22}) {
        double f_pre = std::min(volume_fraction * overshoot, 0.999 * cap);
        double spacing =
            r * std::sqrt(2.0 * std::numbers::pi / (std::sqrt(3.0) * f_pre));
        spacing = std::max(spacing, 2.0 * r);
        // square jitter keeps discs disjoint even for diagonally approaching
        // neighbors
        double jitter = (spacing - 2.0 * r) / (2.0 * std::numbers::sqrt2);

        Sampler rng(seed);
        owners.assign(static_cast<std::size_t>(width_px) * height_px, 0);
        discs.clear();
        double covered = 0.0;

        double dy = spacing * std::sqrt(3.0) / 2.0;
        int row = 0;
        for (double y = 0.5 * dy; y < height_px; y += dy, ++row) {
            double offset = (row % 2 == 1) ? 0.5 * spacing : 0.0;
            for (double x = 0.5 * spacing + offset; x < width_px; x += spacing) {
                double cx = x + jitter * (2.0 * rng.uniform() - 1.0);
                double cy = y + jitter * (2.0 * rng.uniform() - 1.0);
                paint(cx, cy, +1, covered);
                discs.emplace_back(cx, cy);
            }
        }

        if (covered / total < volume_fraction - 0.01) continue;

        while (covered / total > volume_fraction && !discs.empty()) {
            std::size_t pick = rng.uniform_index(discs.size());
            auto [cx, cy] = discs[pick];
            discs[pick] = discs.back();
            discs.pop_back();
            paint(cx, cy, -1, covered);
        }

        for (std::size_t i = 0; i < map.occupancy.size(); ++i)
            map.occupancy[i] = owners[i] != 0;
        return map;
    }
    throw PackingFailure("could not reach the requested fiber fraction");
}

}  // namespace fsuq
