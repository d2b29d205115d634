#include <fsuq/extension.hpp>
#include <fsuq/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fsuq {

namespace {

std::string format_point(const std::vector<double>& z) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (i) os << ", ";
        os << z[i];
    }
    os << ")";
    return os.str();
}

std::vector<double> prepare_levels(std::vector<double> levels) {
    if (levels.empty()) throw std::invalid_argument("level list must not be empty");
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

// widen lower-level cuts to contain higher-level ones; estimates at higher
// levels are subsets of the true lower-level cut, so the hull only repairs
// discretization shortfall and never invents range
void enforce_nesting(std::vector<Interval>& cuts) {
    for (int j = static_cast<int>(cuts.size()) - 2; j >= 0; --j) {
        cuts[j].lo = std::min(cuts[j].lo, cuts[j + 1].lo);
        cuts[j].hi = std::max(cuts[j].hi, cuts[j + 1].hi);
    }
}

void repair_bands(PBoxFamily& pb) {
    for (int j = static_cast<int>(pb.levels.size()) - 2; j >= 0; --j) {
        for (std::size_t i = 0; i < pb.evaluation_grid.size(); ++i) {
            pb.left[j][i] = std::max(pb.left[j][i], pb.left[j + 1][i]);
            pb.right[j][i] = std::min(pb.right[j][i], pb.right[j + 1][i]);
        }
    }
}

std::vector<double> evaluate_at_points(const CrispMap& g,
                                       const std::vector<std::vector<double>>& pts,
                                       int workers) {
    std::vector<double> vals(pts.size());
    parallel_for(static_cast<int>(pts.size()), workers, [&](int i) {
        try {
            vals[i] = g(pts[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("map evaluation failed at z = " +
                                     format_point(pts[i]) + ": " + e.what());
        }
    });
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (!std::isfinite(vals[i]))
            throw std::runtime_error("map returned a non-finite value at z = " +
                                     format_point(pts[i]));
    return vals;
}

}  // namespace

FuzzyVariable extend(const CrispMap& g, const FuzzyVector& fvec,
                     std::vector<double> levels, int resolution, int workers) {
    auto lv = prepare_levels(std::move(levels));
    std::vector<Interval> cuts(lv.size());
    for (std::size_t j = 0; j < lv.size(); ++j) {
        auto pts = discretize(fvec.joint_alpha_cut(lv[j]), resolution);
        auto vals = evaluate_at_points(g, pts, workers);
        auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
        cuts[j] = {*lo_it, *hi_it};
    }
    enforce_nesting(cuts);
    return from_alpha_cuts(lv, cuts);
}

std::vector<WeightedPoint> membership_grid(const FuzzyVector& fvec, int resolution) {
    auto pts = discretize(fvec.joint_alpha_cut(0.0), resolution);
    std::vector<WeightedPoint> grid;
    grid.reserve(pts.size());
    for (auto& p : pts) {
        double mu = 1.0;
        for (int i = 0; i < fvec.dim(); ++i)
            mu = std::min(mu, fvec.component(i).membership(p[i]));
        grid.push_back({std::move(p), mu});
    }
    return grid;
}

std::vector<MembershipSample> extend_oracle(const CrispMap& g,
                                            const std::vector<WeightedPoint>& z_grid,
                                            const std::vector<double>& bin_edges) {
    if (bin_edges.size() < 2)
        throw std::invalid_argument("output binning needs at least two edges");
    for (std::size_t i = 1; i < bin_edges.size(); ++i)
        if (!(bin_edges[i] > bin_edges[i - 1]))
            throw std::invalid_argument("bin edges must be strictly ascending");

    const int bins = static_cast<int>(bin_edges.size()) - 1;
    std::vector<MembershipSample> out(bins);
    for (int b = 0; b < bins; ++b)
        out[b] = {0.5 * (bin_edges[b] + bin_edges[b + 1]), 0.0};

    for (const auto& wp : z_grid) {
        double v = g(wp.z);
        int b;
        if (v <= bin_edges.front()) {
            b = 0;
        } else if (v >= bin_edges.back()) {
            b = bins - 1;
        } else {
            b = static_cast<int>(std::upper_bound(bin_edges.begin(), bin_edges.end(), v) -
                                 bin_edges.begin()) -
                1;
        }
        out[b].membership = std::max(out[b].membership, wp.membership);
    }
    return out;
}

namespace {

// draw matrix adapter: rows of shared normals fed through q one at a time
BatchSampler per_sample_batch(const StochasticMap& q, const std::vector<double>& draws,
                              int m_s) {
    return [&q, &draws, m_s](const std::vector<double>& z, std::vector<double>& out) {
        std::vector<double> y(q.y_dim);
        for (int i = 0; i < m_s; ++i) {
            y.assign(draws.begin() + static_cast<std::ptrdiff_t>(i) * q.y_dim,
                     draws.begin() + static_cast<std::ptrdiff_t>(i + 1) * q.y_dim);
            out[i] = q.eval(y, z);
        }
    };
}

void check_sampling_args(int m_s, int y_dim) {
    if (m_s < 1) throw std::invalid_argument("sample count must be at least 1");
    if (y_dim < 0) throw std::invalid_argument("y dimension must be nonnegative");
}

}  // namespace

FuzzyVariable fuzzy_expectation_from_batches(const BatchSampler& q_batch,
                                             const FuzzyVector& fvec, int m_s,
                                             std::vector<double> levels, int m_f,
                                             int workers) {
    if (m_s < 1) throw std::invalid_argument("sample count must be at least 1");
    CrispMap objective = [&q_batch, m_s](const std::vector<double>& z) {
        std::vector<double> buf(m_s);
        q_batch(z, buf);
        double acc = 0.0;
        for (double v : buf) acc += v;
        return acc / m_s;
    };
    return extend(objective, fvec, std::move(levels), m_f, workers);
}

FuzzyVariable fuzzy_expectation(const StochasticMap& q, const FuzzyVector& fvec,
                                Sampler& sampler, int m_s, std::vector<double> levels,
                                int m_f, int workers) {
    check_sampling_args(m_s, q.y_dim);
    auto draws = standard_normal(sampler, static_cast<std::size_t>(m_s) * q.y_dim);
    return fuzzy_expectation_from_batches(per_sample_batch(q, draws, m_s), fvec, m_s,
                                          std::move(levels), m_f, workers);
}

PBoxFamily fuzzy_cdf_type1(const CdfFamily& family, const FuzzyVector& fuzzy_theta,
                           const std::vector<double>& y0_grid,
                           std::vector<double> levels, int m_f, int workers) {
    if (y0_grid.empty())
        throw std::invalid_argument("evaluation grid must not be empty");
    for (std::size_t i = 1; i < y0_grid.size(); ++i)
        if (!(y0_grid[i] > y0_grid[i - 1]))
            throw std::invalid_argument("evaluation grid must be strictly ascending");

    auto lv = prepare_levels(std::move(levels));
    const std::size_t nu = y0_grid.size();
    PBoxFamily pb{y0_grid, lv, {}, {}};
    pb.left.assign(lv.size(), std::vector<double>(nu));
    pb.right.assign(lv.size(), std::vector<double>(nu));

    for (std::size_t j = 0; j < lv.size(); ++j) {
        auto pts = discretize(fuzzy_theta.joint_alpha_cut(lv[j]), m_f);
        std::vector<std::vector<double>> rows(pts.size(), std::vector<double>(nu));
        parallel_for(static_cast<int>(pts.size()), workers, [&](int k) {
            for (std::size_t i = 0; i < nu; ++i) rows[k][i] = family(y0_grid[i], pts[k]);
        });
        for (std::size_t i = 0; i < nu; ++i) {
            double lo = rows[0][i], hi = rows[0][i];
            for (std::size_t k = 1; k < rows.size(); ++k) {
                lo = std::min(lo, rows[k][i]);
                hi = std::max(hi, rows[k][i]);
            }
            pb.left[j][i] = hi;
            pb.right[j][i] = lo;
        }
    }
    repair_bands(pb);
    return pb;
}

PBoxFamily fuzzy_cdf_from_batches(const BatchSampler& q_batch, const FuzzyVector& fvec,
                                  int m_s, const std::vector<double>& u0_grid,
                                  std::vector<double> levels, int m_f, int workers) {
    if (m_s < 1) throw std::invalid_argument("sample count must be at least 1");
    if (u0_grid.empty())
        throw std::invalid_argument("evaluation grid must not be empty");
    for (std::size_t i = 1; i < u0_grid.size(); ++i)
        if (!(u0_grid[i] > u0_grid[i - 1]))
            throw std::invalid_argument("evaluation grid must be strictly ascending");

    auto lv = prepare_levels(std::move(levels));
    const std::size_t nu = u0_grid.size();
    PBoxFamily pb{u0_grid, lv, {}, {}};
    pb.left.assign(lv.size(), std::vector<double>(nu));
    pb.right.assign(lv.size(), std::vector<double>(nu));

    for (std::size_t j = 0; j < lv.size(); ++j) {
        auto pts = discretize(fvec.joint_alpha_cut(lv[j]), m_f);
        std::vector<std::vector<double>> rows(pts.size(), std::vector<double>(nu));
        parallel_for(static_cast<int>(pts.size()), workers, [&](int k) {
            std::vector<double> buf(m_s);
            q_batch(pts[k], buf);
            std::sort(buf.begin(), buf.end());
            // empirical CDF with the <= convention
            for (std::size_t i = 0; i < nu; ++i) {
                auto count = std::upper_bound(buf.begin(), buf.end(), u0_grid[i]) -
                             buf.begin();
                rows[k][i] = static_cast<double>(count) / m_s;
            }
        });
        for (std::size_t i = 0; i < nu; ++i) {
            double lo = rows[0][i], hi = rows[0][i];
            for (std::size_t k = 1; k < rows.size(); ++k) {
                lo = std::min(lo, rows[k][i]);
                hi = std::max(hi, rows[k][i]);
            }
            pb.left[j][i] = hi;
            pb.right[j][i] = lo;
        }
    }
    repair_bands(pb);
    return pb;
}

PBoxFamily fuzzy_cdf_type2(const StochasticMap& q, const FuzzyVector& fvec,
                           Sampler& sampler, int m_s,
                           const std::vector<double>& u0_grid,
                           std::vector<double> levels, int m_f, int workers) {
    check_sampling_args(m_s, q.y_dim);
    auto draws = standard_normal(sampler, static_cast<std::size_t>(m_s) * q.y_dim);
    return fuzzy_cdf_from_batches(per_sample_batch(q, draws, m_s), fvec, m_s, u0_grid,
                                  std::move(levels), m_f, workers);
}

FuzzyVariable failure_probability(const StochasticMap& limit_state,
                                  const FuzzyVector& fvec, Sampler& sampler, int m_s,
                                  std::vector<double> levels, int m_f, int workers) {
    StochasticMap indicator{
        limit_state.y_dim,
        [&limit_state](const std::vector<double>& y, const std::vector<double>& z) {
            return limit_state.eval(y, z) <= 0.0 ? 1.0 : 0.0;
        }};
    return fuzzy_expectation(indicator, fvec, sampler, m_s, std::move(levels), m_f,
                             workers);
}

FuzzyVariable failure_probability_from_batches(const BatchSampler& limit_state_batch,
                                               const FuzzyVector& fvec, int m_s,
                                               std::vector<double> levels, int m_f,
                                               int workers) {
    BatchSampler indicator = [&limit_state_batch](const std::vector<double>& z,
                                                  std::vector<double>& out) {
        limit_state_batch(z, out);
        for (double& v : out) v = v <= 0.0 ? 1.0 : 0.0;
    };
    return fuzzy_expectation_from_batches(indicator, fvec, m_s, std::move(levels), m_f,
                                          workers);
}

std::vector<std::string> validate_pbox(const PBoxFamily& pb) {
    std::vector<std::string> out;
    auto fail = [&out](const std::string& msg) { out.push_back(msg); };

    if (pb.evaluation_grid.empty()) fail("evaluation grid is empty");
    for (std::size_t i = 1; i < pb.evaluation_grid.size(); ++i)
        if (!(pb.evaluation_grid[i] > pb.evaluation_grid[i - 1])) {
            fail("evaluation grid not strictly ascending");
            break;
        }
    if (pb.levels.empty()) fail("level list is empty");
    for (std::size_t j = 1; j < pb.levels.size(); ++j)
        if (!(pb.levels[j] > pb.levels[j - 1])) {
            fail("levels not strictly ascending");
            break;
        }
    if (pb.left.size() != pb.levels.size() || pb.right.size() != pb.levels.size()) {
        fail("envelope row count does not match level count");
        return out;
    }

    const double tol = 1e-12;
    for (std::size_t j = 0; j < pb.levels.size(); ++j) {
        if (pb.left[j].size() != pb.evaluation_grid.size() ||
            pb.right[j].size() != pb.evaluation_grid.size()) {
            fail("envelope width does not match the grid");
            return out;
        }
        for (std::size_t i = 0; i < pb.evaluation_grid.size(); ++i) {
            double l = pb.left[j][i], r = pb.right[j][i];
            if (!(l >= -tol && l <= 1.0 + tol && r >= -tol && r <= 1.0 + tol)) {
                fail("envelope values leave [0,1]");
                j = pb.levels.size();
                break;
            }
            if (r > l + tol) {
                fail("right envelope exceeds the left one");
                j = pb.levels.size();
                break;
            }
            if (i > 0 && (pb.left[j][i] < pb.left[j][i - 1] - tol ||
                          pb.right[j][i] < pb.right[j][i - 1] - tol)) {
                fail("envelopes not nondecreasing along the grid");
                j = pb.levels.size();
                break;
            }
        }
    }
    for (std::size_t j = 0; j + 1 < pb.levels.size() && out.empty(); ++j) {
        for (std::size_t i = 0; i < pb.evaluation_grid.size(); ++i) {
            if (pb.left[j][i] < pb.left[j + 1][i] - tol ||
                pb.right[j][i] > pb.right[j + 1][i] + tol) {
                fail("bands not nested across levels");
                break;
            }
        }
    }
    return out;
}

}  // namespace fsuq
