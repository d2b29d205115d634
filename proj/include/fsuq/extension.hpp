#pragma once

#include <fsuq/fuzzy_vector.hpp>
#include <fsuq/sampler.hpp>

#include <functional>
#include <string>
#include <vector>

namespace fsuq {

using CrispMap = std::function<double(const std::vector<double>&)>;

// stochastic quantity q(y, z); y_dim tells the engine how many standard
// normal components one sample of y carries
struct StochasticMap {
    int y_dim = 1;
    std::function<double(const std::vector<double>& y, const std::vector<double>& z)> eval;
};

using CdfFamily = std::function<double(double y0, const std::vector<double>& theta)>;

// Fills `out` (pre-sized to the sample count) with realizations of a
// quantity at fixed z.  Lets callers with a vectorized model (e.g. a bound
// displacement solver) bypass the per-sample closure path.
using BatchSampler =
    std::function<void(const std::vector<double>& z, std::vector<double>& out)>;

// Nested family of CDF envelope pairs over a fixed evaluation grid:
// left[j][i] / right[j][i] bound the CDF value at evaluation_grid[i] for
// levels[j].  right <= left pointwise, both nondecreasing along the grid,
// and bands shrink as the level rises.
struct PBoxFamily {
    std::vector<double> evaluation_grid;
    std::vector<double> levels;
    std::vector<std::vector<double>> left;
    std::vector<std::vector<double>> right;
};

// empty when all PBoxFamily invariants hold; otherwise one line per violation
std::vector<std::string> validate_pbox(const PBoxFamily& pb);

struct WeightedPoint {
    std::vector<double> z;
    double membership = 0.0;
};

struct MembershipSample {
    double value = 0.0;
    double membership = 0.0;
};

// min/max of g over the discretized joint cut, one interval per level,
// assembled into a fuzzy variable.  Levels are sorted and deduplicated; the
// list must span 0 to 1.  Evaluation failures of g are rethrown with the
// offending point attached.
FuzzyVariable extend(const CrispMap& g, const FuzzyVector& fvec,
                     std::vector<double> levels, int resolution, int workers = 1);

// dense sample of the zero-cut paired with joint membership (the minimum of
// the marginal memberships; for polygonal cuts the points lie on the chain)
std::vector<WeightedPoint> membership_grid(const FuzzyVector& fvec, int resolution);

// Brute-force extension principle: per output bin, the supremum of joint
// membership over grid points mapping into it.  bin_edges are ascending;
// values beyond the first/last edge land in the end bins.  Returned samples
// sit at bin midpoints.
std::vector<MembershipSample> extend_oracle(const CrispMap& g,
                                            const std::vector<WeightedPoint>& z_grid,
                                            const std::vector<double>& bin_edges);

// Monte Carlo fuzzy expectation: one shared set of m_s draws (common random
// numbers), Q(z) estimated at every discretized cut point, extremized per
// level.
FuzzyVariable fuzzy_expectation(const StochasticMap& q, const FuzzyVector& fvec,
                                Sampler& sampler, int m_s, std::vector<double> levels,
                                int m_f, int workers = 1);
FuzzyVariable fuzzy_expectation_from_batches(const BatchSampler& q_batch,
                                             const FuzzyVector& fvec, int m_s,
                                             std::vector<double> levels, int m_f,
                                             int workers = 1);

// per level and grid point: left = max of the CDF family over the cut,
// right = min
PBoxFamily fuzzy_cdf_type1(const CdfFamily& family, const FuzzyVector& fuzzy_theta,
                           const std::vector<double>& y0_grid,
                           std::vector<double> levels, int m_f, int workers = 1);

// empirical CDF envelopes of q(y, z) over the cut, shared draws everywhere
PBoxFamily fuzzy_cdf_type2(const StochasticMap& q, const FuzzyVector& fvec,
                           Sampler& sampler, int m_s,
                           const std::vector<double>& u0_grid,
                           std::vector<double> levels, int m_f, int workers = 1);
PBoxFamily fuzzy_cdf_from_batches(const BatchSampler& q_batch, const FuzzyVector& fvec,
                                  int m_s, const std::vector<double>& u0_grid,
                                  std::vector<double> levels, int m_f, int workers = 1);

// fuzzy expectation of the indicator I[limit_state <= 0]
FuzzyVariable failure_probability(const StochasticMap& limit_state,
                                  const FuzzyVector& fvec, Sampler& sampler, int m_s,
                                  std::vector<double> levels, int m_f, int workers = 1);
FuzzyVariable failure_probability_from_batches(const BatchSampler& limit_state_batch,
                                               const FuzzyVector& fvec, int m_s,
                                               std::vector<double> levels, int m_f,
                                               int workers = 1);

}  // namespace fsuq
