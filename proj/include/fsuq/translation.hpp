#pragma once

#include <fsuq/stochastic_field.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace fsuq {

struct MomentSet {
    double mean = 0.0;
    double std = 1.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

// four-parameter beta law: shapes (p, q) on the support [lo, hi]
struct BetaParams {
    double shape_p = 1.0;
    double shape_q = 1.0;
    double lo = 0.0;
    double hi = 1.0;
};

// Thrown when no beta law attains the requested (skewness, kurtosis) pair.
// Carries the offending moments and the nearest workable kurtosis so the
// caller can report something actionable instead of silently projecting.
struct BetaInfeasible : std::invalid_argument {
    BetaInfeasible(const MomentSet& m, double suggestion, const std::string& what)
        : std::invalid_argument(what),
          moments(m),
          suggested_excess_kurtosis(suggestion) {}

    MomentSet moments;
    double suggested_excess_kurtosis;
};

// Moment-matched fit.  Shapes come from the closed-form solution of the
// (skewness, kurtosis) system, the support from (mean, std); the result is
// audited against the analytic beta moments before being returned.
BetaParams fit_beta_from_moments(const MomentSet& moments);

double beta_cdf(const BetaParams& params, double x);
double beta_pdf(const BetaParams& params, double x);

// bracketed root of beta_cdf; u must lie strictly inside (0, 1)
double beta_inverse_cdf(const BetaParams& params, double u);

double standard_normal_cdf(double x);

// the translation map: beta_inverse_cdf(params, Phi(g)), with Phi clamped
// away from {0, 1} so extreme arguments saturate at the support ends
double translate(double g_value, const BetaParams& params);

// Monotone cubic interpolant of translate() over a gaussian window, used
// where the map is applied millions of times per fitted law.  Falls back to
// the exact map outside the window, or entirely when the construction-time
// accuracy audit (1e-8 of the support span) fails.  The default window stops
// at |g| = 6: beyond that Phi(g) sits within a few ulps of 0 or 1, where the
// quantile of a double is a staircase no interpolant can track, and a
// standard normal lands there about twice per billion draws anyway.
class TranslationTable {
public:
    explicit TranslationTable(const BetaParams& params, double g_lo = -6.0,
                              double g_hi = 6.0, int nodes = 1025);

    double operator()(double g) const;
    const BetaParams& params() const { return params_; }
    bool tabulated() const { return use_table_; }

private:
    BetaParams params_;
    double g_lo_;
    double g_hi_;
    double step_;
    std::vector<double> value_;
    std::vector<double> slope_;
    bool use_table_ = true;
};

// translate() applied pointwise to the truncated KL field, parameters
// fitted once from the moment point
std::vector<double> compliance_field(const KLExpansion& kl, int m,
                                     const std::vector<double>& y,
                                     const MomentSet& moments_point);

}  // namespace fsuq
