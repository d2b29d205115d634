#include <fsuq/translation.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fsuq {

namespace {

// continued fraction for the regularized incomplete beta (modified Lentz)
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
    double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_continued_fraction(a, b, x) / a;
    return 1.0 - bt * beta_continued_fraction(b, a, 1.0 - x) / b;
}

MomentSet beta_analytic_moments(const BetaParams& bp) {
    double p = bp.shape_p, q = bp.shape_q, s = p + q;
    double span = bp.hi - bp.lo;
    MomentSet m;
    m.mean = bp.lo + span * p / s;
    m.std = span * std::sqrt(p * q / (s * s * (s + 1.0)));
    m.skewness = 2.0 * (q - p) * std::sqrt(s + 1.0) / ((s + 2.0) * std::sqrt(p * q));
    m.excess_kurtosis = 6.0 * ((q - p) * (q - p) * (s + 1.0) - p * q * (s + 2.0)) /
                        (p * q * (s + 2.0) * (s + 3.0));
    return m;
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

BetaParams fit_beta_from_moments(const MomentSet& mo) {
    if (!(mo.std > 0.0) || !std::isfinite(mo.std) || !std::isfinite(mo.mean) ||
        !std::isfinite(mo.skewness) || !std::isfinite(mo.excess_kurtosis))
        throw std::invalid_argument("moment set needs finite values and std > 0");

    const double g1 = mo.skewness, g2 = mo.excess_kurtosis;
    // attainable band: above the universal bound g1^2 - 2, below the gamma
    // limit 1.5 g1^2 (shapes diverge at both edges)
    const double lower = g1 * g1 - 2.0, upper = 1.5 * g1 * g1;
    if (!(g2 > lower && g2 < upper)) {
        double nudge = 1e-3 * (upper - lower);
        double suggestion = std::clamp(g2, lower + nudge, upper - nudge);
        std::ostringstream os;
        os << "no beta law has skewness " << g1 << " with excess kurtosis " << g2
           << "; attainable range is (" << lower << ", " << upper
           << "), nearest workable value ~" << suggestion;
        throw BetaInfeasible(mo, suggestion, os.str());
    }

    const double s = 6.0 * (g2 - g1 * g1 + 2.0) / (3.0 * g1 * g1 - 2.0 * g2);
    const double d =
        s * g1 * (s + 2.0) /
        std::sqrt(16.0 * (s + 1.0) + g1 * g1 * (s + 2.0) * (s + 2.0));
    const double p = 0.5 * (s - d), q = 0.5 * (s + d);
    const double span = mo.std * s * std::sqrt((s + 1.0) / (p * q));

    BetaParams bp{p, q, mo.mean - span * p / s, 0.0};
    bp.hi = bp.lo + span;

    MomentSet back = beta_analytic_moments(bp);
    if (!close_rel(back.mean, mo.mean, 1e-8) || !close_rel(back.std, mo.std, 1e-8) ||
        !close_rel(back.skewness, mo.skewness, 1e-8) ||
        !close_rel(back.excess_kurtosis, mo.excess_kurtosis, 1e-8))
        throw std::logic_error("beta moment fit failed its roundtrip audit");
    return bp;
}

double beta_cdf(const BetaParams& bp, double x) {
    double t = (x - bp.lo) / (bp.hi - bp.lo);
    return regularized_incomplete_beta(bp.shape_p, bp.shape_q, t);
}

double beta_pdf(const BetaParams& bp, double x) {
    double span = bp.hi - bp.lo;
    double t = (x - bp.lo) / span;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double log_b = std::lgamma(bp.shape_p) + std::lgamma(bp.shape_q) -
                   std::lgamma(bp.shape_p + bp.shape_q);
    return std::exp((bp.shape_p - 1.0) * std::log(t) +
                    (bp.shape_q - 1.0) * std::log1p(-t) - log_b) /
           span;
}

double beta_inverse_cdf(const BetaParams& bp, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("beta_inverse_cdf needs u strictly inside (0,1)");
    double span = bp.hi - bp.lo;
    double a = bp.lo, b = bp.hi;
    double fa = -u, fb = 1.0 - u;
    // false position with the Illinois cut so one-sided stalls cannot happen
    int side = 0;
    for (int it = 0; it < 300 && b - a > 1e-13 * span; ++it) {
        double x = (fb != fa) ? (a * fb - b * fa) / (fb - fa) : 0.5 * (a + b);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        double f = beta_cdf(bp, x) - u;
        if (f == 0.0) return x;
        if (f < 0.0) {
            a = x;
            fa = f;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = x;
            fb = f;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (a + b);
}

double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double translate(double g_value, const BetaParams& bp) {
    double u = standard_normal_cdf(g_value);
    constexpr double u_min = std::numeric_limits<double>::min();
    const double u_max = 1.0 - std::ldexp(1.0, -53);
    u = std::clamp(u, u_min, u_max);
    return beta_inverse_cdf(bp, u);
}

TranslationTable::TranslationTable(const BetaParams& params, double g_lo, double g_hi,
                                   int nodes)
    : params_(params), g_lo_(g_lo), g_hi_(g_hi) {
    if (!(g_hi > g_lo) || nodes < 2)
        throw std::invalid_argument("translation table needs g_lo < g_hi, nodes >= 2");
    step_ = (g_hi_ - g_lo_) / (nodes - 1);

    value_.resize(nodes);
    slope_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        double g = g_lo_ + i * step_;
        value_[i] = translate(g, params_);
        // dx/dg along the translation map
        double phi = std::exp(-0.5 * g * g) / std::sqrt(2.0 * std::numbers::pi);
        double psi = beta_pdf(params_, value_[i]);
        slope_[i] = psi > 0.0 ? phi / psi : 0.0;
    }
    // keep each cubic piece monotone: slopes in [0, 3*secant] on both sides
    for (int i = 0; i < nodes; ++i) {
        double cap = std::numeric_limits<double>::infinity();
        if (i > 0) cap = std::min(cap, 3.0 * (value_[i] - value_[i - 1]) / step_);
        if (i + 1 < nodes) cap = std::min(cap, 3.0 * (value_[i + 1] - value_[i]) / step_);
        slope_[i] = std::clamp(slope_[i], 0.0, cap);
    }

    // audit every midpoint against the exact map; callers that reuse a
    // table amortize this one-time cost over millions of lookups
    double span = params_.hi - params_.lo;
    double worst = 0.0;
    for (int i = 0; i + 1 < nodes; ++i) {
        double g = g_lo_ + (i + 0.5) * step_;
        worst = std::max(worst, std::abs((*this)(g)-translate(g, params_)));
        if (worst > 1e-8 * span) break;
    }
    if (worst > 1e-8 * span) use_table_ = false;
}

double TranslationTable::operator()(double g) const {
    if (!use_table_ || g < g_lo_ || g > g_hi_) return translate(g, params_);
    auto i = static_cast<std::size_t>((g - g_lo_) / step_);
    if (i + 1 >= value_.size()) i = value_.size() - 2;
    double t = (g - (g_lo_ + i * step_)) / step_;
    double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * value_[i] +
           (t3 - 2.0 * t2 + t) * step_ * slope_[i] +
           (-2.0 * t3 + 3.0 * t2) * value_[i + 1] + (t3 - t2) * step_ * slope_[i + 1];
}

std::vector<double> compliance_field(const KLExpansion& kl, int m,
                                     const std::vector<double>& y,
                                     const MomentSet& moments_point) {
    BetaParams bp = fit_beta_from_moments(moments_point);
    std::vector<double> field = evaluate_field(kl, m, y);
    for (double& v : field) v = translate(v, bp);
    return field;
}

}  // namespace fsuq
