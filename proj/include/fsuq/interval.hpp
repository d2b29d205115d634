#pragma once

namespace fsuq {

// Closed bounded interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const Interval& o, double tol = 0.0) const {
        return lo - tol <= o.lo && o.hi <= hi + tol;
    }
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

// Validating constructor: rejects lo > hi and non-finite endpoints.
Interval make_interval(double lo, double hi);

}  // namespace fsuq
