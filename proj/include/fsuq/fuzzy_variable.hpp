#pragma once

#include <fsuq/interval.hpp>

#include <string>
#include <utility>
#include <vector>

namespace fsuq {

// Fuzzy variable stored as an alpha-cut table: ascending levels in [0,1]
// (first 0, last 1), one nested closed interval per level. Cuts between
// stored levels are linearly interpolated. Immutable after construction.
class FuzzyVariable {
  public:
    Interval alpha_cut(double alpha) const;

    // Largest alpha whose cut contains v; 0 outside the support.
    double membership(double v) const;

    // Zero-cut order relations against a crisp number.
    bool geq_scalar(double a) const { return a <= cuts_.front().lo; }
    bool leq_scalar(double a) const { return a >= cuts_.front().hi; }

    bool is_crisp() const { return cuts_.front().lo == cuts_.front().hi; }

    const std::vector<double>& levels() const { return levels_; }
    const std::vector<Interval>& cuts() const { return cuts_; }
    Interval support() const { return cuts_.front(); }
    Interval core() const { return cuts_.back(); }

    // Piecewise-linear membership curve as (abscissa, degree) samples,
    // walking the lower endpoints up and the upper endpoints back down.
    std::vector<std::pair<double, double>> membership_polyline() const;

    std::vector<std::string> validate() const;

  private:
    FuzzyVariable(std::vector<double> levels, std::vector<Interval> cuts)
        : levels_(std::move(levels)), cuts_(std::move(cuts)) {}

    friend FuzzyVariable from_alpha_cuts(std::vector<double>, std::vector<Interval>);

    std::vector<double> levels_;
    std::vector<Interval> cuts_;
};

// The five working levels used throughout: 0, 0.25, 0.5, 0.75, 1.
std::vector<double> default_levels();

// Triangular variable <l, m, r>; cut at alpha is [l + a(m-l), r - a(r-m)].
// Degenerate cases l = m and/or m = r are allowed (crisp when l = m = r).
FuzzyVariable make_triangular(double l, double m, double r,
                              std::vector<double> levels = {});

// Polygonal variable from 2n ascending (non-strict) vertices for n levels:
// the cut at the j-th stored level is [vertex_j, vertex_{2n+1-j}], 1-indexed.
FuzzyVariable make_polygonal(const std::vector<double>& vertices,
                             std::vector<double> levels = {});

// Builds a variable from a raw cut table. Nesting violations within 1e-12
// are clamped (rounding from computed cuts); anything larger throws with a
// diagnostic naming the offending pair of levels.
FuzzyVariable from_alpha_cuts(std::vector<double> levels, std::vector<Interval> cuts);

// Audits a raw table against the representation invariants; returns one
// message per violation, empty when the table is a valid fuzzy variable.
std::vector<std::string> validate_cut_table(const std::vector<double>& levels,
                                            const std::vector<Interval>& cuts);

}  // namespace fsuq
