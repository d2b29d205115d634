#pragma once

#include <fsuq/fuzzy_variable.hpp>

#include <variant>
#include <vector>

namespace fsuq {

// Dependence model for a vector of fuzzy variables.  NonInteractive treats
// the joint alpha-cut as the Cartesian box of the marginal cuts.
// FullyInteractivePolygonal restricts it to the monotone polygonal chain
// that threads the marginal cut endpoints through every stored level: lower
// endpoints ascending from the requested level up to 1, then upper endpoints
// descending back.
enum class Interaction { NonInteractive, FullyInteractivePolygonal };

struct BoxCut {
    std::vector<Interval> bounds;
};

// Chain through n-space with a cumulative arc-length table; arc.front() is 0
// and arc.back() the total length.  Zero-length segments never appear.  A
// single vertex represents a degenerate (point) cut.
struct PolylineCut {
    std::vector<std::vector<double>> vertices;
    std::vector<double> arc;

    double total_length() const { return arc.back(); }
};

// Point at arc-length position s along the chain, linear between vertices.
// Throws std::invalid_argument when s is outside [0, total_length()].
std::vector<double> arc_length_point(const PolylineCut& cut, double s);

struct JointAlphaCut {
    std::variant<BoxCut, PolylineCut> geometry;

    bool is_box() const { return std::holds_alternative<BoxCut>(geometry); }
    const BoxCut& box() const { return std::get<BoxCut>(geometry); }
    const PolylineCut& polyline() const { return std::get<PolylineCut>(geometry); }
    int dim() const;
};

class FuzzyVector {
public:
    FuzzyVector(std::vector<FuzzyVariable> components, Interaction mode);

    int dim() const { return static_cast<int>(components_.size()); }
    Interaction mode() const { return mode_; }
    const FuzzyVariable& component(int i) const { return components_.at(i); }
    const std::vector<FuzzyVariable>& components() const { return components_; }

    // union of the stored levels of all components, ascending
    const std::vector<double>& levels() const { return levels_; }

    JointAlphaCut joint_alpha_cut(double alpha) const;

private:
    std::vector<FuzzyVariable> components_;
    Interaction mode_;
    std::vector<double> levels_;
};

// Deterministic point sample of a joint cut with roughly `resolution` points
// per independent direction: boxes become tensor grids (degenerate axes
// collapse to their single value), polylines are sampled uniformly in arc
// length with every chain vertex snapped onto the nearest sample slot.
// resolution must be at least 2.
std::vector<std::vector<double>> discretize(const JointAlphaCut& cut, int resolution);

}  // namespace fsuq
