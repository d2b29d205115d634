#pragma once

#include <fsuq/fuzzy_variable.hpp>
#include <fsuq/fuzzy_vector.hpp>
#include <fsuq/translation.hpp>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fsuq {

// Binary micrograph raster, one micrometer per pixel, row-major.
struct PixelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> occupancy;  // 1 = fiber, 0 = matrix

    bool fiber(int row, int col) const {
        return occupancy[static_cast<std::size_t>(row) * width + col] != 0;
    }
    double volume_fraction() const;
};

// Per-bar modulus samples along the stations of a coarsened map, in GPa.
struct SampleEnsemble {
    int bars = 0;
    int stations = 0;
    std::vector<double> station_x;  // station midpoints, micrometers
    std::vector<double> modulus;    // row-major (bar, station)

    double value(int bar, int station) const {
        return modulus[static_cast<std::size_t>(bar) * stations + station];
    }
};

// Membership fit result: the variable plus the histogram evidence it came
// from. bin_heights holds the repaired membership curve at the bin centers;
// the residuals are the raw least-squares errors of the two limb lines in
// count units.
struct FittedMembership {
    FuzzyVariable variable;
    std::vector<double> bin_edges;
    std::vector<double> bin_heights;
    double rss_rising = 0.0;
    double rss_falling = 0.0;
};

struct DegenerateSpread : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PackingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Splits the map into element_px * element_px elements (one bar per strip of
// rows) and assigns each the harmonic average of its two-phase pixel moduli.
SampleEnsemble harmonic_coarsen(const PixelMap& map, int element_px = 10,
                                double a_fiber = 24.0, double a_matrix = 3.6);

// Compliance samples 1/a across the bars at one station.
std::vector<double> compliance_column(const SampleEnsemble& ensemble,
                                      int station);

// Mean, std (n-1 divisor), skewness and excess kurtosis (n-divisor central
// moments). Throws DegenerateSpread when every sample is equal.
MomentSet sample_moments(const std::vector<double>& values);

// Station-wise compliance moments arranged as four tracks over the stations:
// tracks[0] holds the means, then std, skewness, excess kurtosis.
std::array<std::vector<double>, 4> moment_tracks(const SampleEnsemble& ensemble);

// Histogram-based membership fit: least-squares lines on the rising and
// falling limbs of the bin counts, normalized to peak one, clipped to [0,1],
// made quasi-concave by isotonic regression, then read off at the levels
// (default five) as a polygonal variable.
FittedMembership fit_membership(const std::vector<double>& values,
                                int bins = 20,
                                std::vector<double> levels = {});

// Bundles the four fitted moment variables into a fully interactive vector.
FuzzyVector build_moment_vector(const std::vector<FuzzyVariable>& fitted);

// Synthetic two-phase micrograph: non-overlapping discs on a jittered
// hexagonal lattice, thinned at random until the fiber fraction is within
// one percent of the target. Deterministic in the seed.
PixelMap synthesize_fiber_map(std::uint64_t seed, int width_px = 1700,
                              int height_px = 500,
                              double volume_fraction = 0.63,
                              double fiber_radius_px = 3.5);

}  // namespace fsuq
