#pragma once

#include <fsuq/data_pipeline.hpp>
#include <fsuq/extension.hpp>
#include <fsuq/fuzzy_variable.hpp>
#include <fsuq/fuzzy_vector.hpp>
#include <fsuq/stochastic_field.hpp>

#include <json.hpp>

#include <iosfwd>
#include <vector>

namespace fsuq {

// Every CSV starts with "# fsuq csv v1: <schema>" and a header row; numbers
// are written in shortest round-trip form. Readers skip '#' comments and
// blank lines.

// (alpha, lo, hi) rows, one per stored level
void write_cut_table_csv(std::ostream& out, const FuzzyVariable& variable);
FuzzyVariable read_cut_table_csv(std::istream& in);

// (abscissa, degree) samples of the membership polyline
void write_membership_csv(std::ostream& out, const FuzzyVariable& variable);

// (alpha, u0, F_left, F_right), level-major
void write_pbox_csv(std::ostream& out, const PBoxFamily& family);

// (x, alpha, lo, hi) rows for a fuzzy field sampled at stations
void write_field_csv(std::ostream& out, const std::vector<double>& stations,
                     const std::vector<FuzzyVariable>& values);

// one row per point, columns z1..zd
void write_points_csv(std::ostream& out,
                      const std::vector<std::vector<double>>& points);

// (j, lambda, phi at every grid point), one row per retained mode;
// max_modes < 0 dumps all of them
void write_eigenpairs_csv(std::ostream& out, const KLExpansion& kl,
                          int max_modes = -1);

// (bar, station, x_j, a, b) with b = 1/a
void write_ensemble_csv(std::ostream& out, const SampleEnsemble& ensemble);

// {"levels": [...], "cuts": [[lo,hi],...]}
nlohmann::json to_json(const FuzzyVariable& variable);
FuzzyVariable fuzzy_variable_from_json(const nlohmann::json& j);

// variant-tagged: {"type":"box","bounds":[[lo,hi],...]} or
// {"type":"polyline","vertices":[[...],...]} (arc lengths are derived data
// and rebuilt on import)
nlohmann::json to_json(const JointAlphaCut& cut);
JointAlphaCut joint_cut_from_json(const nlohmann::json& j);

// binary PGM, P5, maxval 255, fiber = 255
void write_pgm(std::ostream& out, const PixelMap& map);
PixelMap read_pgm(std::istream& in);

// {"width", "height", "runs": [...]} with row-major runs alternating
// matrix/fiber, starting with the matrix count (possibly zero)
nlohmann::json run_length_json(const PixelMap& map);
PixelMap pixel_map_from_run_length(const nlohmann::json& j);

// single-column numeric csv; a leading non-numeric row is treated as the
// header, anything after that must parse
std::vector<double> read_value_column_csv(std::istream& in);

// shortest round-trip decimal form, locale independent
std::string format_double(double v);

}  // namespace fsuq
