#pragma once

#include <string>

#include "json.hpp"

#include "specband/core_types.hpp"
#include "specband/interpolation.hpp"
#include "specband/reconstruct.hpp"
#include "specband/spectral.hpp"
#include "specband/vector_poly.hpp"

namespace specband {

using nlohmann::json;

// Complex numbers are written as [re, im] everywhere.
json to_json(cd z);
cd complex_from_json(const json& j);
json to_json(const Eigen::MatrixXcd& m);  // row-major list of rows
Eigen::MatrixXcd matrix_from_json(const json& j);

json to_json(const MatrixSpec& spec);
MatrixSpec spec_from_json(const json& j);

/// Matrix file: {"N", "data"} plus optional structure ("n", "pivot", "tail").
json to_json(const FiniteHermitian& m);
json to_json(const FiniteHermitian& m, const MatrixSpec& structure);
FiniteHermitian hermitian_from_json(const json& j);

json to_json(const VectorPolynomial& r);
VectorPolynomial poly_from_json(const json& j);

json to_json(const BoundaryMatrix& t);
BoundaryMatrix boundary_from_json(const json& j);

json to_json(const StepMeasure& mu);
StepMeasure measure_from_json(const json& j);

json to_json(const SpectralData& sd);
SpectralData spectral_from_json(const json& j);

json to_json(const Height& h);
json to_json(const ValidationReport& rep);
json to_json(const StructureInfo& info);
json to_json(const Decomposition& d);
json to_json(const GeneratorReport& rep);
json to_json(const OrthoResult& res);
json to_json(const RoundTripReport& rep);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace specband
