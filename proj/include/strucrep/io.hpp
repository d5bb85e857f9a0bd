#pragma once

// File formats: tensors as 3x3 JSON arrays, coefficient models as JSON, and
// sample sets as CSV written with 17 significant digits.

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "strucrep/group_rep.hpp"
#include "strucrep/model_fit.hpp"
#include "strucrep/verify.hpp"

namespace strucrep {

using Json = nlohmann::json;

Json to_json(const Mat3& m);
Json to_json(const SymTensor2& t);
/// Shape or type errors throw UsageError.
Mat3 mat3_from_json(const Json& j);

/// Reads a whole file (or stdin for "-"); missing files throw UsageError.
std::string read_text(const std::string& path, std::istream& stdin_stream);
/// Parses JSON text; syntax errors throw UsageError naming `what`.
Json parse_json(const std::string& text, const std::string& what);

/// Asymmetry beyond kSymTol (relative to max(1, max|A|)) throws ValidationError.
SymTensor2 sym_tensor_from_json(const Json& j);

Json model_to_json(const CoefficientModel& m);
/// Structural errors throw UsageError; content errors (unknown group for the
/// basis, mismatched invariant labels, bad degrees) throw ValidationError.
CoefficientModel model_from_json(const Json& j);

Json report_to_json(const VerificationReport& r);
Json fit_to_json(const FitResult& f, const std::optional<ResidualReport>& holdout);

/// Canonical textual form: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

/// Header names for the 6-component layouts.
std::string csv_header(SampleKind kind);
void write_samples(std::ostream& out, const SampleSet& s);
/// Accepts the 6-component header of either kind, or a 9-component full
/// matrix layout (C11,C12,...,C33 then T11..T33 or psi). Malformed rows throw
/// UsageError and contract violations (NaN/Inf, asymmetry, no records) throw
/// ValidationError; both name the offending line.
SampleSet read_samples(std::istream& in, const std::string& source = "input");

}  // namespace strucrep
