#pragma once

#include <string>

#include "json.hpp"

#include "dsaddle/instance_gen.hpp"
#include "dsaddle/invertibility.hpp"
#include "dsaddle/structured_inverse.hpp"

namespace dsaddle {

using Json = nlohmann::ordered_json;

inline constexpr const char* kDiagnosisSchema = "dsaddle.diagnosis/1";
inline constexpr const char* kInverseSchema = "dsaddle.inverse/1";
inline constexpr const char* kCertificateSchema = "dsaddle.certificate/1";
inline constexpr const char* kVerifySchema = "dsaddle.verify/1";

Json vector_to_json(const Vector& v);

/// {schema, verdict, rule, dims, conditions[], blocks{}, witness?,
///  witness_residual?, oracle_check?}. Layout is documented in
/// docs/report-schema.json.
Json to_json(const BlockSystem& sys, const Diagnosis& d);

/// Same facts as to_json, one per line.
std::string to_text(const BlockSystem& sys, const Diagnosis& d);

Json to_json(const NullityBoundReport& r);

Json to_json(const Certificate& c, Index n, Index m, Index p);

Json to_json(const GeneratorSpec& spec);

/// Missing keys keep their defaults; unknown keys are rejected.
GeneratorSpec generator_spec_from_json(const Json& j);

}  // namespace dsaddle
