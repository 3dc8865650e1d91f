#pragma once

#include <string>

#include <json.hpp>

#include "qdilate/dilation.hpp"
#include "qdilate/instruments.hpp"
#include "qdilate/models.hpp"
#include "qdilate/observables.hpp"
#include "qdilate/simulate.hpp"
#include "qdilate/symbolic.hpp"

namespace qdilate {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Every document carries schema_version = 1; unknown fields are rejected.
// Matrices are row-major arrays of rows; complex numbers are [re, im].

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& what);
Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j, const std::string& what);

Json povm_to_json(const DiscretePOVM& m);
DiscretePOVM povm_from_json(const Json& j, const Tolerance& tol = {});

Json instrument_to_json(const DiscreteInstrument& instr);
DiscreteInstrument instrument_from_json(const Json& j, const Tolerance& tol = {});

Json dilation_to_json(const StinespringDilation& dil);
StinespringDilation dilation_from_json(const Json& j, const Tolerance& tol = {});

Json model_to_json(const NormalMeasurementModel& model);
NormalMeasurementModel model_from_json(const Json& j, const Tolerance& tol = {});

Json state_to_json(const QuantumState& state);
QuantumState state_from_json(const Json& j, const Tolerance& tol = {});

Json decomposition_to_json(const EffectDecomposition& dec);

Json shot_record_to_json(const ShotRecord& record);
ShotRecord shot_record_from_json(const Json& j);

Json ext_dim_to_json(const ExtDim& d);
ExtDim ext_dim_from_json(const Json& j, const std::string& what);

/// Inputs of the symbolic decision: dimensions plus either an isometry rule,
/// a raw co-rank, or a list of effect ranks.
struct SymbolicProblem {
  ExtDim dim_a = ExtDim::infinite();
  ExtDim dim_b = ExtDim::finite(1);
  bool non_separable_b = false;
  std::optional<IndexIsometry> isometry;
  std::optional<ExtDim> corank;
  std::optional<std::vector<ExtDim>> effect_ranks;
};

Json symbolic_problem_to_json(const SymbolicProblem& problem);
SymbolicProblem symbolic_problem_from_json(const Json& j);
SymbolicProblem fixture_to_problem(const NamedFixture& fixture);

ExtendabilityVerdict decide_problem(const SymbolicProblem& problem);

Json verdict_to_json(const ExtendabilityVerdict& verdict);

Json model_report_to_json(const ModelReport& report, double seconds);

/// Parses text, requiring a JSON object; throws MalformedDocument otherwise.
Json parse_json_text(const std::string& text);

}  // namespace qdilate
