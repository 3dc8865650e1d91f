#include "qdilate/json_io.hpp"

#include <cmath>
#include <set>

namespace qdilate {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed,
                const std::set<std::string>& required, const std::string& what) {
  require(j.is_object(), ErrorCode::MalformedDocument, what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.contains(key))
      throw Error(ErrorCode::MalformedDocument, what + " has unknown field '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key))
      throw Error(ErrorCode::MalformedDocument, what + " is missing field '" + key + "'");
  }
}

void check_schema_version(const Json& j, const std::string& what) {
  require(j.contains("schema_version"), ErrorCode::MalformedDocument,
          what + " is missing schema_version");
  require(j.at("schema_version").is_number_integer() &&
              j.at("schema_version").get<int>() == kSchemaVersion,
          ErrorCode::MalformedDocument, what + " has unsupported schema_version");
}

Complex complex_from_json(const Json& j, const std::string& what) {
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          ErrorCode::MalformedDocument, what + " entries must be [re, im] pairs");
  const double re = j[0].get<double>();
  const double im = j[1].get<double>();
  require(std::isfinite(re) && std::isfinite(im), ErrorCode::MalformedDocument,
          what + " entries must be finite");
  return Complex(re, im);
}

std::size_t size_field(const Json& j, const std::string& key, const std::string& what) {
  require(j.contains(key) && j.at(key).is_number_integer(), ErrorCode::MalformedDocument,
          what + " needs integer field '" + key + "'");
  const auto v = j.at(key).get<long long>();
  require(v >= 1, ErrorCode::MalformedDocument, what + " field '" + key + "' must be >= 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

Json parse_json_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorCode::MalformedDocument, "input is not valid JSON");
  require(j.is_object(), ErrorCode::MalformedDocument, "document must be a JSON object");
  return j;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), ErrorCode::MalformedDocument,
          what + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  require(j[0].is_array() && !j[0].empty(), ErrorCode::MalformedDocument,
          what + " rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const auto& row : j) {
    require(row.is_array() && row.size() == cols, ErrorCode::MalformedDocument,
            what + " must be rectangular");
    for (const auto& entry : row) entries.push_back(complex_from_json(entry, what));
  }
  return CMatrix(rows, cols, std::move(entries));
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (const Complex& z : v) out.push_back(Json::array({z.real(), z.imag()}));
  return out;
}

CVector vector_from_json(const Json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), ErrorCode::MalformedDocument,
          what + " must be a non-empty array");
  CVector v;
  v.reserve(j.size());
  for (const auto& entry : j) v.push_back(complex_from_json(entry, what));
  return v;
}

Json povm_to_json(const DiscretePOVM& m) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = m.dim;
  Json effects = Json::array();
  for (const CMatrix& effect : m.effects) effects.push_back(matrix_to_json(effect));
  j["effects"] = std::move(effects);
  return j;
}

DiscretePOVM povm_from_json(const Json& j, const Tolerance& tol) {
  check_keys(j, {"schema_version", "dim", "effects"}, {"schema_version", "dim", "effects"},
             "povm document");
  check_schema_version(j, "povm document");
  const std::size_t dim = size_field(j, "dim", "povm document");
  require(j.at("effects").is_array() && !j.at("effects").empty(), ErrorCode::MalformedDocument,
          "povm document needs a non-empty effects array");
  std::vector<CMatrix> effects;
  for (const auto& e : j.at("effects")) effects.push_back(matrix_from_json(e, "effect"));
  for (const CMatrix& e : effects)
    require(e.rows() == dim && e.cols() == dim, ErrorCode::MalformedDocument,
            "effect dimensions disagree with 'dim'");
  return validate_povm(effects, tol);
}

Json instrument_to_json(const DiscreteInstrument& instr) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = instr.dim;
  Json outcomes = Json::array();
  for (const KrausList& ops : instr.outcomes) {
    Json kraus = Json::array();
    for (const CMatrix& a : ops) kraus.push_back(matrix_to_json(a));
    outcomes.push_back(Json{{"kraus", std::move(kraus)}});
  }
  j["outcomes"] = std::move(outcomes);
  return j;
}

DiscreteInstrument instrument_from_json(const Json& j, const Tolerance& tol) {
  check_keys(j, {"schema_version", "dim", "outcomes"}, {"schema_version", "dim", "outcomes"},
             "instrument document");
  check_schema_version(j, "instrument document");
  const std::size_t dim = size_field(j, "dim", "instrument document");
  require(j.at("outcomes").is_array() && !j.at("outcomes").empty(), ErrorCode::MalformedDocument,
          "instrument document needs a non-empty outcomes array");
  std::vector<KrausList> outcomes;
  for (const auto& o : j.at("outcomes")) {
    check_keys(o, {"kraus"}, {"kraus"}, "instrument outcome");
    require(o.at("kraus").is_array() && !o.at("kraus").empty(), ErrorCode::MalformedDocument,
            "outcome needs a non-empty kraus array");
    KrausList ops;
    for (const auto& a : o.at("kraus")) ops.push_back(matrix_from_json(a, "Kraus operator"));
    outcomes.push_back(std::move(ops));
  }
  return validate_instrument(dim, outcomes, tol);
}

Json dilation_to_json(const StinespringDilation& dil) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["sys_dim"] = dil.sys_dim;
  j["pointer_dim"] = dil.pointer_dim;
  j["Y"] = matrix_to_json(dil.isometry);
  Json labels = Json::array();
  for (const auto& [outcome, kraus_index] : dil.pointer_labels)
    labels.push_back(Json::array({outcome, kraus_index}));
  j["pointer_labels"] = std::move(labels);
  return j;
}

StinespringDilation dilation_from_json(const Json& j, const Tolerance& tol) {
  check_keys(j, {"schema_version", "sys_dim", "pointer_dim", "Y", "pointer_labels"},
             {"schema_version", "sys_dim", "pointer_dim", "Y", "pointer_labels"},
             "dilation document");
  check_schema_version(j, "dilation document");
  StinespringDilation dil;
  dil.sys_dim = size_field(j, "sys_dim", "dilation document");
  dil.pointer_dim = size_field(j, "pointer_dim", "dilation document");
  dil.isometry = matrix_from_json(j.at("Y"), "dilation isometry");
  require(dil.isometry.rows() == dil.sys_dim * dil.pointer_dim &&
              dil.isometry.cols() == dil.sys_dim,
          ErrorCode::MalformedDocument, "dilation isometry has wrong shape");
  require(j.at("pointer_labels").is_array() && j.at("pointer_labels").size() == dil.pointer_dim,
          ErrorCode::MalformedDocument, "pointer_labels must list every pointer index");
  std::size_t n_outcomes = 0;
  for (const auto& entry : j.at("pointer_labels")) {
    require(entry.is_array() && entry.size() == 2 && entry[0].is_number_integer() &&
                entry[1].is_number_integer(),
            ErrorCode::MalformedDocument, "pointer label must be [outcome, kraus_index]");
    const std::size_t outcome = entry[0].get<std::size_t>();
    dil.pointer_labels.emplace_back(outcome, entry[1].get<std::size_t>());
    n_outcomes = std::max(n_outcomes, outcome + 1);
  }
  for (std::size_t i = 0; i < n_outcomes; ++i) {
    CMatrix proj(dil.pointer_dim, dil.pointer_dim);
    bool any = false;
    for (std::size_t q = 0; q < dil.pointer_dim; ++q) {
      if (dil.pointer_labels[q].first == i) {
        proj(q, q) = 1.0;
        any = true;
      }
    }
    require(any, ErrorCode::MalformedDocument, "pointer labels skip an outcome index");
    dil.pointer_pvm.push_back(std::move(proj));
  }
  const CMatrix yty = dil.isometry.adjoint() * dil.isometry;
  require((yty - CMatrix::identity(dil.sys_dim)).frobenius_norm() <=
              tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(dil.sys_dim))),
          ErrorCode::NotIsometry, "dilation document violates Y*Y = I");
  return dil;
}

Json model_to_json(const NormalMeasurementModel& model) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["sys_dim"] = model.sys_dim;
  j["app_dim"] = model.app_dim;
  j["U"] = matrix_to_json(model.unitary);
  j["xi"] = vector_to_json(model.probe);
  Json pointer = Json::array();
  for (const CMatrix& p : model.pointer_pvm) pointer.push_back(matrix_to_json(p));
  j["pointer"] = std::move(pointer);
  j["outcome_labels"] = model.outcome_labels;
  return j;
}

NormalMeasurementModel model_from_json(const Json& j, const Tolerance& tol) {
  check_keys(j, {"schema_version", "sys_dim", "app_dim", "U", "xi", "pointer", "outcome_labels"},
             {"schema_version", "sys_dim", "app_dim", "U", "xi", "pointer", "outcome_labels"},
             "model document");
  check_schema_version(j, "model document");
  NormalMeasurementModel model;
  model.sys_dim = size_field(j, "sys_dim", "model document");
  model.app_dim = size_field(j, "app_dim", "model document");
  model.unitary = matrix_from_json(j.at("U"), "model unitary");
  model.probe = vector_from_json(j.at("xi"), "probe vector");
  require(j.at("pointer").is_array() && !j.at("pointer").empty(), ErrorCode::MalformedDocument,
          "model document needs pointer projections");
  for (const auto& p : j.at("pointer"))
    model.pointer_pvm.push_back(matrix_from_json(p, "pointer projection"));
  require(j.at("outcome_labels").is_array() &&
              j.at("outcome_labels").size() == model.pointer_pvm.size(),
          ErrorCode::MalformedDocument, "outcome_labels must match the pointer outcomes");
  for (const auto& label : j.at("outcome_labels")) {
    require(label.is_string(), ErrorCode::MalformedDocument, "outcome labels must be strings");
    model.outcome_labels.push_back(label.get<std::string>());
  }
  model.has_sink = !model.outcome_labels.empty() && model.outcome_labels.back() == "omega0";

  const std::size_t full = model.sys_dim * model.app_dim;
  require(model.unitary.rows() == full && model.unitary.is_square(),
          ErrorCode::MalformedDocument, "model unitary has wrong shape");
  require(model.probe.size() == model.app_dim, ErrorCode::MalformedDocument,
          "probe vector has wrong length");
  require(std::abs(vec_norm(model.probe) - 1.0) <= tol.eps_residual, ErrorCode::NotUnitVector,
          "probe vector must have unit norm");
  require((model.unitary.adjoint() * model.unitary - CMatrix::identity(full)).frobenius_norm() <=
              tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(full))),
          ErrorCode::InvalidInput, "model unitary violates U*U = I");
  CMatrix pointer_sum(model.app_dim, model.app_dim);
  for (const CMatrix& p : model.pointer_pvm) {
    require(p.is_square() && p.rows() == model.app_dim, ErrorCode::MalformedDocument,
            "pointer projection has wrong shape");
    require((p * p - p).frobenius_norm() <= tol.eps_residual * (1.0 + p.frobenius_norm()),
            ErrorCode::InvalidInput, "pointer operators must be projections");
    pointer_sum += p;
  }
  require((pointer_sum - CMatrix::identity(model.app_dim)).frobenius_norm() <=
              tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(model.app_dim))),
          ErrorCode::InvalidInput, "pointer projections must sum to the identity");
  return model;
}

Json state_to_json(const QuantumState& state) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = state.dim;
  j["matrix"] = matrix_to_json(state.matrix);
  return j;
}

QuantumState state_from_json(const Json& j, const Tolerance& tol) {
  check_keys(j, {"schema_version", "dim", "matrix"}, {"schema_version", "dim", "matrix"},
             "state document");
  check_schema_version(j, "state document");
  const std::size_t dim = size_field(j, "dim", "state document");
  const CMatrix rho = matrix_from_json(j.at("matrix"), "density matrix");
  require(rho.rows() == dim && rho.cols() == dim, ErrorCode::MalformedDocument,
          "density matrix dimensions disagree with 'dim'");
  return validate_state(rho, tol);
}

Json decomposition_to_json(const EffectDecomposition& dec) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = dec.dim;
  j["rank_vector"] = dec.rank_vector();
  Json outcomes = Json::array();
  for (const auto& o : dec.outcomes) {
    Json entry;
    entry["eigenvalues"] = o.eigenvalues;
    Json d = Json::array();
    for (const CVector& v : o.d) d.push_back(vector_to_json(v));
    Json g = Json::array();
    for (const CVector& v : o.g) g.push_back(vector_to_json(v));
    entry["d"] = std::move(d);
    entry["g"] = std::move(g);
    outcomes.push_back(std::move(entry));
  }
  j["outcomes"] = std::move(outcomes);
  return j;
}

Json shot_record_to_json(const ShotRecord& record) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["shots"] = record.shots;
  j["seed"] = record.seed;
  j["counts"] = record.counts;
  j["frequencies"] = record.frequencies;
  return j;
}

ShotRecord shot_record_from_json(const Json& j) {
  check_keys(j, {"schema_version", "shots", "seed", "counts", "frequencies"},
             {"schema_version", "shots", "seed", "counts", "frequencies"}, "shots document");
  check_schema_version(j, "shots document");
  ShotRecord record;
  record.shots = size_field(j, "shots", "shots document");
  require(j.at("seed").is_number_unsigned(), ErrorCode::MalformedDocument,
          "seed must be a non-negative integer");
  record.seed = j.at("seed").get<std::uint64_t>();
  record.counts = j.at("counts").get<std::vector<std::size_t>>();
  record.frequencies = j.at("frequencies").get<std::vector<double>>();
  std::size_t total = 0;
  for (std::size_t c : record.counts) total += c;
  require(total == record.shots, ErrorCode::MalformedDocument, "counts must sum to shots");
  return record;
}

Json ext_dim_to_json(const ExtDim& d) {
  if (d.is_infinite()) return Json("inf");
  return Json(d.value());
}

ExtDim ext_dim_from_json(const Json& j, const std::string& what) {
  if (j.is_string()) {
    require(j.get<std::string>() == "inf", ErrorCode::MalformedDocument,
            what + " must be an integer or \"inf\"");
    return ExtDim::infinite();
  }
  require(j.is_number_integer() && j.get<long long>() >= 0, ErrorCode::MalformedDocument,
          what + " must be a non-negative integer or \"inf\"");
  return ExtDim::finite(j.get<std::size_t>());
}

namespace {

Json isometry_rule_to_json(const IndexIsometry& iso) {
  Json j;
  j["source"] = ext_dim_to_json(iso.source);
  j["target_base"] = ext_dim_to_json(iso.target_base);
  j["fibers"] = ext_dim_to_json(iso.fibers);
  if (const auto* shift = std::get_if<IndexIsometry::Shift>(&iso.rule)) {
    j["kind"] = "shift";
    j["offset"] = shift->offset;
  } else if (const auto* embed = std::get_if<IndexIsometry::EmbedPerFiber>(&iso.rule)) {
    j["kind"] = "embed_per_fiber";
    j["stride"] = embed->stride;
  } else if (const auto* diag = std::get_if<IndexIsometry::Diagonal>(&iso.rule)) {
    j["kind"] = "diagonal";
    j["prefix"] = diag->prefix;
    j["cycle"] = diag->cycle;
  } else {
    const auto& table = std::get<IndexIsometry::FiniteTable>(iso.rule);
    j["kind"] = "finite_table";
    Json map = Json::array();
    for (const auto& [base, fiber] : table.map) map.push_back(Json::array({base, fiber}));
    j["map"] = std::move(map);
  }
  return j;
}

IndexIsometry isometry_rule_from_json(const Json& j) {
  check_keys(j,
             {"kind", "source", "target_base", "fibers", "offset", "stride", "prefix", "cycle",
              "map"},
             {"kind", "source", "target_base", "fibers"}, "isometry rule");
  IndexIsometry iso;
  iso.source = ext_dim_from_json(j.at("source"), "isometry source");
  iso.target_base = ext_dim_from_json(j.at("target_base"), "isometry target_base");
  iso.fibers = ext_dim_from_json(j.at("fibers"), "isometry fibers");
  require(j.at("kind").is_string(), ErrorCode::MalformedDocument, "rule kind must be a string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "shift") {
    IndexIsometry::Shift rule;
    if (j.contains("offset")) rule.offset = j.at("offset").get<std::size_t>();
    iso.rule = rule;
  } else if (kind == "embed_per_fiber") {
    IndexIsometry::EmbedPerFiber rule;
    if (j.contains("stride")) rule.stride = j.at("stride").get<std::size_t>();
    iso.rule = rule;
  } else if (kind == "diagonal") {
    IndexIsometry::Diagonal rule;
    if (j.contains("prefix")) rule.prefix = j.at("prefix").get<std::vector<std::size_t>>();
    require(j.contains("cycle"), ErrorCode::MalformedDocument, "diagonal rule needs a cycle");
    rule.cycle = j.at("cycle").get<std::vector<std::size_t>>();
    iso.rule = std::move(rule);
  } else if (kind == "finite_table") {
    IndexIsometry::FiniteTable rule;
    require(j.contains("map") && j.at("map").is_array(), ErrorCode::MalformedDocument,
            "finite_table rule needs a map array");
    for (const auto& entry : j.at("map")) {
      require(entry.is_array() && entry.size() == 2, ErrorCode::MalformedDocument,
              "finite_table entries must be [base, fiber] pairs");
      rule.map.emplace_back(entry[0].get<std::size_t>(), entry[1].get<std::size_t>());
    }
    iso.rule = std::move(rule);
  } else {
    throw Error(ErrorCode::MalformedDocument, "unknown isometry rule kind '" + kind + "'");
  }
  return iso;
}

}  // namespace

Json symbolic_problem_to_json(const SymbolicProblem& problem) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dimA"] = ext_dim_to_json(problem.dim_a);
  j["dimB"] = ext_dim_to_json(problem.dim_b);
  if (problem.non_separable_b) j["nonseparable_B"] = true;
  if (problem.isometry.has_value()) j["isometry_rule"] = isometry_rule_to_json(*problem.isometry);
  if (problem.corank.has_value()) j["corank"] = ext_dim_to_json(*problem.corank);
  if (problem.effect_ranks.has_value()) {
    Json ranks = Json::array();
    for (const ExtDim& r : *problem.effect_ranks) ranks.push_back(ext_dim_to_json(r));
    j["effect_ranks"] = std::move(ranks);
  }
  return j;
}

SymbolicProblem symbolic_problem_from_json(const Json& j) {
  check_keys(j,
             {"schema_version", "dimA", "dimB", "nonseparable_B", "isometry_rule", "corank",
              "effect_ranks"},
             {"schema_version", "dimA", "dimB"}, "symbolic document");
  check_schema_version(j, "symbolic document");
  SymbolicProblem problem;
  problem.dim_a = ext_dim_from_json(j.at("dimA"), "dimA");
  problem.dim_b = ext_dim_from_json(j.at("dimB"), "dimB");
  if (j.contains("nonseparable_B")) {
    require(j.at("nonseparable_B").is_boolean(), ErrorCode::MalformedDocument,
            "nonseparable_B must be boolean");
    problem.non_separable_b = j.at("nonseparable_B").get<bool>();
  }
  if (j.contains("isometry_rule")) problem.isometry = isometry_rule_from_json(j.at("isometry_rule"));
  if (j.contains("corank")) problem.corank = ext_dim_from_json(j.at("corank"), "corank");
  if (j.contains("effect_ranks")) {
    require(j.at("effect_ranks").is_array(), ErrorCode::MalformedDocument,
            "effect_ranks must be an array");
    std::vector<ExtDim> ranks;
    for (const auto& r : j.at("effect_ranks")) ranks.push_back(ext_dim_from_json(r, "effect rank"));
    problem.effect_ranks = std::move(ranks);
  }
  require(problem.isometry.has_value() || problem.corank.has_value() ||
              problem.effect_ranks.has_value() || problem.non_separable_b ||
              problem.dim_a.is_finite(),
          ErrorCode::MalformedDocument,
          "symbolic document needs an isometry_rule, corank or effect_ranks");
  return problem;
}

SymbolicProblem fixture_to_problem(const NamedFixture& fixture) {
  SymbolicProblem problem;
  problem.dim_a = fixture.dim_a;
  problem.dim_b = fixture.dim_b;
  problem.isometry = fixture.isometry;
  problem.corank = fixture.given_corank;
  if (!fixture.effect_ranks.empty()) problem.effect_ranks = fixture.effect_ranks;
  return problem;
}

ExtendabilityVerdict decide_problem(const SymbolicProblem& problem) {
  // co-rank information decides exactly when available; effect ranks are the
  // coarser criterion used on their own
  if (problem.isometry.has_value())
    return decide_extendability(problem.dim_a, problem.dim_b, corank(*problem.isometry),
                                problem.non_separable_b);
  if (problem.corank.has_value())
    return decide_extendability(problem.dim_a, problem.dim_b, *problem.corank,
                                problem.non_separable_b);
  if (problem.effect_ranks.has_value())
    return decide_from_ranks(*problem.effect_ranks, problem.dim_a);
  if (problem.non_separable_b || problem.dim_a.is_finite()) {
    // dimension facts alone decide; the co-rank of a finite case is forced
    const ExtDim co_rank = problem.dim_a.is_finite() && problem.dim_b.is_finite()
                               ? ExtDim::finite(problem.dim_a.value() * (problem.dim_b.value() - 1))
                               : ExtDim::infinite();
    return decide_extendability(problem.dim_a, problem.dim_b, co_rank, problem.non_separable_b);
  }
  throw Error(ErrorCode::InvalidInput, "symbolic problem carries no decidable data");
}

Json verdict_to_json(const ExtendabilityVerdict& verdict) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["verdict"] = verdict_name(verdict.verdict);
  j["rule_fired"] = decision_rule_name(verdict.rule_fired);
  if (verdict.witness_corank.has_value())
    j["witness_corank"] = ext_dim_to_json(*verdict.witness_corank);
  j["plus_one_recommended"] = verdict.plus_one_recommended;
  return j;
}

Json model_report_to_json(const ModelReport& report, double seconds) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["residuals"] = Json{{"instrument", report.instrument_residual},
                        {"observable", report.observable_residual},
                        {"probability", report.probability_residual},
                        {"sink", report.sink_residual}};
  j["verdicts"] = Json{{"pass", report.pass}};
  j["timings"] = Json{{"seconds", seconds}};
  return j;
}

}  // namespace qdilate
