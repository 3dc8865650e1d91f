#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qdilate/json_io.hpp"

namespace {

using namespace qdilate;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitInputError = 2;

void emit_error(const Error& e) {
  Json diag;
  diag["error"] = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
  if (e.index().has_value()) diag["error"]["index"] = *e.index();
  std::cerr << diag.dump() << "\n";
}

Json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedDocument, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

void write_result(const Json& result, const std::string& output_path) {
  const std::string text = result.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + output_path + "'");
  out << text;
}

struct CommonOptions {
  double tol_residual = Tolerance{}.eps_residual;
  double tol_rank = Tolerance{}.eps_rank;
  std::string output;

  Tolerance tolerance() const {
    Tolerance tol{tol_residual, tol_rank};
    tol.validate();
    return tol;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--tol-residual", opts.tol_residual, "absolute residual tolerance")
      ->envname("QDILATE_TOL_RESIDUAL");
  cmd->add_option("--tol-rank", opts.tol_rank, "relative rank cutoff");
  cmd->add_option("--output", opts.output, "write the result document to a file");
}

// Parsing/validation failures exit 2; later assertion failures exit 1.
template <typename Inputs, typename Compute>
int run_two_phase(Inputs&& parse_inputs, Compute&& compute) {
  std::optional<std::invoke_result_t<Inputs>> inputs;
  try {
    inputs.emplace(parse_inputs());
  } catch (const Error& e) {
    emit_error(e);
    return kExitInputError;
  }
  try {
    return compute(*inputs);
  } catch (const Error& e) {
    emit_error(e);
    return kExitVerificationFailed;
  }
}

int cmd_decompose(const std::string& povm_path, const CommonOptions& opts) {
  const Tolerance tol = opts.tolerance();
  return run_two_phase(
      [&] { return povm_from_json(load_document(povm_path), tol); },
      [&](const DiscretePOVM& m) {
        const EffectDecomposition dec = decompose_effects(m, tol);
        write_result(decomposition_to_json(dec), opts.output);
        return kExitOk;
      });
}

int cmd_dilate(const std::string& instrument_path, const CommonOptions& opts) {
  const Tolerance tol = opts.tolerance();
  return run_two_phase(
      [&] { return instrument_from_json(load_document(instrument_path), tol); },
      [&](const DiscreteInstrument& instr) {
        const StinespringDilation dil = build_minimal_stinespring(instr, tol);
        const KrausRankVector ranks = kraus_rank_vector(instr, tol);
        std::cerr << "pointer_dim " << dil.pointer_dim << ", kraus ranks [";
        for (std::size_t i = 0; i < ranks.ranks.size(); ++i)
          std::cerr << (i ? ", " : "") << ranks.ranks[i];
        std::cerr << "]\n";
        write_result(dilation_to_json(dil), opts.output);
        return kExitOk;
      });
}

struct ExtendInputs {
  StinespringDilation dilation;
  std::optional<CVector> xi;
};

int cmd_extend(const std::string& dilation_path, const std::string& xi_spec, bool augment,
               const CommonOptions& opts) {
  const Tolerance tol = opts.tolerance();
  return run_two_phase(
      [&] {
        ExtendInputs inputs{dilation_from_json(load_document(dilation_path), tol), std::nullopt};
        const std::size_t app_dim = inputs.dilation.pointer_dim + (augment ? 1 : 0);
        if (xi_spec != "auto") {
          char* end = nullptr;
          const long index = std::strtol(xi_spec.c_str(), &end, 10);
          if (end && *end == '\0') {
            require(index >= 0 && static_cast<std::size_t>(index) < app_dim,
                    ErrorCode::InvalidInput, "probe index out of range");
            inputs.xi = canonical_basis_vector(app_dim, static_cast<std::size_t>(index));
          } else {
            std::ifstream in(xi_spec);
            if (!in) throw Error(ErrorCode::MalformedDocument, "cannot open '" + xi_spec + "'");
            std::ostringstream buffer;
            buffer << in.rdbuf();
            Json j = Json::parse(buffer.str(), nullptr, false);
            require(!j.is_discarded(), ErrorCode::MalformedDocument,
                    "probe file is not valid JSON");
            CVector xi = vector_from_json(j, "probe vector");
            require(xi.size() == app_dim, ErrorCode::DimensionMismatch,
                    "probe vector length must equal the apparatus dimension");
            inputs.xi = std::move(xi);
          }
        }
        return inputs;
      },
      [&](const ExtendInputs& inputs) {
        NormalMeasurementModel model;
        if (augment) {
          model = augment_dilation(inputs.dilation, inputs.xi, tol).model;
        } else {
          model = NormalMeasurementModel{};
          model.sys_dim = inputs.dilation.sys_dim;
          model.app_dim = inputs.dilation.pointer_dim;
          model.pointer_pvm = inputs.dilation.pointer_pvm;
          CVector xi = inputs.xi.value_or(canonical_basis_vector(model.app_dim, 0));
          model.unitary = extend_to_unitary(inputs.dilation.isometry, xi, tol);
          model.probe = std::move(xi);
          for (std::size_t i = 1; i <= model.pointer_pvm.size(); ++i)
            model.outcome_labels.push_back("x" + std::to_string(i));
        }
        const double unitarity =
            (model.unitary.adjoint() * model.unitary -
             CMatrix::identity(model.sys_dim * model.app_dim))
                .frobenius_norm();
        std::cerr << "app_dim " << model.app_dim << ", unitarity residual " << unitarity << "\n";
        write_result(model_to_json(model), opts.output);
        return kExitOk;
      });
}

int cmd_verify(const std::string& model_path, const std::string& instrument_path,
               const CommonOptions& opts) {
  const Tolerance tol = opts.tolerance();
  return run_two_phase(
      [&] {
        return std::pair{model_from_json(load_document(model_path), tol),
                         instrument_from_json(load_document(instrument_path), tol)};
      },
      [&](const auto& inputs) {
        const auto start = std::chrono::steady_clock::now();
        const ModelReport report = verify_model(inputs.first, inputs.second, tol);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_result(model_report_to_json(report, seconds), opts.output);
        return report.pass ? kExitOk : kExitVerificationFailed;
      });
}

struct SimulateArgs {
  std::string state_path;
  std::size_t shots = 1024;
  std::uint64_t seed = 0;
};

int cmd_simulate(const std::string& model_path, const SimulateArgs& args,
                 const CommonOptions& opts) {
  const Tolerance tol = opts.tolerance();
  return run_two_phase(
      [&] {
        return std::pair{model_from_json(load_document(model_path), tol),
                         state_from_json(load_document(args.state_path), tol)};
      },
      [&](const auto& inputs) {
        const ShotRecord record = sample(inputs.first, inputs.second, args.shots, args.seed, tol);
        write_result(shot_record_to_json(record), opts.output);
        return kExitOk;
      });
}

int cmd_decide(const std::string& symbolic_path, const CommonOptions& opts) {
  return run_two_phase([&] { return symbolic_problem_from_json(load_document(symbolic_path)); },
                       [&](const SymbolicProblem& problem) {
                         const ExtendabilityVerdict verdict = decide_problem(problem);
                         write_result(verdict_to_json(verdict), opts.output);
                         return kExitOk;
                       });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normal measurement models of discrete quantum instruments"};
  app.require_subcommand(1);

  CommonOptions opts;

  std::string povm_path;
  auto* decompose = app.add_subcommand("decompose", "rank-1 effect decomposition of a POVM");
  decompose->add_option("povm", povm_path, "povm.json")->required();
  add_common(decompose, opts);

  std::string instrument_path;
  auto* dilate = app.add_subcommand("dilate", "minimal Stinespring dilation of an instrument");
  dilate->add_option("instrument", instrument_path, "instrument.json")->required();
  add_common(dilate, opts);

  std::string dilation_path;
  std::string xi_spec = "auto";
  bool augment = false;
  auto* extend = app.add_subcommand("extend", "extend the dilation isometry to a unitary model");
  extend->add_option("dilation", dilation_path, "dilation.json")->required();
  extend->add_option("--xi", xi_spec, "probe vector: auto, basis index, or a JSON file");
  extend->add_flag("--augment", augment, "grow the apparatus by one sink dimension");
  add_common(extend, opts);

  std::string verify_model_path;
  std::string verify_instrument_path;
  auto* verify = app.add_subcommand("verify", "check a model against an instrument");
  verify->add_option("model", verify_model_path, "model.json")->required();
  verify->add_option("instrument", verify_instrument_path, "instrument.json")->required();
  add_common(verify, opts);

  std::string simulate_model_path;
  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "sample measurement outcomes from a model");
  simulate->add_option("model", simulate_model_path, "model.json")->required();
  simulate->add_option("--state", sim_args.state_path, "state.json")->required();
  simulate->add_option("--shots", sim_args.shots, "number of shots");
  simulate->add_option("--seed", sim_args.seed, "sampler seed");
  add_common(simulate, opts);

  std::string symbolic_path;
  auto* decide = app.add_subcommand("decide", "decide the unitary extension problem symbolically");
  decide->add_option("symbolic", symbolic_path, "symbolic.json")->required();
  add_common(decide, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (decompose->parsed()) return cmd_decompose(povm_path, opts);
    if (dilate->parsed()) return cmd_dilate(instrument_path, opts);
    if (extend->parsed()) return cmd_extend(dilation_path, xi_spec, augment, opts);
    if (verify->parsed()) return cmd_verify(verify_model_path, verify_instrument_path, opts);
    if (simulate->parsed()) return cmd_simulate(simulate_model_path, sim_args, opts);
    if (decide->parsed()) return cmd_decide(symbolic_path, opts);
  } catch (const Error& e) {
    emit_error(e);
    return kExitInputError;
  }
  return kExitInputError;
}
