// Command-line front end: certification, mesh emission, simulation, signal
// transforms, energy audits, and parameter sweeps, all driven by one JSON
// config per run.

#include "wavebt/certifier.hpp"
#include "wavebt/config.hpp"
#include "wavebt/io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void print_or_write(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << wavebt::stable_json(report);
  } else {
    wavebt::emit_report(report, out_path);
  }
}

int cmd_certify(const std::string& w1_path, const std::string& w2_path,
                const std::string& oracle_config, const std::string& out_path) {
  wavebt::BoundaryConditionSpec spec{wavebt::read_matrix_csv(w1_path),
                                     wavebt::read_matrix_csv(w2_path)};
  const wavebt::GenerationVerdict verdict = wavebt::classify_generator(spec);

  json report;
  report["classification"] = wavebt::to_string(verdict.classification);
  report["range_condition"] = verdict.range_condition;
  report["sum_injective"] = verdict.sum_injective;
  report["symmetrized_psd"] = verdict.symmetrized_psd;
  report["symmetrized_zero"] = verdict.symmetrized_zero;
  report["kernel_dissipative"] = verdict.kernel_dissipative;
  report["kernel_skew"] = verdict.kernel_skew;
  report["diagnostics"] = verdict.diagnostics;
  if (verdict.v) report["v_norm"] = wavebt::operator_norm(*verdict.v);

  if (!oracle_config.empty()) {
    const wavebt::ModelConfig cfg = wavebt::parse_config(oracle_config);
    const wavebt::BuiltModel model = wavebt::build_model(cfg);
    const auto ham = wavebt::HamiltonianOperator::make(model.triplet, model.material);
    const wavebt::OracleReport oracle =
        wavebt::certify_against_oracle(spec, model.triplet, ham);
    report["oracle_max_norm"] = oracle.max_norm;
    report["oracle_expected_contractive"] = oracle.expected_contractive;
    report["verdict_agrees"] = oracle.verdict_agrees;
  }
  print_or_write(report, out_path);
  return 0;
}

int cmd_build(const std::string& config_path, const std::string& dir) {
  const wavebt::ModelConfig cfg = wavebt::parse_config(config_path);
  const wavebt::BuiltModel model = wavebt::build_model(cfg);
  const auto& t = model.triplet;

  fs::create_directories(dir);
  wavebt::write_matrix_csv(t.div, fs::path(dir) / "div.csv");
  wavebt::write_matrix_csv(t.grad, fs::path(dir) / "grad.csv");
  wavebt::write_matrix_csv(t.trace_dirichlet, fs::path(dir) / "t0.csv");
  wavebt::write_matrix_csv(t.trace_normal, fs::path(dir) / "tperp.csv");
  wavebt::write_matrix_csv(t.cell_weights, fs::path(dir) / "cell_weights.csv");
  wavebt::write_matrix_csv(t.face_weights, fs::path(dir) / "face_weights.csv");
  wavebt::write_matrix_csv(t.boundary_weights, fs::path(dir) / "boundary_weights.csv");

  json manifest;
  manifest["dim"] = cfg.dim;
  manifest["cells"] = cfg.canonical["geometry"]["cells"];
  manifest["partition"] = cfg.canonical["partition"];
  manifest["green_residual"] = wavebt::verify_green_identity(t, 100, 0);
  manifest["boundary_dim"] = t.boundary_dim();
  manifest["config_digest"] = cfg.digest;
  wavebt::emit_report(manifest, fs::path(dir) / "manifest.json");
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
  const wavebt::ModelConfig cfg = wavebt::parse_config(config_path);
  const wavebt::BuiltModel model = wavebt::build_model(cfg);
  wavebt::SimulationTrace trace = wavebt::simulate(model.system, model.sim);
  trace.config_digest = cfg.digest;
  wavebt::write_trace_csv(trace, out_path);
  if (!trace.snapshots_g.empty()) {
    fs::path base(out_path);
    const fs::path stem = base.parent_path() / base.stem();
    wavebt::write_snapshots_csv(trace, stem.string() + "_g.csv", stem.string() + "_f.csv");
  }
  return 0;
}

int cmd_cayley(const std::string& trace_path, const std::string& out_path) {
  wavebt::SimulationTrace trace = wavebt::read_trace_csv(trace_path);
  // (u,y) -> ((u+y)/sqrt 2, (u-y)/sqrt 2) is an involution, so the same map
  // serves both directions; only the representation tag flips.
  for (int n = 0; n < trace.steps(); ++n) {
    std::tie(trace.u_mid[n], trace.y_mid[n]) =
        wavebt::external_cayley_signals(trace.u_mid[n], trace.y_mid[n]);
  }
  trace.representation = trace.representation == wavebt::Representation::impedance
                             ? wavebt::Representation::scattering
                             : wavebt::Representation::impedance;
  wavebt::write_trace_csv(trace, out_path);
  return 0;
}

int cmd_audit(const std::string& trace_path, const std::string& config_path,
              const std::string& out_path) {
  const wavebt::SimulationTrace trace = wavebt::read_trace_csv(trace_path);
  const wavebt::ModelConfig cfg = wavebt::parse_config(config_path);
  const wavebt::BuiltModel model = wavebt::build_model(cfg);
  const wavebt::AuditReport report = wavebt::audit_energy_balance(trace, model.system);
  json out = wavebt::audit_to_json(report);
  out["representation"] = wavebt::to_string(trace.representation);
  out["config_digest"] = cfg.digest;
  print_or_write(out, out_path);
  return 0;
}

std::vector<wavebt::SweepVariation> parse_vary(const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos) {
    throw wavebt::ValidationError("--vary expects POINTER=V1,V2,...");
  }
  const std::string pointer = expr.substr(0, eq);
  std::vector<wavebt::SweepVariation> variations;
  std::stringstream ss(expr.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    json value;
    try {
      value = json::parse(item);
    } catch (const json::parse_error&) {
      value = item;  // plain string value
    }
    variations.push_back({pointer, value});
  }
  if (variations.empty()) {
    throw wavebt::ValidationError("--vary lists no values");
  }
  return variations;
}

int cmd_sweep(const std::string& config_path, const std::string& vary_expr,
              const std::string& out_dir) {
  const wavebt::ModelConfig base = wavebt::parse_config(config_path);
  const auto variations = parse_vary(vary_expr);
  const auto runs = wavebt::sweep(base, variations);

  fs::create_directories(out_dir);
  json aggregate = json::array();
  for (size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    json entry;
    entry["index"] = static_cast<int>(i);
    entry["pointer"] = variations[i].pointer;
    entry["value"] = variations[i].value;
    entry["ok"] = run.ok;
    if (run.ok) {
      const std::string stem = "run_" + std::to_string(i);
      wavebt::write_trace_csv(run.trace, fs::path(out_dir) / (stem + "_trace.csv"));
      wavebt::emit_report(wavebt::audit_to_json(run.audit),
                          fs::path(out_dir) / (stem + "_audit.json"));
      entry["audit"] = wavebt::audit_to_json(run.audit);
      entry["trace"] = stem + "_trace.csv";
    } else {
      entry["error"] = run.error;
    }
    aggregate.push_back(std::move(entry));
  }
  wavebt::emit_report(aggregate, fs::path(out_dir) / "sweep.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary-triplet certification and passive wave simulation"};
  app.require_subcommand(1);

  std::string w1_path, w2_path, oracle_config, out_path;
  auto* certify = app.add_subcommand("certify", "classify a boundary condition (W1, W2)");
  certify->add_option("--w1", w1_path, "CSV file with W1")->required();
  certify->add_option("--w2", w2_path, "CSV file with W2")->required();
  certify->add_option("--oracle", oracle_config, "model config for the exponential oracle");
  certify->add_option("--out", out_path, "report path (default: stdout)");

  std::string config_path, dir_path;
  auto* build = app.add_subcommand("build", "build a triplet and emit its matrices");
  build->add_option("--config", config_path, "model config")->required();
  build->add_option("--emit-matrices", dir_path, "output directory")->required();

  std::string sim_config, sim_out;
  auto* simulate = app.add_subcommand("simulate", "run a simulation, write the trace CSV");
  simulate->add_option("--config", sim_config, "model config")->required();
  simulate->add_option("--out", sim_out, "trace CSV path")->required();

  std::string cayley_trace, cayley_out;
  auto* cayley = app.add_subcommand("cayley", "transform trace signals between representations");
  cayley->add_option("--trace", cayley_trace, "input trace CSV")->required();
  cayley->add_option("--out", cayley_out, "output trace CSV")->required();

  std::string audit_trace, audit_config, audit_out;
  auto* audit = app.add_subcommand("audit", "energy-balance audit of a trace");
  audit->add_option("--trace", audit_trace, "trace CSV")->required();
  audit->add_option("--config", audit_config, "model config")->required();
  audit->add_option("--out", audit_out, "report path (default: stdout)");

  std::string sweep_config, sweep_vary, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "run config variations and audit each");
  sweep_cmd->add_option("--config", sweep_config, "base model config")->required();
  sweep_cmd->add_option("--vary", sweep_vary, "JSON-pointer=V1,V2,...")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (certify->parsed()) return cmd_certify(w1_path, w2_path, oracle_config, out_path);
    if (build->parsed()) return cmd_build(config_path, dir_path);
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_out);
    if (cayley->parsed()) return cmd_cayley(cayley_trace, cayley_out);
    if (audit->parsed()) return cmd_audit(audit_trace, audit_config, audit_out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_vary, sweep_out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const wavebt::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const wavebt::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
