#include "wavebt/config.hpp"

#include "wavebt/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>

namespace wavebt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError("config: " + msg); }

double require_number(const json& j, const std::string& key, double fallback,
                      bool has_fallback) {
  if (!j.contains(key)) {
    if (has_fallback) return fallback;
    fail("missing required field '" + key + "'");
  }
  if (!j.at(key).is_number()) fail("field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

Vector field_values(const json& spec, Eigen::Index expected, const std::string& what) {
  if (spec.is_number()) {
    return Vector::Constant(expected, spec.get<double>());
  }
  if (spec.is_array()) {
    if (static_cast<Eigen::Index>(spec.size()) != expected) {
      fail(what + " list has wrong length (expected " + std::to_string(expected) + ")");
    }
    Vector v(expected);
    for (Eigen::Index i = 0; i < expected; ++i) v(i) = spec[static_cast<size_t>(i)].get<double>();
    return v;
  }
  fail(what + " must be a number or a list");
}

Vector vector_from(const json& arr, const std::string& what) {
  if (!arr.is_array()) fail(what + " must be a list of numbers");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

json vector_to(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const json& rows, const std::string& what) {
  if (!rows.is_array()) fail(what + " must be a list of rows");
  const size_t nr = rows.size();
  if (nr == 0) return Matrix(0, 0);
  const size_t nc = rows[0].size();
  Matrix m(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
  for (size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc) fail(what + " has ragged rows");
    for (size_t j = 0; j < nc; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
  }
  return m;
}

Matrix skew_pair_blocks(int dim, double omega) {
  Matrix q = Matrix::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; i += 2) {
    q(i, i + 1) = omega;
    q(i + 1, i) = -omega;
  }
  return q;
}

ModelConfig::DampingEntry parse_damping_entry(const json& j, int dim,
                                              const std::filesystem::path& base_dir,
                                              const std::string& name) {
  ModelConfig::DampingEntry entry;
  if (j.is_null()) return entry;
  const std::string kind = j.value("kind", "zero");
  if (kind == "zero") {
    entry.kind = ModelConfig::DampingEntry::Kind::zero;
  } else if (kind == "scalar") {
    entry.kind = ModelConfig::DampingEntry::Kind::scalar;
    entry.value = require_number(j, "value", 0.0, false);
    entry.explicit_matrix = entry.value * Matrix::Identity(dim, dim);
  } else if (kind == "skew") {
    entry.kind = ModelConfig::DampingEntry::Kind::skew;
    entry.value = require_number(j, "omega", 0.0, false);
    entry.explicit_matrix = skew_pair_blocks(dim, entry.value);
  } else if (kind == "matrix") {
    entry.kind = ModelConfig::DampingEntry::Kind::matrix;
    if (j.contains("values")) {
      entry.explicit_matrix = matrix_from(j.at("values"), name + " values");
    } else if (j.contains("file")) {
      entry.explicit_matrix =
          read_matrix_csv(base_dir / j.at("file").get<std::string>());
    } else {
      fail(name + ": matrix damping needs 'values' or 'file'");
    }
    if (entry.explicit_matrix.rows() != dim || entry.explicit_matrix.cols() != dim) {
      fail(name + ": damping matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
  } else {
    fail(name + ": unknown damping kind '" + kind + "'");
  }
  // Accretivity in the plain sense; the assembly re-checks against the
  // quadrature inner product.
  if (entry.explicit_matrix.size() > 0) {
    const Matrix s = entry.explicit_matrix + entry.explicit_matrix.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().size() > 0 && es.eigenvalues()(0) < -1e-10) {
      fail(name + " must be accretive: " + name + " + " + name +
           "^T has eigenvalue " + format_double(es.eigenvalues()(0)) + " < -1e-10");
    }
  }
  return entry;
}

json damping_entry_to_json(const ModelConfig::DampingEntry& e) {
  json j;
  switch (e.kind) {
    case ModelConfig::DampingEntry::Kind::zero: j["kind"] = "zero"; break;
    case ModelConfig::DampingEntry::Kind::scalar:
      j["kind"] = "scalar";
      j["value"] = e.value;
      break;
    case ModelConfig::DampingEntry::Kind::skew:
      j["kind"] = "skew";
      j["omega"] = e.value;
      break;
    case ModelConfig::DampingEntry::Kind::matrix:
      j["kind"] = "matrix";
      j["values"] = matrix_to(e.explicit_matrix);
      break;
  }
  return j;
}

int face_count(int dim, const std::array<int, 2>& cells) {
  if (dim == 1) return cells[0] + 1;
  return (cells[0] + 1) * cells[1] + cells[0] * (cells[1] + 1);
}

int gamma_dof_count(const ModelConfig& cfg, BoundaryLabel which) {
  int count = 0;
  const int sides = cfg.dim == 1 ? 2 : 4;
  for (int s = 0; s < sides; ++s) {
    if (cfg.edge_labels[s] != which) continue;
    if (cfg.dim == 1) count += 1;
    else count += (s < 2) ? cfg.cells[1] : cfg.cells[0];
  }
  return count;
}

}  // namespace

ModelConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_config_json(j, path.parent_path());
}

ModelConfig parse_config_json(const json& j, const std::filesystem::path& base_dir) {
  ModelConfig cfg;

  if (!j.contains("geometry")) fail("missing 'geometry' section");
  const json& geo = j.at("geometry");
  cfg.dim = geo.value("dim", 1);
  if (cfg.dim != 1 && cfg.dim != 2) fail("geometry.dim must be 1 or 2");
  const json& cells = geo.at("cells");
  const json& extents = geo.at("extents");
  if (!cells.is_array() || static_cast<int>(cells.size()) != cfg.dim) {
    fail("geometry.cells must list one count per axis");
  }
  if (!extents.is_array() || static_cast<int>(extents.size()) != cfg.dim) {
    fail("geometry.extents must list one length per axis");
  }
  for (int a = 0; a < cfg.dim; ++a) {
    cfg.cells[a] = cells[a].get<int>();
    cfg.extents[a] = extents[a].get<double>();
    if (cfg.cells[a] < 1) fail("geometry.cells must be at least 1 per axis");
    if (!(cfg.extents[a] > 0.0)) fail("geometry.extents must be positive");
  }

  // Partition: a list of {side, label}; every side exactly once.
  const std::vector<std::string> side_names =
      cfg.dim == 1 ? std::vector<std::string>{"left", "right"}
                   : std::vector<std::string>{"left", "right", "bottom", "top"};
  if (!j.contains("partition") || !j.at("partition").is_array()) {
    fail("missing 'partition' list");
  }
  std::vector<bool> seen(side_names.size(), false);
  for (const auto& entry : j.at("partition")) {
    const std::string side = entry.value("side", "");
    const std::string label = entry.value("label", "");
    const auto it = std::find(side_names.begin(), side_names.end(), side);
    if (it == side_names.end()) fail("partition: unknown side '" + side + "'");
    const size_t idx = static_cast<size_t>(it - side_names.begin());
    if (seen[idx]) fail("partition: side '" + side + "' labeled more than once");
    seen[idx] = true;
    cfg.edge_labels[idx] = boundary_label_from_string(label);
  }
  for (size_t i = 0; i < side_names.size(); ++i) {
    if (!seen[i]) fail("partition: side '" + side_names[i] + "' is unlabeled");
  }

  // Material fields with the positivity floor.
  if (!j.contains("material")) fail("missing 'material' section");
  const json& mat = j.at("material");
  cfg.delta = mat.value("delta", 1e-8);
  if (!(cfg.delta > 0.0)) fail("material.delta must be positive");
  const int n_cells = cfg.dim == 1 ? cfg.cells[0] : cfg.cells[0] * cfg.cells[1];
  const int n_faces = face_count(cfg.dim, cfg.cells);
  cfg.rho = field_values(mat.at("rho"), n_cells, "material.rho");
  cfg.tcoef = field_values(mat.at("T"), n_faces, "material.T");
  if (cfg.rho.minCoeff() < cfg.delta) {
    fail("material.rho drops below the positivity floor delta");
  }
  if (cfg.tcoef.minCoeff() < cfg.delta) {
    fail("material.T drops below the positivity floor delta");
  }

  const json damping = j.value("damping", json::object());
  const int k1 = gamma_dof_count(cfg, BoundaryLabel::gamma1);
  cfg.qi = parse_damping_entry(damping.value("qi", json()), n_cells, base_dir, "Qi");
  cfg.qb = parse_damping_entry(damping.value("qb", json()), k1, base_dir, "Qb");

  // Simulation settings; dt defaults to 1e-3 * (min h) / (max wave speed).
  const json sim = j.value("simulation", json::object());
  double min_h = cfg.extents[0] / cfg.cells[0];
  if (cfg.dim == 2) min_h = std::min(min_h, cfg.extents[1] / cfg.cells[1]);
  const double c_max = std::sqrt(cfg.tcoef.maxCoeff() / cfg.rho.minCoeff());
  cfg.sim.dt = require_number(sim, "dt", 1e-3 * min_h / c_max, true);
  if (!(cfg.sim.dt > 0.0)) fail("simulation.dt must be positive");
  cfg.sim.t_end = require_number(sim, "t_end", 1.0, true);
  if (cfg.sim.t_end < cfg.sim.dt) fail("simulation.t_end must be at least dt");
  cfg.sim.snapshot_every = static_cast<int>(require_number(sim, "snapshot_every", 0, true));
  if (cfg.sim.snapshot_every < 0) fail("simulation.snapshot_every must be nonnegative");
  cfg.sim.solver_tol = require_number(sim, "solver_tol", 1e-12, true);
  if (!(cfg.sim.solver_tol > 0.0)) fail("simulation.solver_tol must be positive");
  cfg.sim.compat_tol = require_number(sim, "compat_tol", 1e-8, true);
  const std::uint64_t seed = static_cast<std::uint64_t>(require_number(sim, "seed", 0, true));

  const json init = sim.value("initial_state", json::object());
  const std::string init_kind = init.value("kind", "zero");
  cfg.sim.initial.seed = static_cast<std::uint64_t>(require_number(init, "seed", static_cast<double>(seed), true));
  if (init_kind == "zero") {
    cfg.sim.initial.kind = InitialState::Kind::zero;
  } else if (init_kind == "random") {
    cfg.sim.initial.kind = InitialState::Kind::random;
    cfg.sim.initial.energy = require_number(init, "energy", 1.0, true);
    if (cfg.sim.initial.energy < 0.0) fail("initial_state.energy must be nonnegative");
  } else if (init_kind == "explicit") {
    cfg.sim.initial.kind = InitialState::Kind::explicit_state;
    cfg.sim.initial.g0 = vector_from(init.at("g0"), "initial_state.g0");
    cfg.sim.initial.f0 = vector_from(init.at("f0"), "initial_state.f0");
    if (cfg.sim.initial.g0.size() != n_cells) fail("initial_state.g0 must have one value per cell");
    if (cfg.sim.initial.f0.size() != n_faces) fail("initial_state.f0 must have one value per face");
  } else if (init_kind == "displacement") {
    cfg.sim.initial.kind = InitialState::Kind::explicit_state;
    cfg.initial_from_displacement = true;
    cfg.z0 = vector_from(init.at("z0"), "initial_state.z0");
    cfg.w0 = init.contains("w0") ? vector_from(init.at("w0"), "initial_state.w0")
                                 : Vector(Vector::Zero(n_cells));
    if (cfg.z0.size() != n_cells) fail("initial_state.z0 must have one value per cell");
    if (cfg.w0.size() != n_cells) fail("initial_state.w0 must have one value per cell");
  } else {
    fail("unknown initial_state.kind '" + init_kind + "'");
  }

  const int k2 = gamma_dof_count(cfg, BoundaryLabel::gamma2);
  cfg.sim.input.per_dof.assign(static_cast<size_t>(k2), {});
  for (const auto& input : sim.value("inputs", json::array())) {
    const int dof = input.value("dof", -1);
    if (dof < 0 || dof >= k2) fail("inputs.dof out of range for the gamma2 boundary");
    SignalComponent c;
    const std::string kind = input.value("kind", "zero");
    if (kind == "zero") {
      c.kind = SignalComponent::Kind::zero;
    } else if (kind == "sinusoid") {
      c.kind = SignalComponent::Kind::sinusoid;
      c.amplitude = require_number(input, "amplitude", 0.0, false);
      c.frequency = require_number(input, "frequency", 0.0, false);
      c.phase = require_number(input, "phase", 0.0, true);
    } else if (kind == "gaussian_pulse") {
      c.kind = SignalComponent::Kind::gaussian_pulse;
      c.amplitude = require_number(input, "amplitude", 0.0, false);
      c.center = require_number(input, "center", 0.0, false);
      c.width = require_number(input, "width", 1.0, false);
      if (!(c.width > 0.0)) fail("inputs.width must be positive");
    } else {
      fail("unknown input kind '" + kind + "'");
    }
    cfg.sim.input.per_dof[static_cast<size_t>(dof)].push_back(c);
  }

  const std::string rep = j.value("representation", "impedance");
  if (rep == "impedance") cfg.representation = Representation::impedance;
  else if (rep == "scattering") cfg.representation = Representation::scattering;
  else fail("representation must be 'impedance' or 'scattering'");

  // Canonical re-emission with all defaults made explicit.
  json canon;
  canon["geometry"]["dim"] = cfg.dim;
  canon["geometry"]["cells"] = json::array();
  canon["geometry"]["extents"] = json::array();
  for (int a = 0; a < cfg.dim; ++a) {
    canon["geometry"]["cells"].push_back(cfg.cells[a]);
    canon["geometry"]["extents"].push_back(cfg.extents[a]);
  }
  canon["partition"] = json::array();
  for (size_t i = 0; i < side_names.size(); ++i) {
    canon["partition"].push_back(
        {{"side", side_names[i]}, {"label", to_string(cfg.edge_labels[i])}});
  }
  canon["material"] = {{"rho", vector_to(cfg.rho)}, {"T", vector_to(cfg.tcoef)}, {"delta", cfg.delta}};
  canon["damping"] = {{"qi", damping_entry_to_json(cfg.qi)}, {"qb", damping_entry_to_json(cfg.qb)}};
  json sim_out;
  sim_out["dt"] = cfg.sim.dt;
  sim_out["t_end"] = cfg.sim.t_end;
  sim_out["seed"] = static_cast<double>(seed);
  sim_out["snapshot_every"] = cfg.sim.snapshot_every;
  sim_out["solver_tol"] = cfg.sim.solver_tol;
  sim_out["compat_tol"] = cfg.sim.compat_tol;
  json init_out;
  init_out["kind"] = cfg.initial_from_displacement ? "displacement" : init_kind;
  init_out["seed"] = static_cast<double>(cfg.sim.initial.seed);
  if (init_kind == "random") init_out["energy"] = cfg.sim.initial.energy;
  if (init_kind == "explicit") {
    init_out["g0"] = vector_to(cfg.sim.initial.g0);
    init_out["f0"] = vector_to(cfg.sim.initial.f0);
  }
  if (cfg.initial_from_displacement) {
    init_out["z0"] = vector_to(cfg.z0);
    init_out["w0"] = vector_to(cfg.w0);
  }
  sim_out["initial_state"] = std::move(init_out);
  sim_out["inputs"] = sim.value("inputs", json::array());
  canon["simulation"] = std::move(sim_out);
  canon["representation"] = rep;
  cfg.canonical = std::move(canon);
  cfg.digest = fnv1a_hex(stable_json(cfg.canonical));
  return cfg;
}

BuiltModel build_model(const ModelConfig& cfg) {
  BuiltModel model;
  if (cfg.dim == 1) {
    model.triplet = build_staggered_1d(cfg.cells[0], cfg.extents[0],
                                       {cfg.edge_labels[0], cfg.edge_labels[1]});
  } else {
    model.triplet = build_staggered_2d(cfg.cells[0], cfg.cells[1], cfg.extents[0],
                                       cfg.extents[1],
                                       {cfg.edge_labels[0], cfg.edge_labels[1],
                                        cfg.edge_labels[2], cfg.edge_labels[3]});
  }
  model.material = MaterialField{cfg.rho, cfg.tcoef, cfg.delta};
  model.material.validate(model.triplet);

  if (cfg.qi.kind != ModelConfig::DampingEntry::Kind::zero) {
    model.damping.qi = cfg.qi.explicit_matrix;
  }
  if (cfg.qb.kind != ModelConfig::DampingEntry::Kind::zero) {
    model.damping.qb = cfg.qb.explicit_matrix;
  }

  const WaveBoundarySystem impedance =
      assemble_impedance_system(model.triplet, model.material, model.damping);
  model.system = cfg.representation == Representation::scattering
                     ? assemble_scattering_system(impedance)
                     : impedance;

  model.sim = cfg.sim;
  if (cfg.initial_from_displacement) {
    model.sim.initial.kind = InitialState::Kind::explicit_state;
    model.sim.initial.g0 = cfg.rho.cwiseProduct(cfg.w0);
    model.sim.initial.f0 = model.triplet.grad * cfg.z0;
  }
  return model;
}

void emit_report(const nlohmann::json& result, const std::filesystem::path& path) {
  write_json(result, path);
}

nlohmann::json audit_to_json(const AuditReport& r) {
  return {
      {"per_step_max_residual", r.per_step_max_residual},
      {"cumulative_residual", r.cumulative_residual},
      {"passivity_violations", r.passivity_violations},
      {"total_supply", r.total_supply},
      {"total_dissipation", r.total_dissipation},
      {"e_initial", r.e_initial},
      {"e_final", r.e_final},
      {"e_max", r.e_max},
      {"scale", r.scale},
  };
}

std::vector<SweepRun> sweep(const ModelConfig& base,
                            const std::vector<SweepVariation>& variations) {
  std::vector<std::future<SweepRun>> futures;
  futures.reserve(variations.size());
  for (const auto& variation : variations) {
    futures.push_back(std::async(std::launch::async, [&base, variation]() {
      SweepRun run;
      try {
        json doc = base.canonical;
        doc[json::json_pointer(variation.pointer)] = variation.value;
        run.config = doc;
        const ModelConfig cfg = parse_config_json(doc);
        const BuiltModel model = build_model(cfg);
        run.trace = simulate(model.system, model.sim);
        run.trace.config_digest = cfg.digest;
        run.audit = audit_energy_balance(run.trace, model.system);
        run.ok = true;
      } catch (const std::exception& e) {
        run.error = e.what();
      }
      return run;
    }));
  }
  std::vector<SweepRun> runs;
  runs.reserve(futures.size());
  for (auto& f : futures) runs.push_back(f.get());
  return runs;
}

}  // namespace wavebt
