#pragma once

#include "wavebt/simulate.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace wavebt {

/// Fully validated model description: geometry, boundary partition, material,
/// damping, and simulation settings, with documented defaults applied. The
/// canonical JSON (defaults filled in) is kept for reproducible re-emission.
struct ModelConfig {
  int dim = 1;
  std::array<double, 2> extents{1.0, 1.0};
  std::array<int, 2> cells{1, 1};
  std::array<BoundaryLabel, 4> edge_labels{};  // left, right[, bottom, top]

  Vector rho;    // per cell
  Vector tcoef;  // per face
  double delta = 1e-8;

  struct DampingEntry {
    enum class Kind { zero, scalar, skew, matrix } kind = Kind::zero;
    double value = 0.0;   // scalar gain or skew coupling strength
    Matrix explicit_matrix;
  };
  DampingEntry qi, qb;

  SimulationConfig sim;
  // Displacement-style initial data (z0, w0 per cell); converted to the
  // explicit state g0 = rho .* w0, f0 = Grad z0 once the triplet exists.
  bool initial_from_displacement = false;
  Vector z0, w0;

  Representation representation = Representation::impedance;

  nlohmann::json canonical;
  std::string digest;  // FNV-1a of the canonical JSON text
};

ModelConfig parse_config(const std::filesystem::path& path);
ModelConfig parse_config_json(const nlohmann::json& j,
                              const std::filesystem::path& base_dir = ".");

struct BuiltModel {
  DiscreteTriplet triplet;
  MaterialField material;
  DampingSpec damping;
  WaveBoundarySystem system;  // in the representation the config asked for
  SimulationConfig sim;       // with displacement-style initial data resolved
};

BuiltModel build_model(const ModelConfig& config);

/// Writes any JSON result with the bit-stable formatting contract.
void emit_report(const nlohmann::json& result, const std::filesystem::path& path);

struct SweepVariation {
  std::string pointer;  // JSON pointer into the config document
  nlohmann::json value;
};

struct SweepRun {
  nlohmann::json config;
  std::string error;  // empty on success
  SimulationTrace trace;
  AuditReport audit;
  bool ok = false;
};

/// Runs one simulation per variation (concurrently); per-run failures are
/// reported in the result list and never abort sibling runs.
std::vector<SweepRun> sweep(const ModelConfig& base,
                            const std::vector<SweepVariation>& variations);

nlohmann::json audit_to_json(const AuditReport& report);

}  // namespace wavebt
