#pragma once

#include "wavebt/simulate.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>

namespace wavebt {

/// Dense CSV: one row per line, comma-separated decimals, no header.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

/// Serializes with sorted keys and 17-significant-digit decimals so reruns
/// diff clean.
std::string stable_json(const nlohmann::json& j, int indent = 2);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

/// Trace CSV layout: header t,E,u_1..,y_1..[,v_gamma1_..][,qi_power], first
/// row the initial time/energy with zeroed signal columns, then one row per
/// step carrying that step's end time, end energy, and midpoint samples.
/// Scattering traces name the signal columns us_*/ys_*.
void write_trace_csv(const SimulationTrace& trace, const std::filesystem::path& path);
SimulationTrace read_trace_csv(const std::filesystem::path& path);

/// State snapshots, one file per block: columns t, value_1..value_n.
void write_snapshots_csv(const SimulationTrace& trace,
                         const std::filesystem::path& g_path,
                         const std::filesystem::path& f_path);

/// 17-significant-digit decimal used by every writer.
std::string format_double(double v);

/// FNV-1a digest of a string, as 16 hex characters.
std::string fnv1a_hex(const std::string& text);

}  // namespace wavebt
