#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "shnw/diagnostics.hpp"
#include "shnw/dynamics.hpp"

namespace shnw {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

// -- snapshots ---------------------------------------------------------------
//
// "SHNW", version 0x01, u32 d, u32 dims[d], f64 L, u8 dtype (0 real f64,
// 1 complex f64 pairs), then the physical-space payload, little endian,
// row major. A WaveState file is u followed by ut.

void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in);
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

void write_state(const std::filesystem::path& path, const WaveState& s);
WaveState read_state(const std::filesystem::path& path);

// -- diagnostics CSV ---------------------------------------------------------

void write_records(std::ostream& out, const std::vector<DiagnosticsRecord>& rows);
std::vector<DiagnosticsRecord> read_records(std::istream& in);
void write_records(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& rows);
std::vector<DiagnosticsRecord> read_records(const std::filesystem::path& path);

// -- config ------------------------------------------------------------------

/// Strict parse: unknown keys, wrong types and invariant violations throw
/// ConfigError naming the key.
SimConfig parse_config(std::string_view text);
/// Reads the file and applies the SHNW_SEED override.
SimConfig load_config(const std::filesystem::path& path);
/// Every field, defaults included, with sorted keys.
nlohmann::json config_to_json(const SimConfig& cfg);
std::string canonical_config(const SimConfig& cfg);
/// FNV-1a 64 of canonical_config.
std::uint64_t config_hash(const SimConfig& cfg);

// -- summaries and manifests -------------------------------------------------

nlohmann::json summary_to_json(const EnsembleSummary& s);
EnsembleSummary summary_from_json(const nlohmann::json& j);

nlohmann::json manifest_json(const SimConfig& cfg, const std::filesystem::path& output_dir);

// -- orchestration -----------------------------------------------------------

/// traj_<index>.csv (plus _v and _psi in residual_v) and snapshot files.
std::vector<std::filesystem::path> write_trajectory(const std::filesystem::path& dir,
                                                    const TrajectoryRecord& rec);

struct RunResult {
  TrajectoryRecord record;
  std::filesystem::path dir;
};

/// One trajectory: manifest, CSV and snapshots. Integration failures still
/// write the partial record before rethrowing.
RunResult run_single(const SimConfig& cfg, std::size_t index, const std::filesystem::path& dir);

struct EnsembleResult {
  EnsembleSummary summary;
  std::vector<TrajectoryRecord> records;  // by index
  std::size_t failed = 0;
};

/// Runs cfg.trajectories trajectories on `jobs` threads (0 = hardware) and
/// writes manifest, per-trajectory CSVs and summary.json. Output does not
/// depend on scheduling.
EnsembleResult run_ensemble(const SimConfig& cfg, unsigned jobs, const std::filesystem::path& dir);

/// Same reduction, in memory only.
EnsembleResult simulate_ensemble(const SimConfig& cfg, unsigned jobs);

struct AnalysisResult {
  EnsembleSummary summary;
  std::optional<DriftFit> drift;
};

/// Recomputes the summary (and the Ito drift fit when possible) from the
/// trajectory CSVs in `dir`.
AnalysisResult analyze_directory(const std::filesystem::path& dir);

}  // namespace shnw
