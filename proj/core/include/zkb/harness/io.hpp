#pragma once

#include <cstdint>
#include <string>

#include "zkb/domain.hpp"
#include "zkb/trajectory.hpp"

namespace zkb::harness {

inline constexpr char kSnapshotMagic[4] = {'Z', 'K', 'B', 'S'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr const char* kDiagnosticsHeader = "t,l2,h1,h2,diss_l2,diss_h1,nonlin_flux,step_iters";

/// Diagnostics table as CSV with %.17g reals. Throws Error on I/O failure.
void write_diagnostics_csv(const std::string& path, const Trajectory& traj, double delta);
std::string diagnostics_csv(const Trajectory& traj, double delta);

/// Snapshot file: "ZKBS", u32 version, u32 nx, u32 ny, nx*ny little-endian
/// f64 grid values, row-major (x outer). Throws Error on I/O failure.
void write_snapshot(const std::string& path, const GridField& f);
/// Throws InvalidInput on a bad magic, version or truncated payload.
GridField read_snapshot(const std::string& path);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);
/// Creates `dir` and parents; throws ConfigError if that is impossible.
void ensure_directory(const std::string& dir);

}  // namespace zkb::harness
