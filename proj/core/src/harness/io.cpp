#include "zkb/harness/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "zkb/error.hpp"

namespace zkb::harness {

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw InvalidInput("snapshot file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) ensure_directory(parent.string());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("write failed for '" + path + "'");
}

std::string diagnostics_csv(const Trajectory& traj, double delta) {
  std::string out = kDiagnosticsHeader;
  out += '\n';
  char buf[512];
  for (const auto& r : diagnostics_table(traj, delta)) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.t, r.l2, r.h1, r.h2, r.diss_l2,
                  r.diss_h1, r.nonlin_flux, r.step_iters);
    out += buf;
  }
  return out;
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj, double delta) {
  write_text(path, diagnostics_csv(traj, delta));
}

void write_snapshot(const std::string& path, const GridField& f) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) ensure_directory(parent.string());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write snapshot '" + path + "'");
  os.write(kSnapshotMagic, 4);
  put_le<std::uint32_t>(os, kSnapshotVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.nx()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.ny()));
  for (double v : f.values()) put_le<double>(os, v);
  if (!os) throw Error("write failed for snapshot '" + path + "'");
}

GridField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open snapshot '" + path + "'");
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kSnapshotMagic, 4) != 0) {
    throw InvalidInput("'" + path + "' is not a ZKBS snapshot");
  }
  const auto version = get_le<std::uint32_t>(is);
  if (version != kSnapshotVersion) throw InvalidInput("unsupported snapshot version " + std::to_string(version));
  const auto nx = get_le<std::uint32_t>(is);
  const auto ny = get_le<std::uint32_t>(is);
  if (nx == 0 || ny == 0 || nx > (1u << 20) || ny > (1u << 20)) throw InvalidInput("implausible snapshot shape");
  GridField f(static_cast<int>(nx), static_cast<int>(ny));
  for (double& v : f.values()) v = get_le<double>(is);
  return f;
}

}  // namespace zkb::harness
