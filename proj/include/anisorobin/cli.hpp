#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "anisorobin/errors.hpp"
#include "anisorobin/finsler_norm.hpp"
#include "anisorobin/types.hpp"

namespace anisorobin {

/// Malformed or inconsistent run configuration. The message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct AlphaSweep {
  double from = 0.0;
  double to = 0.0;
  int n = 1;  // inclusive endpoints; n = 1 gives just `from`
  bool operator==(const AlphaSweep&) const = default;
};

struct DomainConfig {
  enum class Kind { polygon, wulff, annulus };
  Kind kind = Kind::wulff;
  std::vector<Vec2> vertices;  // polygon
  double radius = 1.0;         // wulff
  double r1 = 0.0;             // annulus
  double r2 = 1.0;
  bool operator==(const DomainConfig&) const = default;
};

struct SolverConfig {
  int refinements = 5;
  int n_nodes = 20000;  // radial grids
  int max_iters = 20000;
  double tolerance = 1e-5;  // verification margins
  double stagnation_tol = 1e-10;
  int wulff_boundary = 256;  // polygon vertices used when a Wulff domain needs a polygon
  int profile_samples = 256;
  std::string method = "auto";  // "auto" or "fem"
  bool operator==(const SolverConfig&) const = default;
};

struct OutputConfig {
  std::string summary;
  std::string eigenfunction;
  std::string records;
  std::string summary_csv;
  std::string curves;
  std::string svg;
  std::string profile;
  bool operator==(const OutputConfig&) const = default;
  bool any() const;
};

struct RunConfig {
  FinslerNorm norm;
  DomainConfig domain;
  std::variant<double, AlphaSweep> alpha = 0.0;
  SolverConfig solver;
  OutputConfig output;
  double epsilon = 0.5;         // annulus thickness for curves and asymptotics
  double hole_perimeter = 0.0;  // chain check
  int workers = 1;
  std::uint64_t seed = 1;
  bool operator==(const RunConfig&) const = default;

  std::vector<double> alphas() const;
  bool is_sweep() const { return std::holds_alternative<AlphaSweep>(alpha); }
};

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json serialize_config(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

/// Each command writes its JSON or CSV result to `out` and returns an exit
/// code; library errors propagate as exceptions.
int cmd_eig(const RunConfig& cfg, std::ostream& out);
/// which: perimeter, area, parallel, asymptotics or chain.
int cmd_verify(const RunConfig& cfg, const std::string& which, std::ostream& out);
int cmd_curves(const RunConfig& cfg, std::ostream& out);
int cmd_geom(const RunConfig& cfg, std::ostream& out);
int cmd_norm_check(const RunConfig& cfg, std::ostream& out);

/// Runs a command with error-to-exit-code mapping and the result cache
/// (directory from ANISOROBIN_CACHE_DIR; bypassed when output files are set).
int run_command(const std::string& command, const RunConfig& cfg, const std::string& which, std::ostream& out,
                std::ostream& err);

/// Entry point of the anisorobin executable.
int cli_main(int argc, char** argv);

}  // namespace anisorobin
