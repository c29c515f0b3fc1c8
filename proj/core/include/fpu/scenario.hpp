#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fpu/chain.hpp"
#include "fpu/coupling.hpp"
#include "fpu/integrator.hpp"
#include "fpu/reduction.hpp"
#include "fpu/spectral.hpp"

namespace fpu {

// Scenario files are flat "key = value" text with [section] markers and '#'
// comments. Grammar (README has the full key list):
//
//   [scenario]    name, description
//   [system]      kind = full_chain | reduced | quasi_harmonic | cartoon
//                 n_pairs (full_chain), p (reduced, quasi_harmonic), a, alpha,
//                 file (quasi_harmonic read from a system file),
//                 reference (quasi_harmonic: work in the coordinates of a
//                 reference table), id and omegas (cartoon)
//   [initial]     q = ... / x = ... (all positions), v = ... (all velocities),
//                 or single entries such as x2 = 0.2, v1 = 0.065 (1-based)
//   [integrator]  abs_tol, rel_tol, t_end, sample_dt, max_step
//   [outputs]     trajectory, actions, energy, report (true/false)
//
// Relative paths are resolved against the directory of the scenario file.

enum class SystemKind { full_chain, reduced, quasi_harmonic, cartoon };

const char* to_string(SystemKind kind);

struct SystemSpec {
  SystemKind kind = SystemKind::quasi_harmonic;
  std::size_t p = 0;
  std::size_t n_pairs = 0;
  double a = 0.01;
  double alpha = 1.0;
  int cartoon_id = 0;
  std::vector<double> omegas;
  std::filesystem::path file;
  std::filesystem::path reference;
};

struct OutputRequest {
  bool trajectory = true;
  bool actions = false;
  bool energy = true;
  bool report = true;
};

struct Scenario {
  std::string name;
  std::string description;
  SystemSpec system;
  std::optional<std::vector<double>> positions;
  std::optional<std::vector<double>> velocities;
  std::map<std::size_t, double> position_entries;  // 0-based index -> value
  std::map<std::size_t, double> velocity_entries;
  IntegratorConfig integrator;
  OutputRequest outputs;
  std::filesystem::path source;
};

Scenario parse_scenario(std::istream& in, const std::string& source_name,
                        const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// The concrete dynamical system a scenario describes. Cartoons are
/// quasi-harmonic systems.
struct BuiltSystem {
  std::variant<FullChainSystem, ReducedSystem, QuasiHarmonicSystem> system;
  std::optional<ModalBasis> basis;       // reduced systems: for mode actions
  std::optional<ScalingFit> alignment;   // quasi-harmonic with a reference
  std::size_t dof() const;
  char coordinate() const;  // 'q' or 'x'
};

BuiltSystem build_system(const SystemSpec& spec);

/// Full initial state for a system with `dof` coordinates. Throws
/// DimensionMismatch when vectors have the wrong length or an index is out
/// of range.
std::pair<std::vector<double>, std::vector<double>> initial_state(const Scenario& sc,
                                                                  std::size_t dof);

struct RunOverrides {
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::optional<double> t_end;
  std::optional<double> sample_dt;
};

void apply_overrides(Scenario& sc, const RunOverrides& overrides);

struct ScenarioRun {
  Scenario scenario;
  IntegrationResult result;
  std::vector<double> energies;
  double energy_drift = 0.0;
  std::optional<double> momentum_deviation;  // full chain only: max_t |P(t) - P(0)|
  std::optional<ScalingFit> alignment;
  std::vector<double> max_abs_position;  // per coordinate
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> files;

  int exit_code() const { return result.ok() ? 0 : 2; }
};

/// Integrates the scenario. When `out_dir` is non-empty, writes the
/// requested CSV files, one SVG plot per CSV, report.txt and manifest.txt
/// into out_dir/<name>/.
ScenarioRun run_scenario(const Scenario& sc, const std::filesystem::path& out_dir);

/// Human-readable summary of a finished run.
std::string format_run_report(const ScenarioRun& run);

}  // namespace fpu
