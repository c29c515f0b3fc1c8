// fpuchain: scenario runner and analysis front end.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 integration
// stopped early (divergence, step underflow, step budget), 3 sweep assertion
// failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fpu/coupling.hpp"
#include "fpu/dynamics.hpp"
#include "fpu/equilibria.hpp"
#include "fpu/errors.hpp"
#include "fpu/reduction.hpp"
#include "fpu/scenario.hpp"
#include "fpu/spectral.hpp"
#include "fpu/sweep.hpp"
#include "fpu/system_io.hpp"
#include "fpu/version.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDiverged = 2;
constexpr int kSweepFailure = 3;

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FPUCHAIN_OUT_DIR"); env && *env) return env;
  return "fpuchain-out";
}

std::vector<std::size_t> parse_mode_list(const std::string& text, std::size_t dof) {
  std::vector<std::size_t> out;
  std::string spaced = text;
  for (char& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream ss(spaced);
  for (long long v; ss >> v;) {
    if (v < 1 || static_cast<std::size_t>(v) > dof)
      throw fpu::InvalidArgument("mode " + std::to_string(v) + " outside 1.." + std::to_string(dof));
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  if (!ss.eof()) throw fpu::InvalidArgument("cannot parse mode list '" + text + "'");
  return out;
}

void print_modes(std::ostream& out, const fpu::QuasiHarmonicSystem& sys) {
  out << "modes (" << sys.dof() << "), p = " << sys.p() << ", a = " << fpu::format_double(sys.a())
      << ", alpha = " << fpu::format_double(sys.alpha()) << "\n";
  for (std::size_t i = 0; i < sys.dof(); ++i) {
    const auto& l = sys.labels()[i];
    out << "  x" << i + 1 << "  lambda " << fpu::format_double(sys.lambdas()[i]) << "  "
        << fpu::to_string(l.kind);
    if (l.kind != fpu::ModeKind::other) out << " (pair " << l.pair << ")";
    out << "\n";
  }
  out << "tensor entries: " << sys.entries().size() << ", largest |C| "
      << fpu::format_double(sys.max_abs_coefficient()) << "\n";
}

struct LeakOptions {
  double amplitude = 0.1;
  double t_end = 200.0;
};

int cmd_analyze(const std::string& file, const std::string& reference, const std::string& keep,
                double tau, const LeakOptions& leak_opts) {
  const auto sys = fpu::read_system(std::filesystem::path(file));
  print_modes(std::cout, sys);

  bool paired = true;
  try {
    fpu::pair_modes(sys);
  } catch (const fpu::InvalidArgument&) {
    paired = false;
  }
  if (paired) {
    try {
      const auto map = fpu::square_map(sys, tau);
      std::cout << "square map rho:";
      for (std::size_t i = 0; i < map.rho.size(); ++i) std::cout << ' ' << i + 1 << "->" << map.rho[i] + 1;
      std::cout << "\n";
      if (sys.p() > 0) {
        const auto rows = fpu::jan_check(sys.p(), map.rho);
        std::cout << "min(2i, p-2i): " << (fpu::all_agree(rows) ? "agrees" : "disagrees") << "\n";
      }
      std::cout << "cycles:";
      for (const auto& c : fpu::cycle_decomposition(map.rho).cycles) {
        std::cout << " (";
        for (std::size_t k = 0; k < c.size(); ++k) std::cout << (k ? " " : "") << c[k] + 1;
        std::cout << ")";
      }
      std::cout << "\n";
      const auto candidates = fpu::enumerate_invariant_candidates(sys, tau);
      std::size_t found = 0;
      for (const auto& c : candidates) {
        if (!c.invariant) continue;
        ++found;
        std::cout << "invariant V(Y): " << c.surviving_modes() << " surviving modes, Y = {";
        for (std::size_t k = 0; k < c.frozen.size(); ++k) std::cout << (k ? "," : "") << c.frozen[k] + 1;
        std::cout << "}\n";
      }
      std::cout << "unions of cycles tested: " << candidates.size() << ", invariant: " << found << "\n";
    } catch (const fpu::PatternViolation& e) {
      std::cout << "square map: pattern violated: " << e.what() << "\n";
    }
  }

  const auto edges = fpu::excitation_digraph(sys, tau);
  std::cout << "cross-group square forcing:";
  for (const auto& e : edges) std::cout << " x" << e.source + 1 << "->x" << e.target + 1;
  std::cout << "\n";
  if (const auto perm = fpu::excitation_permutation(edges, sys.dof())) {
    std::cout << "excitation cycles:";
    for (const auto& c : fpu::cycle_decomposition(*perm).cycles) {
      std::cout << " (";
      for (std::size_t k = 0; k < c.size(); ++k) std::cout << (k ? " " : "") << "x" << c[k] + 1;
      std::cout << ")";
    }
    std::cout << "\n";
  }

  if (!keep.empty()) {
    const auto kept = parse_mode_list(keep, sys.dof());
    std::vector<std::size_t> frozen;
    for (std::size_t m = 0; m < sys.dof(); ++m)
      if (std::find(kept.begin(), kept.end(), m) == kept.end()) frozen.push_back(m);
    const auto verdict = fpu::check_invariance(sys, frozen, tau);
    std::cout << "keeping {" << keep << "}: " << (verdict.invariant ? "invariant" : "NOT invariant")
              << " (largest forcing of a frozen mode " << fpu::format_double(verdict.max_violation)
              << ", threshold " << fpu::format_double(verdict.threshold) << ")\n";
    fpu::IntegratorConfig cfg;
    cfg.t_end = leak_opts.t_end;
    cfg.sample_dt = 0.5;
    const auto leak = fpu::invariance_leak(sys, kept, leak_opts.amplitude, cfg);
    std::cout << "  integration from x_kept = " << fpu::format_double(leak_opts.amplitude) << " over t <= "
              << fpu::format_double(leak.t_reached) << " (" << fpu::to_string(leak.status)
              << "): max |x_kept| " << fpu::format_double(leak.max_kept);
    if (frozen.empty())
      std::cout << "\n";
    else
      std::cout << ", max |x_frozen| " << fpu::format_double(leak.max_frozen) << " (x" << leak.worst_mode + 1
                << ")\n";
  }

  if (!reference.empty()) {
    const auto ref = fpu::read_system(std::filesystem::path(reference));
    const auto aligned = fpu::align_to_reference(sys, ref, tau);
    const auto& fit = aligned.fit;
    std::cout << "scaling equivalence with " << reference << ":\n  mode order:";
    for (std::size_t r : aligned.order) std::cout << " x" << r + 1;
    std::cout << "\n  scales:";
    for (double s : fit.scales) std::cout << ' ' << fpu::format_double(s);
    std::cout << "\n  relative residual " << fpu::format_double(fit.residual) << ", max eigenvalue gap "
              << fpu::format_double(fit.max_lambda_gap) << ", sign mismatches " << fit.sign_mismatches
              << ", entries only in reference " << fit.ref_only_entries << ", only in ours "
              << fit.ours_only_entries << "\n";
  }
  return 0;
}

void print_equilibria(const std::vector<fpu::EquilibriumReport>& reports) {
  std::cout << reports.size() << " equilibria\n";
  for (const auto& r : reports) {
    std::cout << "  (";
    for (std::size_t i = 0; i < r.point.size(); ++i)
      std::cout << (i ? ", " : "") << fpu::format_double(std::abs(r.point[i]) < 1e-15 ? 0.0 : r.point[i]);
    std::cout << ")  residual " << fpu::format_double(r.residual) << "\n    eigenvalues:";
    for (const auto& mu : r.eigenvalues) {
      std::ostringstream s;
      s.precision(6);
      s << ' ' << mu.real() + 0.0 << (mu.imag() < 0 ? "-" : "+") << std::abs(mu.imag()) << "i";
      std::cout << s.str();
    }
    std::cout << "\n    " << r.imaginary << " imaginary, " << r.positive_real << " positive real, "
              << r.negative_real << " negative real, " << r.complex << " complex\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpuchain: alternating-mass FPU chain analysis and experiment runner"};
  app.set_version_flag("--version", std::string(fpu::version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<double> abs_tol, rel_tol, t_end, sample_dt;
  std::string out_dir_flag;
  app.add_option("--abs-tol", abs_tol, "absolute integrator tolerance");
  app.add_option("--rel-tol", rel_tol, "relative integrator tolerance");
  app.add_option("--t-end", t_end, "final time");
  app.add_option("--sample-dt", sample_dt, "output sampling interval");
  app.add_option("--out-dir", out_dir_flag, "output directory (default $FPUCHAIN_OUT_DIR or ./fpuchain-out)");

  auto* run = app.add_subcommand("run", "integrate a scenario file and write CSV/SVG/report/manifest");
  std::string scenario_file;
  run->add_option("scenario", scenario_file, "scenario file")->required();

  auto* sweep = app.add_subcommand("sweep", "square map, rho, cycles and invariant manifolds for odd p");
  std::size_t pmax = 47;
  double sweep_a = 0.01;
  std::size_t threads = 0;
  double sweep_tau = fpu::kPresenceTolerance;
  sweep->add_option("--pmax", pmax, "largest odd p (<= 199)")->capture_default_str();
  sweep->add_option("--a", sweep_a, "mass ratio a")->capture_default_str();
  sweep->add_option("--threads", threads, "worker threads (0: all cores)");
  sweep->add_option("--tau", sweep_tau, "relative presence threshold")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "coupling analysis of a system file");
  std::string analyze_file, reference_file, keep;
  double analyze_tau = fpu::kPresenceTolerance;
  analyze->add_option("system", analyze_file, "system file")->required();
  analyze->add_option("--reference", reference_file, "reference table for a scaling-equivalence fit");
  analyze->add_option("--keep", keep, "check invariance of the plane spanned by these modes, e.g. 1,4");
  analyze->add_option("--tau", analyze_tau, "relative presence threshold")->capture_default_str();
  LeakOptions leak_opts;
  analyze->add_option("--keep-amplitude", leak_opts.amplitude, "initial displacement of kept modes in the integration check")
      ->capture_default_str();
  analyze->add_option("--keep-time", leak_opts.t_end, "duration of the integration check")->capture_default_str();

  auto* equilibria = app.add_subcommand("equilibria", "find and classify equilibria");
  std::string eq_file;
  std::size_t eq_reduced_p = 0;
  double eq_a = 0.01, eq_alpha = 1.0, eq_box = 4.0;
  std::size_t eq_grid = 9;
  equilibria->add_option("system", eq_file, "system file (quasi-harmonic coordinates)");
  equilibria->add_option("--reduced", eq_reduced_p, "use the reduced system of this odd p instead");
  equilibria->add_option("--a", eq_a, "mass ratio for --reduced")->capture_default_str();
  equilibria->add_option("--alpha", eq_alpha, "nonlinearity for --reduced")->capture_default_str();
  equilibria->add_option("--box", eq_box, "half-width of the seed box")->capture_default_str();
  equilibria->add_option("--grid", eq_grid, "seeds per dimension")->capture_default_str();

  auto* system = app.add_subcommand("system", "write the quasi-harmonic system of a reduced chain");
  std::size_t sys_p = 3;
  double sys_a = 0.01, sys_alpha = 1.0;
  std::string sys_out;
  system->add_option("--p", sys_p, "odd p")->required();
  system->add_option("--a", sys_a, "mass ratio")->capture_default_str();
  system->add_option("--alpha", sys_alpha, "nonlinearity")->capture_default_str();
  system->add_option("-o,--output", sys_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) {
      auto sc = fpu::load_scenario(scenario_file);
      fpu::apply_overrides(sc, {abs_tol, rel_tol, t_end, sample_dt});
      const auto dir = output_dir(out_dir_flag);
      const auto result = fpu::run_scenario(sc, dir);
      std::cout << fpu::format_run_report(result);
      std::cout << "outputs in " << (dir / sc.name).string() << "\n";
      if (result.exit_code() != 0) {
        std::cerr << "integration stopped early: " << result.result.message << "\n";
        return kDiverged;
      }
      return 0;
    }
    if (*sweep) {
      const auto report = fpu::sweep_primes(pmax, sweep_a, sweep_tau, threads);
      const std::string text = fpu::format_sweep_report(report);
      std::cout << text;
      const auto dir = output_dir(out_dir_flag);
      std::filesystem::create_directories(dir);
      std::ofstream(dir / "sweep_report.txt", std::ios::binary) << text;
      return report.passed() ? 0 : kSweepFailure;
    }
    if (*analyze) return cmd_analyze(analyze_file, reference_file, keep, analyze_tau, leak_opts);
    if (*equilibria) {
      fpu::EquilibriumSearch opts;
      opts.box_halfwidth = eq_box;
      opts.grid_per_dim = eq_grid;
      if (eq_reduced_p) {
        print_equilibria(fpu::find_equilibria(fpu::build_reduced(eq_reduced_p, eq_a, eq_alpha), opts));
      } else if (!eq_file.empty()) {
        print_equilibria(fpu::find_equilibria(fpu::read_system(std::filesystem::path(eq_file)), opts));
      } else {
        std::cerr << "equilibria: give a system file or --reduced P\n";
        return kUsageError;
      }
      return 0;
    }
    if (*system) {
      const auto red = fpu::build_reduced(sys_p, sys_a, sys_alpha);
      const auto qh = fpu::to_quasi_harmonic(red, fpu::eigendecompose(red));
      const std::string comment = "quasi-harmonic system, p = " + std::to_string(sys_p) +
                                  ", M-orthonormal modes in pair order";
      if (sys_out.empty())
        fpu::write_system(std::cout, qh, comment);
      else
        fpu::write_system(std::filesystem::path(sys_out), qh, comment);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
