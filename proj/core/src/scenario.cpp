#include "fpu/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "fpu/csv.hpp"
#include "fpu/dynamics.hpp"
#include "fpu/errors.hpp"
#include "fpu/svg.hpp"
#include "fpu/system_io.hpp"
#include "fpu/version.hpp"

namespace fpu {

const char* to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::full_chain: return "full_chain";
    case SystemKind::reduced: return "reduced";
    case SystemKind::quasi_harmonic: return "quasi_harmonic";
    case SystemKind::cartoon: return "cartoon";
  }
  return "unknown";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class LineParser {
 public:
  LineParser(std::string source, std::size_t line) : source_(std::move(source)), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source_, line_, msg); }

  double number(const std::string& text) const {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) fail("not a number: '" + text + "'");
    return v;
  }

  std::size_t count(const std::string& text) const {
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      fail("not a non-negative integer: '" + text + "'");
    return v;
  }

  std::vector<double> numbers(const std::string& text) const {
    std::string spaced = text;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream ss(spaced);
    std::vector<double> out;
    for (std::string tok; ss >> tok;) out.push_back(number(tok));
    if (out.empty()) fail("expected a list of numbers");
    return out;
  }

  bool boolean(const std::string& text) const {
    if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
    if (text == "false" || text == "no" || text == "0" || text == "off") return false;
    fail("expected true or false, got '" + text + "'");
  }

 private:
  std::string source_;
  std::size_t line_;
};

// "x12" -> 11 when the prefix matches one of `letters`.
std::optional<std::size_t> indexed_key(const std::string& key, const std::string& letters) {
  if (key.size() < 2 || letters.find(key[0]) == std::string::npos) return std::nullopt;
  std::size_t idx = 0;
  const auto res = std::from_chars(key.data() + 1, key.data() + key.size(), idx);
  if (res.ec != std::errc() || res.ptr != key.data() + key.size() || idx == 0) return std::nullopt;
  return idx - 1;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& source_name,
                        const std::filesystem::path& base_dir) {
  Scenario sc;
  sc.source = source_name;
  std::string section;
  std::set<std::string> seen;
  bool have_kind = false;
  std::string line;
  std::size_t line_no = 0;

  auto resolve = [&](const std::string& value) {
    std::filesystem::path path(value);
    return path.is_absolute() ? path : base_dir / path;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const LineParser lp(source_name, line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') lp.fail("unterminated section marker");
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> known{"scenario", "system", "initial", "integrator", "outputs"};
      if (!known.contains(section)) lp.fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) lp.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) lp.fail("key '" + key + "' outside of any section");
    if (key.empty()) lp.fail("empty key");
    if (value.empty()) lp.fail("empty value for '" + key + "'");
    if (!seen.insert(section + "." + key).second) lp.fail("duplicate key '" + key + "' in [" + section + "]");

    auto unknown = [&] { lp.fail("unknown key '" + key + "' in [" + section + "]"); };

    if (section == "scenario") {
      if (key == "name") {
        if (value.find_first_of("/\\ ") != std::string::npos) lp.fail("name must not contain spaces or slashes");
        sc.name = value;
      } else if (key == "description") {
        sc.description = value;
      } else {
        unknown();
      }
    } else if (section == "system") {
      auto& s = sc.system;
      if (key == "kind") {
        if (value == "full_chain") s.kind = SystemKind::full_chain;
        else if (value == "reduced") s.kind = SystemKind::reduced;
        else if (value == "quasi_harmonic") s.kind = SystemKind::quasi_harmonic;
        else if (value == "cartoon") s.kind = SystemKind::cartoon;
        else lp.fail("unknown system kind '" + value + "'");
        have_kind = true;
      } else if (key == "p") {
        s.p = lp.count(value);
      } else if (key == "n_pairs") {
        s.n_pairs = lp.count(value);
      } else if (key == "a") {
        s.a = lp.number(value);
      } else if (key == "alpha") {
        s.alpha = lp.number(value);
      } else if (key == "id") {
        s.cartoon_id = static_cast<int>(lp.count(value));
      } else if (key == "omegas") {
        s.omegas = lp.numbers(value);
      } else if (key == "file") {
        s.file = resolve(value);
      } else if (key == "reference") {
        s.reference = resolve(value);
      } else {
        unknown();
      }
    } else if (section == "initial") {
      if (key == "q" || key == "x") {
        if (sc.positions) lp.fail("positions given twice");
        sc.positions = lp.numbers(value);
      } else if (key == "v") {
        sc.velocities = lp.numbers(value);
      } else if (auto i = indexed_key(key, "qx")) {
        sc.position_entries[*i] = lp.number(value);
      } else if (auto j = indexed_key(key, "v")) {
        sc.velocity_entries[*j] = lp.number(value);
      } else {
        unknown();
      }
    } else if (section == "integrator") {
      auto& c = sc.integrator;
      if (key == "abs_tol") c.abs_tol = lp.number(value);
      else if (key == "rel_tol") c.rel_tol = lp.number(value);
      else if (key == "t_end") c.t_end = lp.number(value);
      else if (key == "sample_dt") c.sample_dt = lp.number(value);
      else if (key == "max_step") c.max_step = lp.number(value);
      else unknown();
    } else if (section == "outputs") {
      auto& o = sc.outputs;
      if (key == "trajectory") o.trajectory = lp.boolean(value);
      else if (key == "actions") o.actions = lp.boolean(value);
      else if (key == "energy") o.energy = lp.boolean(value);
      else if (key == "report") o.report = lp.boolean(value);
      else unknown();
    }
  }

  const LineParser end(source_name, line_no);
  if (sc.name.empty()) end.fail("missing [scenario] name");
  if (!have_kind) end.fail("missing [system] kind");
  if (sc.positions && !sc.position_entries.empty())
    end.fail("give positions either as a full vector or entry by entry, not both");
  if (sc.velocities && !sc.velocity_entries.empty())
    end.fail("give velocities either as a full vector or entry by entry, not both");
  try {
    sc.integrator.validate();
  } catch (const InvalidArgument& e) {
    end.fail(e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open scenario file");
  Scenario sc = parse_scenario(in, path.string(), path.parent_path());
  sc.source = path;
  return sc;
}

std::size_t BuiltSystem::dof() const {
  return std::visit([](const auto& s) -> std::size_t { return s.dof(); }, system);
}

char BuiltSystem::coordinate() const {
  return std::holds_alternative<QuasiHarmonicSystem>(system) ? 'x' : 'q';
}

BuiltSystem build_system(const SystemSpec& spec) {
  switch (spec.kind) {
    case SystemKind::full_chain: {
      if (spec.n_pairs == 0) throw InvalidArgument("full_chain needs n_pairs >= 1");
      ChainParams params;
      params.n_pairs = spec.n_pairs;
      params.a = spec.a;
      params.alpha = spec.alpha;
      return BuiltSystem{build_chain(params), std::nullopt, std::nullopt};
    }
    case SystemKind::reduced: {
      ReducedSystem red = build_reduced(spec.p, spec.a, spec.alpha);
      ModalBasis basis = eigendecompose(red);
      return BuiltSystem{std::move(red), std::move(basis), std::nullopt};
    }
    case SystemKind::quasi_harmonic: {
      QuasiHarmonicSystem qh = [&] {
        if (!spec.file.empty()) return read_system(spec.file);
        const ReducedSystem red = build_reduced(spec.p, spec.a, spec.alpha);
        return to_quasi_harmonic(red, eigendecompose(red));
      }();
      if (spec.reference.empty()) return BuiltSystem{std::move(qh), std::nullopt, std::nullopt};
      AlignedSystem aligned = align_to_reference(qh, read_system(spec.reference));
      return BuiltSystem{std::move(aligned.system), std::nullopt, std::move(aligned.fit)};
    }
    case SystemKind::cartoon:
      return BuiltSystem{cartoon_system(spec.cartoon_id, spec.omegas), std::nullopt, std::nullopt};
  }
  throw InvalidArgument("unknown system kind");
}

std::pair<std::vector<double>, std::vector<double>> initial_state(const Scenario& sc,
                                                                  std::size_t dof) {
  auto assemble = [&](const std::optional<std::vector<double>>& full,
                      const std::map<std::size_t, double>& entries, const char* what) {
    if (full) {
      if (full->size() != dof) throw DimensionMismatch(what, dof, full->size());
      return *full;
    }
    std::vector<double> out(dof, 0.0);
    for (const auto& [i, value] : entries) {
      if (i >= dof) throw DimensionMismatch(std::string(what) + " index", dof, i + 1);
      out[i] = value;
    }
    return out;
  };
  return {assemble(sc.positions, sc.position_entries, "initial positions"),
          assemble(sc.velocities, sc.velocity_entries, "initial velocities")};
}

void apply_overrides(Scenario& sc, const RunOverrides& o) {
  if (o.abs_tol) sc.integrator.abs_tol = *o.abs_tol;
  if (o.rel_tol) sc.integrator.rel_tol = *o.rel_tol;
  if (o.t_end) sc.integrator.t_end = *o.t_end;
  if (o.sample_dt) sc.integrator.sample_dt = *o.sample_dt;
  sc.integrator.validate();
}

namespace {

std::string join(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? " " : "") + format_double(values[i]);
  return s;
}

// Modal actions for reduced systems: x = T^{-1} q, xdot = T^{-1} v.
ModeActionSeries reduced_actions(const ModalBasis& basis, const Trajectory& tr) {
  ModeActionSeries out;
  out.times = tr.times;
  for (std::size_t s = 0; s < tr.size(); ++s) {
    const auto x = basis.to_modal(tr.positions(s));
    const auto v = basis.to_modal(tr.velocities(s));
    std::vector<double> e(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) e[j] = 0.5 * (v[j] * v[j] + basis.lambdas[j] * x[j] * x[j]);
    out.actions.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const ScenarioRun& run) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  const auto& sc = run.scenario;
  const auto& s = sc.system;
  const auto& c = sc.integrator;
  out << "# fpuchain run manifest\n";
  out << "name = " << sc.name << '\n';
  out << "source = " << sc.source.string() << '\n';
  out << "version = " << version() << '\n';
  out << "kind = " << to_string(s.kind) << '\n';
  if (s.kind == SystemKind::full_chain) out << "n_pairs = " << s.n_pairs << '\n';
  if (s.p) out << "p = " << s.p << '\n';
  if (s.kind != SystemKind::cartoon) {
    out << "a = " << format_double(s.a) << '\n';
    out << "alpha = " << format_double(s.alpha) << '\n';
  } else {
    out << "cartoon_id = " << s.cartoon_id << '\n';
    out << "omegas = " << join(s.omegas) << '\n';
  }
  if (!s.file.empty()) out << "system_file = " << s.file.string() << '\n';
  if (!s.reference.empty()) out << "reference = " << s.reference.string() << '\n';
  const auto& traj = run.result.trajectory;
  if (!traj.states.empty()) {
    out << "initial_positions = " << join(traj.positions(0)) << '\n';
    out << "initial_velocities = " << join(traj.velocities(0)) << '\n';
  }
  out << "abs_tol = " << format_double(c.abs_tol) << '\n';
  out << "rel_tol = " << format_double(c.rel_tol) << '\n';
  out << "t_end = " << format_double(c.t_end) << '\n';
  out << "sample_dt = " << format_double(c.sample_dt) << '\n';
  out << "status = " << to_string(run.result.status) << '\n';
  if (!run.result.message.empty()) out << "message = " << run.result.message << '\n';
  out << "t_reached = " << format_double(run.result.t_reached) << '\n';
  out << "accepted_steps = " << run.result.accepted_steps << '\n';
  out << "rejected_steps = " << run.result.rejected_steps << '\n';
  out << "samples = " << traj.size() << '\n';
  out << "energy_drift = " << format_double(run.energy_drift) << '\n';
  if (run.momentum_deviation) out << "momentum_deviation = " << format_double(*run.momentum_deviation) << '\n';
  if (run.alignment) out << "alignment_residual = " << format_double(run.alignment->residual) << '\n';
  out << "wall_time_s = " << format_double(run.wall_seconds) << '\n';
  for (const auto& f : run.files) out << "output = " << f.filename().string() << '\n';
}

}  // namespace

ScenarioRun run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  sc.integrator.validate();
  ScenarioRun run;
  run.scenario = sc;
  const BuiltSystem built = build_system(sc.system);
  run.alignment = built.alignment;
  const auto [q0, v0] = initial_state(sc, built.dof());

  std::visit(
      [&](const auto& sys) {
        run.result = integrate(sys, q0, v0, sc.integrator, built.coordinate());
        run.energies = energy_series(sys, run.result.trajectory);
      },
      built.system);
  run.energy_drift = relative_drift(run.energies);
  const Trajectory& tr = run.result.trajectory;

  if (const auto* chain = std::get_if<FullChainSystem>(&built.system)) {
    const auto p = momentum_series(*chain, tr);
    double worst = 0.0;
    for (double x : p) worst = std::max(worst, std::abs(x - p.front()));
    run.momentum_deviation = worst;
  }
  run.max_abs_position.assign(tr.dof, 0.0);
  for (std::size_t s = 0; s < tr.size(); ++s)
    for (std::size_t i = 0; i < tr.dof; ++i)
      run.max_abs_position[i] = std::max(run.max_abs_position[i], std::abs(tr.positions(s)[i]));

  if (!out_dir.empty()) {
    const auto dir = out_dir / sc.name;
    std::filesystem::create_directories(dir);
    const std::string coord(1, tr.coordinate);

    if (sc.outputs.trajectory) {
      write_trajectory_csv(dir / "trajectory.csv", tr);
      std::vector<PlotSeries> series;
      for (std::size_t i = 0; i < tr.dof; ++i)
        series.push_back({coord + std::to_string(i + 1), tr.times, tr.position_series(i)});
      write_svg_plot(dir / "trajectory.svg", {sc.name + ": positions", "t", coord}, series);
      run.files.push_back(dir / "trajectory.csv");
      run.files.push_back(dir / "trajectory.svg");
    }
    if (sc.outputs.actions) {
      std::optional<ModeActionSeries> actions;
      if (const auto* qh = std::get_if<QuasiHarmonicSystem>(&built.system))
        actions = mode_actions(*qh, tr);
      else if (built.basis)
        actions = reduced_actions(*built.basis, tr);
      if (actions) {
        std::vector<std::string> header{"t"};
        std::vector<std::vector<double>> columns{actions->times};
        std::vector<PlotSeries> series;
        for (std::size_t j = 0; j < tr.dof; ++j) {
          header.push_back("E" + std::to_string(j + 1));
          columns.push_back(actions->series(j));
          series.push_back({header.back(), actions->times, columns.back()});
        }
        write_csv(dir / "actions.csv", header, columns);
        write_svg_plot(dir / "actions.svg", {sc.name + ": mode actions", "t", "E"}, series);
        run.files.push_back(dir / "actions.csv");
        run.files.push_back(dir / "actions.svg");
      }
    }
    if (sc.outputs.energy) {
      const std::vector<std::string> header{"t", "energy"};
      const std::vector<std::vector<double>> columns{tr.times, run.energies};
      write_csv(dir / "energy.csv", header, columns);
      write_svg_plot(dir / "energy.svg", {sc.name + ": energy", "t", "E"},
                     {{"energy", tr.times, run.energies}});
      run.files.push_back(dir / "energy.csv");
      run.files.push_back(dir / "energy.svg");
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (sc.outputs.report) {
      std::ofstream rep(dir / "report.txt", std::ios::binary);
      rep << format_run_report(run);
      run.files.push_back(dir / "report.txt");
    }
    run.files.push_back(dir / "manifest.txt");
    write_manifest(dir / "manifest.txt", run);
  }
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

std::string format_run_report(const ScenarioRun& run) {
  std::ostringstream out;
  const auto& sc = run.scenario;
  const auto& tr = run.result.trajectory;
  out << "scenario " << sc.name << '\n';
  if (!sc.description.empty()) out << "  " << sc.description << '\n';
  out << "system: " << to_string(sc.system.kind);
  if (sc.system.kind == SystemKind::full_chain) out << ", " << 2 * sc.system.n_pairs << " particles";
  if (sc.system.p) out << ", p = " << sc.system.p;
  if (sc.system.kind != SystemKind::cartoon)
    out << ", a = " << format_double(sc.system.a) << ", alpha = " << format_double(sc.system.alpha);
  out << '\n';
  if (run.alignment)
    out << "reference coordinates: scaling residual " << format_double(run.alignment->residual)
        << ", max eigenvalue gap " << format_double(run.alignment->max_lambda_gap) << '\n';
  out << "status: " << to_string(run.result.status);
  if (!run.result.message.empty()) out << " (" << run.result.message << ')';
  out << '\n';
  out << "t reached " << format_double(run.result.t_reached) << " of " << format_double(sc.integrator.t_end)
      << ", " << run.result.accepted_steps << " steps accepted, " << run.result.rejected_steps
      << " rejected\n";
  out << "energy drift " << format_double(run.energy_drift) << '\n';
  if (run.momentum_deviation) out << "momentum deviation " << format_double(*run.momentum_deviation) << '\n';
  out << "max |" << tr.coordinate << "_i| over the run:\n";
  for (std::size_t i = 0; i < run.max_abs_position.size(); ++i)
    out << "  " << tr.coordinate << i + 1 << "  " << format_double(run.max_abs_position[i]) << '\n';
  return out.str();
}

}  // namespace fpu
