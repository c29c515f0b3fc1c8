#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fpu/csv.hpp"
#include "fpu/errors.hpp"
#include "fpu/scenario.hpp"
#include "test_util.hpp"

namespace fpu {
namespace {

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in, "test.cfg", test::data_path(""));
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(ScenarioParse, FullExample) {
  const auto sc = parse(
      "# comment\n"
      "[scenario]\nname = demo\ndescription = a test run\n"
      "[system]\nkind = quasi_harmonic\np = 5\na = 0.02\n"
      "[initial]\nx2 = 0.2\nv1 = -0.1\n"
      "[integrator]\nt_end = 50\nsample_dt = 0.5\nabs_tol = 1e-11\n"
      "[outputs]\nactions = true\nenergy = false\n");
  EXPECT_EQ(sc.name, "demo");
  EXPECT_EQ(sc.system.kind, SystemKind::quasi_harmonic);
  EXPECT_EQ(sc.system.p, 5u);
  EXPECT_DOUBLE_EQ(sc.system.a, 0.02);
  EXPECT_EQ(sc.position_entries.at(1), 0.2);
  EXPECT_EQ(sc.velocity_entries.at(0), -0.1);
  EXPECT_DOUBLE_EQ(sc.integrator.t_end, 50.0);
  EXPECT_DOUBLE_EQ(sc.integrator.abs_tol, 1e-11);
  EXPECT_TRUE(sc.outputs.actions);
  EXPECT_FALSE(sc.outputs.energy);
  const auto [q, v] = initial_state(sc, 4);
  EXPECT_EQ(q, (std::vector<double>{0, 0.2, 0, 0}));
  EXPECT_EQ(v, (std::vector<double>{-0.1, 0, 0, 0}));
  EXPECT_THROW(initial_state(sc, 1), DimensionMismatch);
}

TEST(ScenarioParse, ErrorsCarryLineNumbers) {
  const std::string head = "[scenario]\nname = s\n[system]\nkind = reduced\np = 3\n";
  EXPECT_EQ(error_line(head + "[bogus]\n"), 6u);
  EXPECT_EQ(error_line(head + "colour = red\n"), 6u);
  EXPECT_EQ(error_line(head + "p = 5\n"), 6u);
  EXPECT_EQ(error_line(head + "a = abc\n"), 6u);
  EXPECT_EQ(error_line(head + "[integrator]\nt_end\n"), 7u);
  EXPECT_EQ(error_line(head + "[outputs]\nenergy = maybe\n"), 7u);
  EXPECT_EQ(error_line("[scenario]\nname = s\n[system]\nkind = sideways\n"), 4u);
  EXPECT_EQ(error_line("p = 3\n"), 1u);
  EXPECT_GT(error_line("[scenario]\nname = s\n"), 0u);  // missing kind
  EXPECT_GT(error_line(head + "[integrator]\nabs_tol = 1\n"), 0u);
  EXPECT_GT(error_line(head + "[initial]\nq = 1, 2\nq1 = 3\n"), 0u);
}

TEST(ScenarioParse, OverridesApply) {
  auto sc = parse("[scenario]\nname = s\n[system]\nkind = reduced\np = 3\n[integrator]\nt_end = 5\n");
  apply_overrides(sc, {.abs_tol = 1e-12, .t_end = 7.0});
  EXPECT_DOUBLE_EQ(sc.integrator.abs_tol, 1e-12);
  EXPECT_DOUBLE_EQ(sc.integrator.t_end, 7.0);
  EXPECT_DOUBLE_EQ(sc.integrator.rel_tol, 1e-10);
}

TEST(ShippedScenarios, AllParseAndBuild) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(FPUCHAIN_SCENARIO_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++count;
    const auto sc = load_scenario(entry.path());
    EXPECT_EQ(sc.name, entry.path().stem().string());
    const auto sys = build_system(sc.system);
    EXPECT_NO_THROW(initial_state(sc, sys.dof())) << sc.name;
    if (!sc.system.reference.empty()) {
      ASSERT_TRUE(sys.alignment.has_value());
      EXPECT_LT(sys.alignment->residual, 1e-2) << sc.name;
    }
  }
  EXPECT_GE(count, 8u);
}

TEST(RunScenario, WritesOutputsAndManifest) {
  auto sc = load_scenario(test::scenario_path("fig_p3_forcing.cfg"));
  sc.integrator.t_end = 20.0;
  const auto dir = std::filesystem::temp_directory_path() / "fpuchain_unit_run";
  std::filesystem::remove_all(dir);
  const auto run = run_scenario(sc, dir);
  EXPECT_EQ(run.exit_code(), 0);
  const auto base = dir / sc.name;
  for (const char* f : {"trajectory.csv", "trajectory.svg", "actions.csv", "energy.csv", "report.txt", "manifest.txt"})
    EXPECT_TRUE(std::filesystem::exists(base / f)) << f;
  std::ifstream in(base / "trajectory.csv");
  const auto table = read_csv(in);
  EXPECT_EQ(table.columns[0].size(), run.result.trajectory.size());
  EXPECT_EQ(table.columns[3].front(), 0.2);
  std::ifstream man(base / "manifest.txt");
  const std::string text((std::istreambuf_iterator<char>(man)), {});
  EXPECT_NE(text.find("status = completed"), std::string::npos) << text;
  std::filesystem::remove_all(dir);
}

TEST(RunScenario, DivergenceHasDistinctExitCode) {
  const auto sc = load_scenario(test::scenario_path("p3_divergent.cfg"));
  const auto run = run_scenario(sc, {});
  EXPECT_EQ(run.exit_code(), 2);
  EXPECT_EQ(run.result.status, IntegrationStatus::diverged);
  EXPECT_LT(run.result.t_reached, sc.integrator.t_end);
  EXPECT_FALSE(run.result.trajectory.times.empty());
}

}  // namespace
}  // namespace fpu
