#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fpu/coupling.hpp"

namespace fpu {

struct InvariantSummary {
  std::vector<std::size_t> frozen;    // Y, 0-based modes
  std::vector<std::size_t> surviving; // complement, 0-based modes
  std::vector<std::size_t> pairs;     // surviving pairs, 1-based
};

struct SweepRow {
  std::size_t p = 0;
  bool prime = false;
  std::vector<std::pair<double, double>> pair_lambdas;  // (acoustic, optical) per pair
  std::vector<std::size_t> rho;                         // 1-based
  std::vector<std::vector<std::size_t>> cycles;         // 1-based pairs
  std::vector<JanRow> jan;
  bool square_map_ok = false;
  bool jan_ok = false;
  std::size_t candidates_tested = 0;
  std::vector<InvariantSummary> invariants;
  /// (i, j): invariant i's surviving modes are a proper subset of invariant j's.
  std::vector<std::pair<std::size_t, std::size_t>> containments;
  bool optical_forces_acoustic = false;
  bool acoustic_forces_optical = false;
  std::vector<std::string> failures;
  double seconds = 0.0;

  bool interaction() const { return optical_forces_acoustic && acoustic_forces_optical; }
  bool passed() const { return failures.empty(); }
};

struct SweepReport {
  std::size_t p_max = 0;
  double a = 0.01;
  double tau_rel = kPresenceTolerance;
  std::vector<SweepRow> rows;

  bool passed() const;
};

bool is_prime(std::size_t n);

/// Analysis of one odd p: reduction, normal modes, tensor, square map, Jan
/// formula, cycles, invariant V(Y) and the acoustic/optical interaction.
/// Failures are recorded in the row, never thrown.
SweepRow analyse_p(std::size_t p, double a = 0.01, double tau_rel = kPresenceTolerance);

/// Every odd p in [3, p_max]. Rows are computed concurrently and returned in
/// increasing p. Throws InvalidArgument unless 3 <= p_max <= 199.
SweepReport sweep_primes(std::size_t p_max = 47, double a = 0.01,
                         double tau_rel = kPresenceTolerance, std::size_t threads = 0);

std::string format_sweep_report(const SweepReport& report);

}  // namespace fpu
