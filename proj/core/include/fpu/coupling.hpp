#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpu/spectral.hpp"

namespace fpu {

/// Default presence threshold, relative to the largest tensor magnitude.
inline constexpr double kPresenceTolerance = 1e-10;

/// Mode indices (0-based) of one acoustic/optical pair.
struct PairModes {
  std::size_t acoustic = 0;
  std::size_t optical = 0;
};

/// Looks up the modes of every pair from the labels. Index r of the result
/// is pair r+1. Throws InvalidArgument when the labels are not a complete
/// set of acoustic/optical pairs.
std::vector<PairModes> pair_modes(const QuasiHarmonicSystem& sys);

struct SquareOccurrence {
  std::size_t equation = 0;  // 0-based mode index of the equation
  std::size_t square = 0;    // 0-based mode index whose square appears
  double coefficient = 0.0;
};

/// Where the squares of each pair's modes appear. Pairs are 0-based here;
/// rho[i] is the unique pair whose two equations hold both squares of pair i.
struct SquareMap {
  std::vector<std::size_t> rho;
  std::vector<std::vector<SquareOccurrence>> evidence;  // per source pair
};

SquareMap square_map(const QuasiHarmonicSystem& sys, double tau_rel = kPresenceTolerance);

struct JanRow {
  std::size_t i = 0;        // 1-based pair
  std::size_t rho = 0;      // 1-based
  std::size_t formula = 0;  // min(2i, p - 2i)
  bool agrees = false;
};

/// Compares rho (0-based pairs) against min(2i, p-2i) for every pair.
std::vector<JanRow> jan_check(std::size_t p, std::span<const std::size_t> rho);
bool all_agree(std::span<const JanRow> rows);

/// Disjoint cycles of a permutation of {0..n-1}; each cycle starts at its
/// smallest element and cycles are ordered by that element.
struct CycleDecomposition {
  std::vector<std::vector<std::size_t>> cycles;
};

CycleDecomposition cycle_decomposition(std::span<const std::size_t> permutation);

/// Verdict on V(Y) = { x_i = v_i = 0 for i in Y }.
struct InvariantCandidate {
  std::vector<std::size_t> frozen;  // Y, 0-based, sorted
  bool invariant = false;
  double max_violation = 0.0;  // largest |C_{r,jk}|, r in Y, j,k not in Y
  double threshold = 0.0;      // absolute threshold used
  std::size_t total_modes = 0;
  std::size_t surviving_modes() const { return total_modes - frozen.size(); }
};

InvariantCandidate check_invariance(const QuasiHarmonicSystem& sys,
                                    std::span<const std::size_t> frozen,
                                    double tau_rel = kPresenceTolerance);

/// Tests every V(Y) whose pair set is a nonempty proper union of cycles of rho.
std::vector<InvariantCandidate> enumerate_invariant_candidates(
    const QuasiHarmonicSystem& sys, double tau_rel = kPresenceTolerance);

/// Restriction of the system to `kept` modes (0-based, any order; the result
/// lists them ascending). Throws InvalidArgument when the complement is not
/// invariant.
QuasiHarmonicSystem extract_subsystem(const QuasiHarmonicSystem& sys,
                                      std::span<const std::size_t> kept,
                                      double tau_rel = kPresenceTolerance);

/// Cross-group forcing: edge source -> target when the square of `source`
/// drives `target` and the two modes belong to different groups. For the
/// odd-p reduced systems every mode has exactly one incoming and one
/// outgoing edge, so the edges form a permutation of the modes.
struct ExcitationEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  double coefficient = 0.0;
};

std::vector<ExcitationEdge> excitation_digraph(const QuasiHarmonicSystem& sys,
                                               double tau_rel = kPresenceTolerance);

/// Permutation `next` of modes with next[source] = target, when the digraph
/// is one; std::nullopt otherwise.
std::optional<std::vector<std::size_t>> excitation_permutation(
    std::span<const ExcitationEdge> edges, std::size_t modes);

/// Result of fitting x_i = s_i y_i so that our tensor reproduces a reference.
struct ScalingFit {
  std::vector<double> scales;  // signed s_i; negative means the mode is flipped
  std::vector<bool> flipped;
  double residual = 0.0;  // |C_ref - C_scaled|_F / |C_ref|_F over the union of entries
  double max_lambda_gap = 0.0;
  std::size_t sign_mismatches = 0;
  std::size_t ref_only_entries = 0;   // present in the reference but not ours
  std::size_t ours_only_entries = 0;  // present in ours but not in the reference
};

/// Modes must be in the same order with lambdas within `lambda_tol`.
ScalingFit scaling_equivalence(const QuasiHarmonicSystem& ours, const QuasiHarmonicSystem& ref,
                               double tau_rel = kPresenceTolerance, double lambda_tol = 1e-4);

/// order[r] = index of our mode that matches reference mode r by eigenvalue.
std::vector<std::size_t> match_modes(const QuasiHarmonicSystem& ours,
                                     const QuasiHarmonicSystem& ref, double lambda_tol = 1e-4);

/// Permutes and rescales our system into the reference's ordering and
/// normalisation. The result is exactly our dynamics, written in the
/// reference coordinates.
struct AlignedSystem {
  QuasiHarmonicSystem system;
  std::vector<std::size_t> order;
  ScalingFit fit;
};

AlignedSystem align_to_reference(const QuasiHarmonicSystem& ours, const QuasiHarmonicSystem& ref,
                                 double tau_rel = kPresenceTolerance, double lambda_tol = 1e-4);

}  // namespace fpu
