#include "fpu/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "fpu/errors.hpp"
#include "fpu/linalg.hpp"

namespace fpu {

std::vector<PairModes> pair_modes(const QuasiHarmonicSystem& sys) {
  const std::size_t n = sys.dof();
  if (n % 2 != 0) throw InvalidArgument("pair analysis needs an even number of modes");
  const std::size_t pairs = n / 2;
  std::vector<PairModes> out(pairs, PairModes{n, n});
  for (std::size_t r = 0; r < n; ++r) {
    const auto& label = sys.labels()[r];
    if (label.pair < 1 || label.pair > pairs || label.kind == ModeKind::other)
      throw InvalidArgument("mode " + std::to_string(r + 1) + " has no acoustic/optical pair label");
    auto& slot = label.kind == ModeKind::acoustic ? out[label.pair - 1].acoustic
                                                  : out[label.pair - 1].optical;
    if (slot != n)
      throw InvalidArgument("pair " + std::to_string(label.pair) + " is labelled twice");
    slot = r;
  }
  return out;
}

SquareMap square_map(const QuasiHarmonicSystem& sys, double tau_rel) {
  const auto pairs = pair_modes(sys);
  const std::size_t n = sys.dof();
  const double threshold = tau_rel * sys.max_abs_coefficient();

  std::vector<std::size_t> pair_of(n);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    pair_of[pairs[j].acoustic] = j;
    pair_of[pairs[j].optical] = j;
  }

  SquareMap map;
  map.rho.resize(pairs.size());
  map.evidence.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto& evidence = map.evidence[i];
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t sq : {pairs[i].acoustic, pairs[i].optical}) {
        const double c = sys.coefficient(r, sq, sq);
        if (std::abs(c) > threshold) evidence.push_back({r, sq, c});
      }

    std::vector<std::size_t> target_pairs;
    for (const auto& e : evidence) target_pairs.push_back(pair_of[e.equation]);
    std::sort(target_pairs.begin(), target_pairs.end());
    target_pairs.erase(std::unique(target_pairs.begin(), target_pairs.end()), target_pairs.end());

    auto describe = [&] {
      std::string s;
      for (const auto& e : evidence)
        s += " x" + std::to_string(e.square + 1) + "^2 in eq " + std::to_string(e.equation + 1) +
             " (" + std::to_string(e.coefficient) + ");";
      return s.empty() ? std::string(" none") : s;
    };
    if (target_pairs.size() != 1)
      throw PatternViolation("squares of pair " + std::to_string(i + 1) + " occur in " +
                             std::to_string(target_pairs.size()) + " pairs:" + describe());
    // Both squares must sit in both equations of the target pair.
    if (evidence.size() != 4)
      throw PatternViolation("squares of pair " + std::to_string(i + 1) +
                             " do not occupy both equations of pair " +
                             std::to_string(target_pairs.front() + 1) + ":" + describe());
    map.rho[i] = target_pairs.front();
  }

  std::vector<bool> hit(pairs.size(), false);
  for (std::size_t j : map.rho) {
    if (hit[j]) throw PatternViolation("pair " + std::to_string(j + 1) + " receives squares of two pairs");
    hit[j] = true;
  }
  return map;
}

std::vector<JanRow> jan_check(std::size_t p, std::span<const std::size_t> rho) {
  std::vector<JanRow> rows;
  rows.reserve(rho.size());
  for (std::size_t i0 = 0; i0 < rho.size(); ++i0) {
    const std::size_t i = i0 + 1;
    const std::size_t formula = std::min(2 * i, p > 2 * i ? p - 2 * i : 2 * i);
    rows.push_back({i, rho[i0] + 1, formula, rho[i0] + 1 == formula});
  }
  return rows;
}

bool all_agree(std::span<const JanRow> rows) {
  return std::all_of(rows.begin(), rows.end(), [](const JanRow& r) { return r.agrees; });
}

CycleDecomposition cycle_decomposition(std::span<const std::size_t> permutation) {
  const std::size_t n = permutation.size();
  std::vector<bool> seen(n, false);
  for (std::size_t v : permutation) {
    if (v >= n || seen[v]) throw InvalidArgument("input is not a permutation");
    seen[v] = true;
  }
  std::fill(seen.begin(), seen.end(), false);
  CycleDecomposition out;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> cycle;
    for (std::size_t v = start; !seen[v]; v = permutation[v]) {
      seen[v] = true;
      cycle.push_back(v);
    }
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}


InvariantCandidate check_invariance(const QuasiHarmonicSystem& sys,
                                    std::span<const std::size_t> frozen, double tau_rel) {
  const std::size_t n = sys.dof();
  std::vector<bool> in_y(n, false);
  for (std::size_t r : frozen) {
    if (r >= n) throw InvalidArgument("mode index " + std::to_string(r + 1) + " out of range");
    in_y[r] = true;
  }
  InvariantCandidate out;
  out.total_modes = n;
  for (std::size_t r = 0; r < n; ++r)
    if (in_y[r]) out.frozen.push_back(r);
  out.threshold = tau_rel * sys.max_abs_coefficient();
  for (const auto& e : sys.entries())
    if (in_y[e.i] && !in_y[e.j] && !in_y[e.k])
      out.max_violation = std::max(out.max_violation, std::abs(e.value));
  out.invariant = out.max_violation <= out.threshold;
  return out;
}

std::vector<InvariantCandidate> enumerate_invariant_candidates(const QuasiHarmonicSystem& sys,
                                                               double tau_rel) {
  const auto pairs = pair_modes(sys);
  const SquareMap map = square_map(sys, tau_rel);
  const auto cycles = cycle_decomposition(map.rho).cycles;
  const std::size_t c = cycles.size();
  if (c > 24) throw InvalidArgument("too many cycles (" + std::to_string(c) + ") to enumerate");

  std::vector<InvariantCandidate> out;
  // Bit b set: the pairs of cycle b are frozen. Skip the empty and full unions.
  const std::uint64_t full = (std::uint64_t{1} << c) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> frozen;
    for (std::size_t b = 0; b < c; ++b)
      if (mask & (std::uint64_t{1} << b))
        for (std::size_t pair : cycles[b]) {
          frozen.push_back(pairs[pair].acoustic);
          frozen.push_back(pairs[pair].optical);
        }
    out.push_back(check_invariance(sys, frozen, tau_rel));
  }
  return out;
}

QuasiHarmonicSystem extract_subsystem(const QuasiHarmonicSystem& sys,
                                      std::span<const std::size_t> kept, double tau_rel) {
  const std::size_t n = sys.dof();
  std::vector<std::size_t> new_index(n, n);
  std::vector<std::size_t> sorted(kept.begin(), kept.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("kept modes contain duplicates");
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    if (sorted[r] >= n) throw InvalidArgument("kept mode out of range");
    new_index[sorted[r]] = r;
  }
  std::vector<std::size_t> frozen;
  for (std::size_t r = 0; r < n; ++r)
    if (new_index[r] == n) frozen.push_back(r);
  if (!frozen.empty()) {
    const auto verdict = check_invariance(sys, frozen, tau_rel);
    if (!verdict.invariant)
      throw InvalidArgument("complement of the kept modes is not invariant (violation " +
                            std::to_string(verdict.max_violation) + ")");
  }

  std::vector<double> lambdas, weights;
  std::vector<ModeLabel> labels;
  for (std::size_t r : sorted) {
    lambdas.push_back(sys.lambdas()[r]);
    weights.push_back(sys.weights()[r]);
    labels.push_back(sys.labels()[r]);
  }
  // Renumber pair labels densely in ascending order of the old pair index.
  std::vector<std::size_t> old_pairs;
  for (const auto& l : labels)
    if (l.pair > 0) old_pairs.push_back(l.pair);
  std::sort(old_pairs.begin(), old_pairs.end());
  old_pairs.erase(std::unique(old_pairs.begin(), old_pairs.end()), old_pairs.end());
  for (auto& l : labels)
    if (l.pair > 0)
      l.pair = static_cast<std::size_t>(std::lower_bound(old_pairs.begin(), old_pairs.end(), l.pair) -
                                        old_pairs.begin()) + 1;

  const double threshold = tau_rel * sys.max_abs_coefficient();
  std::vector<TensorEntry> entries;
  for (const auto& e : sys.entries()) {
    if (new_index[e.i] == n || new_index[e.j] == n || new_index[e.k] == n) continue;
    if (std::abs(e.value) <= threshold) continue;
    entries.push_back({new_index[e.i], new_index[e.j], new_index[e.k], e.value});
  }
  // A pair-structured restriction of a chain system is itself the system of
  // a shorter chain with q - 1 = kept modes.
  const bool pair_structured = sys.p() > 0 && sorted.size() % 2 == 0 &&
                               old_pairs.size() * 2 == sorted.size();
  const std::size_t sub_p = pair_structured ? sorted.size() + 1 : 0;
  return QuasiHarmonicSystem(sub_p, sys.a(), sys.alpha(), std::move(lambdas), std::move(labels),
                             std::move(entries), std::move(weights));
}

std::vector<ExcitationEdge> excitation_digraph(const QuasiHarmonicSystem& sys, double tau_rel) {
  const double threshold = tau_rel * sys.max_abs_coefficient();
  std::vector<ExcitationEdge> edges;
  for (const auto& e : sys.entries()) {
    if (e.j != e.k || std::abs(e.value) <= threshold) continue;
    const auto src = sys.labels()[e.j].kind;
    const auto dst = sys.labels()[e.i].kind;
    if (src == ModeKind::other || dst == ModeKind::other || src == dst) continue;
    edges.push_back({e.j, e.i, e.value});
  }
  std::sort(edges.begin(), edges.end(), [](const ExcitationEdge& l, const ExcitationEdge& r) {
    return l.source != r.source ? l.source < r.source : l.target < r.target;
  });
  return edges;
}

std::optional<std::vector<std::size_t>> excitation_permutation(std::span<const ExcitationEdge> edges,
                                                               std::size_t modes) {
  std::vector<std::size_t> next(modes, modes);
  std::vector<bool> has_in(modes, false);
  for (const auto& e : edges) {
    if (e.source >= modes || e.target >= modes) return std::nullopt;
    if (next[e.source] != modes || has_in[e.target]) return std::nullopt;
    next[e.source] = e.target;
    has_in[e.target] = true;
  }
  if (std::find(next.begin(), next.end(), modes) != next.end()) return std::nullopt;
  return next;
}

namespace {

struct EntryPair {
  std::size_t i, j, k;
  double ours;  // 0 when absent
  double ref;   // 0 when absent
};

std::vector<EntryPair> union_of_entries(const QuasiHarmonicSystem& ours,
                                        const QuasiHarmonicSystem& ref, double tau_rel) {
  const double t_ours = tau_rel * ours.max_abs_coefficient();
  const double t_ref = tau_rel * ref.max_abs_coefficient();
  std::vector<EntryPair> out;
  for (const auto& e : ours.entries())
    if (std::abs(e.value) > t_ours) out.push_back({e.i, e.j, e.k, e.value, 0.0});
  for (const auto& e : ref.entries()) {
    if (std::abs(e.value) <= t_ref) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const EntryPair& p) {
      return p.i == e.i && p.j == e.j && p.k == e.k;
    });
    if (it != out.end())
      it->ref = e.value;
    else
      out.push_back({e.i, e.j, e.k, 0.0, e.value});
  }
  return out;
}

// Sign flips g_i in {+1,-1} minimising the |ref|-weighted count of entries
// whose sign disagrees after x_i -> g_i x_i.
std::vector<int> best_signs(const std::vector<EntryPair>& both, std::size_t n) {
  auto cost = [&](const std::vector<int>& g) {
    double c = 0.0;
    for (const auto& e : both) {
      const int s = g[e.i] * g[e.j] * g[e.k];
      if ((e.ours * s > 0.0) != (e.ref > 0.0)) c += std::abs(e.ref);
    }
    return c;
  };
  std::vector<int> best(n, 1);
  double best_cost = cost(best);
  if (best_cost == 0.0) return best;

  if (n <= 16) {
    std::vector<int> g(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      for (std::size_t b = 0; b < n; ++b) g[b] = (mask >> b) & 1u ? -1 : 1;
      const double c = cost(g);
      // Ties are broken towards fewer flips, then the smaller mask.
      if (c < best_cost - 1e-300 ||
          (c == best_cost && std::count(g.begin(), g.end(), -1) < std::count(best.begin(), best.end(), -1))) {
        best_cost = c;
        best = g;
      }
    }
    return best;
  }
  // Larger systems: single-flip descent from all-positive.
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t b = 0; b < n; ++b) {
      best[b] = -best[b];
      const double c = cost(best);
      if (c < best_cost) {
        best_cost = c;
        improved = true;
      } else {
        best[b] = -best[b];
      }
    }
  }
  return best;
}

}  // namespace

ScalingFit scaling_equivalence(const QuasiHarmonicSystem& ours, const QuasiHarmonicSystem& ref,
                               double tau_rel, double lambda_tol) {
  const std::size_t n = ours.dof();
  if (ref.dof() != n) throw DimensionMismatch("reference table modes", n, ref.dof());
  ScalingFit fit;
  for (std::size_t r = 0; r < n; ++r)
    fit.max_lambda_gap = std::max(fit.max_lambda_gap, std::abs(ours.lambdas()[r] - ref.lambdas()[r]));
  if (fit.max_lambda_gap > lambda_tol)
    throw InvalidArgument("eigenvalues differ from the reference by " +
                          std::to_string(fit.max_lambda_gap));

  const auto entries = union_of_entries(ours, ref, tau_rel);
  std::vector<EntryPair> both;
  for (const auto& e : entries) {
    if (e.ours != 0.0 && e.ref != 0.0)
      both.push_back(e);
    else if (e.ours != 0.0)
      ++fit.ours_only_entries;
    else
      ++fit.ref_only_entries;
  }

  // Weighted least squares in log magnitudes:
  //   log|ref| - log|ours| = sigma_j + sigma_k - sigma_i,
  // weighted by |ref|, which linearises the Frobenius mismatch.
  Matrix design(both.size(), n);
  std::vector<double> rhs(both.size());
  for (std::size_t r = 0; r < both.size(); ++r) {
    const auto& e = both[r];
    const double w = std::abs(e.ref);
    design(r, e.j) += w;
    design(r, e.k) += w;
    design(r, e.i) -= w;
    rhs[r] = w * (std::log(std::abs(e.ref)) - std::log(std::abs(e.ours)));
  }
  const std::vector<double> sigma = both.empty() ? std::vector<double>(n, 0.0)
                                                 : least_squares(design, rhs);
  const std::vector<int> signs = best_signs(both, n);

  fit.scales.resize(n);
  fit.flipped.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    fit.scales[r] = signs[r] * std::exp(sigma[r]);
    fit.flipped[r] = signs[r] < 0;
  }

  double diff2 = 0.0, ref2 = 0.0;
  for (const auto& e : entries) {
    const double scaled = e.ours * fit.scales[e.j] * fit.scales[e.k] / fit.scales[e.i];
    diff2 += (e.ref - scaled) * (e.ref - scaled);
    ref2 += e.ref * e.ref;
    if (e.ours != 0.0 && e.ref != 0.0 && (scaled > 0.0) != (e.ref > 0.0)) ++fit.sign_mismatches;
  }
  fit.residual = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
  return fit;
}

std::vector<std::size_t> match_modes(const QuasiHarmonicSystem& ours,
                                     const QuasiHarmonicSystem& ref, double lambda_tol) {
  const std::size_t n = ours.dof();
  if (ref.dof() != n) throw DimensionMismatch("reference table modes", n, ref.dof());
  std::vector<std::size_t> order(n, n);
  std::vector<bool> used(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t best = n;
    double gap = lambda_tol;
    for (std::size_t c = 0; c < n; ++c) {
      const double g = std::abs(ours.lambdas()[c] - ref.lambdas()[r]);
      if (!used[c] && g <= gap) {
        gap = g;
        best = c;
      }
    }
    if (best == n)
      throw InvalidArgument("reference eigenvalue " + std::to_string(ref.lambdas()[r]) +
                            " has no match within " + std::to_string(lambda_tol));
    used[best] = true;
    order[r] = best;
  }
  return order;
}

AlignedSystem align_to_reference(const QuasiHarmonicSystem& ours, const QuasiHarmonicSystem& ref,
                                 double tau_rel, double lambda_tol) {
  AlignedSystem out;
  out.order = match_modes(ours, ref, lambda_tol);
  const QuasiHarmonicSystem permuted = permute(ours, out.order);
  out.fit = scaling_equivalence(permuted, ref, tau_rel, lambda_tol);
  // Our x = s y with y the reference coordinate.
  out.system = rescale(permuted, out.fit.scales);
  return out;
}

}  // namespace fpu
