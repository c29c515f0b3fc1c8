#include "fpu/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "fpu/errors.hpp"
#include "fpu/reduction.hpp"
#include "fpu/system_io.hpp"

namespace fpu {

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool SweepReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.passed(); });
}

SweepRow analyse_p(std::size_t p, double a, double tau_rel) {
  const auto start = std::chrono::steady_clock::now();
  SweepRow row;
  row.p = p;
  row.prime = is_prime(p);
  try {
    const ReducedSystem red = build_reduced(p, a, 1.0);
    const ModalBasis basis = eigendecompose(red);
    const QuasiHarmonicSystem qh = to_quasi_harmonic(red, basis);
    for (std::size_t j = 0; 2 * j < basis.lambdas.size(); ++j)
      row.pair_lambdas.emplace_back(basis.lambdas[2 * j], basis.lambdas[2 * j + 1]);

    SquareMap map;
    try {
      map = square_map(qh, tau_rel);
      row.square_map_ok = true;
    } catch (const PatternViolation& e) {
      row.failures.push_back(std::string("square map: ") + e.what());
    }
    if (row.square_map_ok) {
      for (std::size_t r : map.rho) row.rho.push_back(r + 1);
      row.jan = jan_check(p, map.rho);
      row.jan_ok = all_agree(row.jan);
      if (!row.jan_ok) row.failures.push_back("rho differs from min(2i, p - 2i)");
      for (const auto& cycle : cycle_decomposition(map.rho).cycles) {
        std::vector<std::size_t> c;
        for (std::size_t i : cycle) c.push_back(i + 1);
        row.cycles.push_back(std::move(c));
      }
      for (const auto& evidence : map.evidence)
        for (const auto& occ : evidence) {
          const auto sq = qh.labels()[occ.square].kind;
          const auto eq = qh.labels()[occ.equation].kind;
          if (sq == ModeKind::optical && eq == ModeKind::acoustic) row.optical_forces_acoustic = true;
          if (sq == ModeKind::acoustic && eq == ModeKind::optical) row.acoustic_forces_optical = true;
        }
      if (row.prime && !row.interaction())
        row.failures.push_back("no two-way forcing between the acoustic and optical groups");

      const auto candidates = enumerate_invariant_candidates(qh, tau_rel);
      row.candidates_tested = candidates.size();
      for (const auto& c : candidates) {
        if (!c.invariant) continue;
        InvariantSummary s;
        s.frozen = c.frozen;
        for (std::size_t m = 0; m < qh.dof(); ++m)
          if (!std::binary_search(c.frozen.begin(), c.frozen.end(), m)) {
            s.surviving.push_back(m);
            if (qh.labels()[m].kind == ModeKind::acoustic) s.pairs.push_back(qh.labels()[m].pair);
          }
        row.invariants.push_back(std::move(s));
      }
      std::sort(row.invariants.begin(), row.invariants.end(), [](const auto& l, const auto& r) {
        return l.surviving.size() != r.surviving.size() ? l.surviving.size() < r.surviving.size()
                                                        : l.surviving < r.surviving;
      });
      for (std::size_t i = 0; i < row.invariants.size(); ++i)
        for (std::size_t j = 0; j < row.invariants.size(); ++j) {
          const auto& small = row.invariants[i].surviving;
          const auto& big = row.invariants[j].surviving;
          if (i != j && small.size() < big.size() &&
              std::includes(big.begin(), big.end(), small.begin(), small.end()))
            row.containments.emplace_back(i, j);
        }
    }
  } catch (const std::exception& e) {
    row.failures.push_back(e.what());
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

SweepReport sweep_primes(std::size_t p_max, double a, double tau_rel, std::size_t threads) {
  if (p_max < 3 || p_max > 199) throw InvalidArgument("p_max must lie in [3, 199]");
  SweepReport report;
  report.p_max = p_max;
  report.a = a;
  report.tau_rel = tau_rel;
  std::vector<std::size_t> ps;
  for (std::size_t p = 3; p <= p_max; p += 2) ps.push_back(p);
  report.rows.resize(ps.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, ps.size());
  // Largest p first so the expensive rows do not end up last in the queue.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < ps.size();) {
      const std::size_t idx = ps.size() - 1 - k;
      report.rows[idx] = analyse_p(ps[idx], a, tau_rel);
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return report;
}

namespace {

std::string list(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string format_sweep_report(const SweepReport& report) {
  std::ostringstream out;
  out << "sweep over odd p <= " << report.p_max << ", a = " << format_double(report.a)
      << ", presence threshold " << format_double(report.tau_rel) << " (relative)\n\n";

  out << "  p  prime  square-map  jan  interaction  invariant V(Y) (surviving modes)  verdict\n";
  for (const auto& r : report.rows) {
    std::vector<std::size_t> sizes;
    for (const auto& inv : r.invariants) sizes.push_back(inv.surviving.size());
    char line[160];
    std::snprintf(line, sizeof line, "%3zu  %-5s  %-10s  %-3s  %-11s  %-32s  %s\n", r.p,
                  r.prime ? "yes" : "no", r.square_map_ok ? "unique" : "FAILED",
                  r.jan_ok ? "ok" : "no", r.interaction() ? "two-way" : "no",
                  sizes.empty() ? "none" : list(sizes, ", ").c_str(), r.passed() ? "PASS" : "FAIL");
    out << line;
  }

  for (const auto& r : report.rows) {
    out << "\np = " << r.p << (r.prime ? " (prime)" : "") << "\n";
    out << "  pair  acoustic lambda          optical lambda           sum\n";
    for (std::size_t j = 0; j < r.pair_lambdas.size(); ++j) {
      const auto [lo, hi] = r.pair_lambdas[j];
      char line[160];
      std::snprintf(line, sizeof line, "  %4zu  %-23s  %-23s  %s\n", j + 1, format_double(lo).c_str(),
                    format_double(hi).c_str(), format_double(lo + hi).c_str());
      out << line;
    }
    if (r.square_map_ok) {
      out << "  rho:";
      for (std::size_t i = 0; i < r.rho.size(); ++i) out << ' ' << i + 1 << "->" << r.rho[i];
      out << "\n  min(2i, p-2i): " << (r.jan_ok ? "agrees for every pair" : "DISAGREES") << "\n";
      out << "  cycles:";
      for (const auto& c : r.cycles) out << " (" << list(c) << ")";
      out << "\n  optical squares force acoustic equations: " << (r.optical_forces_acoustic ? "yes" : "no")
          << "\n  acoustic squares force optical equations: " << (r.acoustic_forces_optical ? "yes" : "no")
          << "\n  candidate V(Y) tested: " << r.candidates_tested << ", invariant: " << r.invariants.size()
          << "\n";
      for (std::size_t k = 0; k < r.invariants.size(); ++k) {
        const auto& inv = r.invariants[k];
        std::vector<std::size_t> modes;
        for (std::size_t m : inv.surviving) modes.push_back(m + 1);
        out << "    [" << k + 1 << "] " << inv.surviving.size() << " modes, pairs {" << list(inv.pairs, ", ")
            << "}, modes {" << list(modes, ", ") << "}\n";
      }
      for (const auto& [i, j] : r.containments)
        out << "    [" << i + 1 << "] (" << r.invariants[i].surviving.size() << " modes) lies in [" << j + 1
            << "] (" << r.invariants[j].surviving.size() << " modes)\n";
    }
    for (const auto& f : r.failures) out << "  FAILURE: " << f << "\n";
  }
  out << "\noverall: " << (report.passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace fpu
