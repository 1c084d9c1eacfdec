// One PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "splaylab/harness.hpp"
#include "splaylab/lab.hpp"
#include "splaylab/potential.hpp"
#include "splaylab/restricted.hpp"
#include "splaylab/splay.hpp"
#include "support.hpp"

using namespace splaylab;
using namespace splaylab::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (time_limit > 0 && secs >= time_limit) {
    o.pass = false;
    o.detail += " (over time limit)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::pair<Tree, Tree> random_pair(Rng& rng, std::size_t lo, std::size_t hi) {
  Tree T = harness::random_instance(rng, lo, hi);
  Tree S = random_tree(rng, Tree::iota_keys(T.size()));
  return {std::move(S), std::move(T)};
}

std::vector<Key> keys_at_depth(const Tree& t, std::uint32_t d) {
  std::vector<Key> out;
  for (const Key k : t.keys()) {
    if (t.depth(k) == d) out.push_back(k);
  }
  return out;
}

Outcome five_key_example() {
  const PotentialSnapshot snap = phi(example_S(), example_T());
  const double want_phi = std::log2(7.0 / 2);
  const double want_pt = std::log2(3.0 / 8) + std::log2(13.0 / 8) - 10;
  const bool ok = std::abs(snap.phi - want_phi) <= 1e-9 && std::abs(snap.P_T - want_pt) <= 1e-9;
  return {ok, fmt("phi=%.12f P(T)=%.12f", snap.phi, snap.P_T)};
}

Outcome weight_bounds() {
  Rng rng = substream(1001, 0);
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto [S, T] = random_pair(rng, 1, 64);
    if (!check_lemma1(S, T).passed()) ++bad;
  }
  return {bad == 0, fmt("%.0f of 1000 pairs violate a bound", static_cast<double>(bad))};
}

Outcome phi_floor() {
  Rng rng = substream(1002, 0);
  std::size_t bad = 0;
  double worst = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const auto [S, T] = random_pair(rng, 1, 64);
    const PhiFloorReport r = check_phi_floor(S, T);
    if (!r.passed) ++bad;
    worst = std::min(worst, r.phi + static_cast<double>(r.n));
  }
  return {bad == 0, fmt("min phi+n=%.4f, %.0f failures", worst, static_cast<double>(bad))};
}

Outcome simulation_fuzz() {
  Rng rng = substream(1003, 0);
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const Tree T = harness::random_instance(rng, 1, 64);
    const MachineProgram prog = harness::random_program(rng, T, 100, 50);
    const SimulationResult r = simulate_program(T, prog);
    const std::uint64_t M = prog.move_count(), R = prog.rotation_count();
    const bool ok = r.ledger.moves == 4 * M + 3 * R && r.ledger.rotations == 2 * M + R &&
                    check_restricted(r.initial_prime, r.program).restricted() &&
                    is_subsequence(r.source_cursor_keys, r.prime_cursor_keys);
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("%.0f of 10000 programs off", static_cast<double>(bad))};
}

Outcome access_bound() {
  Rng rng = substream(1004, 0);
  std::size_t bad = 0;
  double worst = -1e300;
  for (int batch = 0; batch < 100; ++batch) {
    const auto [S, T] = random_pair(rng, 1, 256);
    InterleavedRun run(S, T);
    for (int i = 0; i < 100; ++i) {
      const SplayEvent ev = run.splay_S(static_cast<Key>(uniform_below(rng, T.size())));
      const AccessBoundReport a = check_access_bound(ev);
      if (!a.passed) ++bad;
      worst = std::max(worst, a.amortized - a.bound);
    }
  }
  return {bad == 0, fmt("worst amortized-bound=%.4f, %.0f failures", worst, static_cast<double>(bad))};
}

Outcome amortized_depth() {
  Rng rng = substream(1005, 0);
  std::size_t bad = 0, splays = 0;
  double worst = -1e300;
  auto check = [&](const SplayEvent& ev) {
    const AmortizedDepthReport d = check_amortized_depth(ev);
    if (!d.passed) ++bad;
    worst = std::max(worst, d.amortized - d.bound);
    ++splays;
  };
  while (splays < 10000) {
    const auto [S, T] = random_pair(rng, 3, 128);
    InterleavedRun run(S, T);
    for (int i = 0; i < 50; ++i) {
      if (uniform_below(rng, 4) == 0) {
        std::vector<Key> shallow = keys_at_depth(run.T(), 1 + static_cast<std::uint32_t>(uniform_below(rng, 2)));
        if (shallow.empty()) shallow = keys_at_depth(run.T(), 1);
        for (const SplayEvent& ev : run.rotate_T(shallow[uniform_below(rng, shallow.size())]).splays) {
          check(ev);
        }
      } else {
        check(run.splay_S(static_cast<Key>(uniform_below(rng, T.size()))));
      }
    }
  }
  return {bad == 0, fmt("%.0f splays, worst amortized-bound=%.4f, %.0f failures",
                        static_cast<double>(splays), worst, static_cast<double>(bad))};
}

Outcome rotation_bound() {
  Rng rng = substream(1006, 0);
  std::size_t bad = 0;
  double max1 = -1e300, max2 = -1e300;
  for (const std::uint32_t depth : {1U, 2U}) {
    for (int i = 0; i < 1000;) {
      const auto [S, T] = random_pair(rng, 3, 64);
      const std::vector<Key> at = keys_at_depth(T, depth);
      if (at.empty()) continue;
      InterleavedRun run(S, T);
      const RotationEvent ev = run.rotate_T(at[uniform_below(rng, at.size())]);
      const double d = ev.delta_phi_rotation();
      if (!ev.within_bound() || (depth == 1 && !ev.within_shallow_bound())) ++bad;
      (depth == 1 ? max1 : max2) = std::max(depth == 1 ? max1 : max2, d);
      ++i;
    }
  }
  return {bad == 0, fmt("max dphi d=1 %.4f, d=2 %.4f, failures %.0f", max1, max2, static_cast<double>(bad))};
}

Outcome telescoping() {
  Rng rng = substream(1007, 0);
  std::size_t bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Tree t = harness::random_instance(rng, 1, 6);
    std::vector<Key> q;
    for (std::uint64_t j = 0, m = 1 + uniform_below(rng, 8); j < m; ++j) {
      q.push_back(static_cast<Key>(uniform_below(rng, t.size())));
    }
    AccountingOptions opt;
    opt.abort_on_violation = false;
    const AccountingReport r = accounting_run(Strategy::OracleWitness, t, q, opt);
    worst = std::max(worst, std::abs(r.telescoping_residual));
    if (!r.passed() || std::abs(r.telescoping_residual) > 1e-6 || r.phi_initial != 0.0 ||
        r.e > 3 * r.R_prime) {
      ++bad;
    }
  }
  return {bad == 0, fmt("max residual %.3g, %.0f failures", worst, static_cast<double>(bad))};
}

Outcome oracle_exactness() {
  Rng rng = substream(1008, 0);
  std::size_t bad = 0;
  for (int i = 0; i < 50; ++i) {
    const Tree t = harness::random_instance(rng, 1, 4);
    std::vector<Key> q;
    for (std::uint64_t j = 0, m = 1 + uniform_below(rng, 4); j < m; ++j) {
      q.push_back(static_cast<Key>(uniform_below(rng, t.size())));
    }
    if (opt_cost(t, q).opt_cost != bfs_opt(t, q)) ++bad;
  }
  std::size_t bad_static = 0;
  for (int i = 0; i < 100; ++i) {
    FrequencyTable f;
    f.keys = Tree::iota_keys(1 + uniform_below(rng, 8));
    for (std::size_t k = 0; k < f.keys.size(); ++k) {
      f.counts.push_back(uniform_below(rng, 50));
      f.total += f.counts.back();
    }
    if (static_cost(static_optimal(f), f) != brute_static(f)) ++bad_static;
  }
  return {bad + bad_static == 0, fmt("oracle mismatches %.0f/50, static mismatches %.0f/100",
                                     static_cast<double>(bad), static_cast<double>(bad_static))};
}

Outcome sequential_scan() {
  Rng rng = substream(1009, 0);
  std::string detail;
  bool ok = true;
  for (const std::size_t n : {128U, 1024U}) {
    const std::vector<Key> keys = Tree::iota_keys(n);
    for (Tree t : {Tree::left_spine(keys), Tree::right_spine(keys), Tree::balanced(keys),
                   random_tree(rng, keys)}) {
      const std::uint64_t c = splay_cost(t, keys);
      ok = ok && c <= 9 * n;
      detail += std::to_string(c) + " ";
    }
    detail += "(9n=" + std::to_string(9 * n) + ") ";
  }
  return {ok, detail};
}

Outcome conjecture_reproducible() {
  harness::ExperimentConfig c;
  c.seed = 2024;
  c.n = 64;
  c.m = 512;
  c.trials = 10000;
  c.threads = 1;
  const std::string a = harness::run_suite("conjecture", c).report.dump();
  c.threads = 0;
  const harness::SuiteOutcome second = harness::run_suite("conjecture", c);
  const bool same = a == second.report.dump();
  return {same, fmt("max ratio %.6f; ", second.report["search"]["max_ratio"].get<double>()) +
                    (same ? "identical across runs" : "outputs differ")};
}

}  // namespace

int main() {
  criterion(1, "five-key example", 1.0, five_key_example);
  criterion(2, "weight/sum bounds", 0, weight_bounds);
  criterion(3, "potential floor", 0, phi_floor);
  criterion(4, "restricted simulation", 120.0, simulation_fuzz);
  criterion(5, "access bound", 0, access_bound);
  criterion(6, "amortized depth bound", 0, amortized_depth);
  criterion(7, "rotation potential bound", 0, rotation_bound);
  criterion(8, "telescoping accounting", 300.0, telescoping);
  criterion(9, "oracle and static DP", 0, oracle_exactness);
  criterion(10, "sequential scan <= 9n", 10.0, sequential_scan);
  criterion(11, "conjecture search", 0, conjecture_reproducible);
  return failures == 0 ? 0 : 1;
}
