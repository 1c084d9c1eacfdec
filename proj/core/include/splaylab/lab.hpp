#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "splaylab/machine.hpp"
#include "splaylab/oracle.hpp"
#include "splaylab/potential.hpp"
#include "splaylab/splay.hpp"
#include "splaylab/tree.hpp"

namespace splaylab {

// Interleaved execution of a splay tree S against a reference tree T with the
// potential Phi = P(S) - P(T) tracked across every event. Weights follow T's
// current depths; they are frozen while S splays and reassigned whenever T
// rotates.

enum class EventKind : std::uint8_t { QuerySplay, OrganizingSplay, TMove, TRotation };

std::string_view event_name(EventKind k) noexcept;

struct EventRecord {
  EventKind kind = EventKind::QuerySplay;
  Key key = 0;
  std::uint64_t cost = 0;  // charged to S
  double phi_before = 0.0;
  double phi_after = 0.0;

  double amortized() const noexcept { return static_cast<double>(cost) + (phi_after - phi_before); }
};

/// One splay step with its own amortized cost: step cost (1 for Zig, 2
/// otherwise) plus the rank change of the up to three nodes it touches.
struct StepAccount {
  SplayStepKind step;
  double amortized = 0.0;
  double rank_gain = 0.0;  // r'(x) - r(x)
  double bound = 0.0;      // 1 + 3 gain for Zig, 3 gain otherwise
  bool ok = true;
};

struct SplayEvent {
  EventKind kind = EventKind::QuerySplay;
  Key key = 0;
  std::uint32_t depth_S = 0;  // real cost
  std::uint32_t depth_T = 0;
  double phi_before = 0.0;
  double phi_after = 0.0;
  double rank_root_before = 0.0;
  double rank_key_before = 0.0;
  std::vector<StepAccount> steps;
  double step_delta_sum = 0.0;      // sum of per-step rank changes
  bool local_sums_exact = true;     // per-step sums agree with a full recompute

  double delta_phi() const noexcept { return phi_after - phi_before; }
  double amortized() const noexcept { return static_cast<double>(depth_S) + delta_phi(); }
};

struct AccessBoundReport {
  double amortized = 0.0;
  double bound = 0.0;  // 1 + 3 (r(t) - r(v)), ranks before the splay
  std::size_t steps = 0;
  std::size_t step_violations = 0;
  bool passed = false;
};

struct AmortizedDepthReport {
  double amortized = 0.0;
  std::uint32_t depth_T = 0;
  double bound = 0.0;  // 4 + 6 d_T(v)
  bool passed = false;
};

AccessBoundReport check_access_bound(const SplayEvent& event);
AmortizedDepthReport check_amortized_depth(const SplayEvent& event);

struct OrganizingPlan {
  Key rotated = 0;
  std::vector<Key> splay_keys;
  std::vector<std::uint32_t> depths_T;
};

/// [x, parent of x] for a rotation at depth 1, plus the root of T at depth 2.
/// Throws std::invalid_argument at T's root or below depth 2.
OrganizingPlan plan_organizing_splays(const Tree& S, const Tree& T, Key rotated);

inline const double kRotationBound = 11.0 + std::log2(11.0);
inline const double kShallowRotationBound = 7.0 + std::log2(11.0);

struct NodeContribution {
  Key key = 0;
  double value = 0.0;       // change of r_S(key) - r_T(key) across the rotation
  bool exact_zero = false;  // decided on exact sums
};

struct RotationEvent {
  OrganizingPlan plan;
  std::vector<SplayEvent> splays;
  std::uint32_t depth_T = 0;
  double phi_before_splays = 0.0;
  double phi_before_rotation = 0.0;
  double phi_after = 0.0;
  std::vector<NodeContribution> contributions;  // filled when requested

  double delta_phi_rotation() const noexcept { return phi_after - phi_before_rotation; }
  double delta_phi_event() const noexcept { return phi_after - phi_before_splays; }
  bool within_bound() const noexcept { return delta_phi_rotation() <= kRotationBound + kRankSlack; }
  bool within_shallow_bound() const noexcept {
    return delta_phi_rotation() <= kShallowRotationBound + kRankSlack;
  }
};

class InterleavedRun {
 public:
  InterleavedRun(Tree S, Tree T, bool keep_snapshots = false);

  const Tree& S() const noexcept { return S_; }
  const Tree& T() const noexcept { return T_; }
  const WeightAssignment& weights() const noexcept { return wa_; }
  const CostLedger& T_ledger() const noexcept { return T_ledger_; }

  double phi() const noexcept { return P_S_ - P_T_; }
  double phi_initial() const noexcept { return phi0_; }
  /// Fresh snapshot, recomputed from both trees.
  PotentialSnapshot snapshot() const { return splaylab::phi(S_, T_); }

  const std::vector<EventRecord>& events() const noexcept { return events_; }
  const std::vector<PotentialSnapshot>& snapshots() const noexcept { return snapshots_; }

  double sum_real() const noexcept { return sum_real_; }
  double sum_amortized() const noexcept { return sum_amortized_; }
  std::uint64_t splay_cost() const noexcept { return splay_cost_; }
  std::size_t organizing_splays() const noexcept { return organizing_; }

  SplayEvent splay_S(Key v, EventKind kind = EventKind::QuerySplay);
  void move_T(const MachineOp& op);
  RotationEvent rotate_T(Key rotated, bool with_contributions = false);

 private:
  void reweigh();
  void record(const EventRecord& e);

  Tree S_;
  Tree T_;
  WeightAssignment wa_;
  std::vector<BigInt> sums_S_;
  double P_S_ = 0.0;
  double P_T_ = 0.0;
  double phi0_ = 0.0;
  CostLedger T_ledger_;
  std::vector<EventRecord> events_;
  std::vector<PotentialSnapshot> snapshots_;
  bool keep_snapshots_ = false;
  double sum_real_ = 0.0;
  double sum_amortized_ = 0.0;
  std::uint64_t splay_cost_ = 0;
  std::size_t organizing_ = 0;
};

/// Runs the organizing plan in S, rotates `rotated` up in T, and reweighs.
RotationEvent apply_T_rotation(InterleavedRun& run, Key rotated, bool with_contributions = false);

struct ExtraSplay {
  std::size_t position = 0;  // number of base queries served before it
  Key key = 0;
  friend bool operator==(const ExtraSplay&, const ExtraSplay&) = default;
};

struct TrialResult {
  std::uint64_t base_cost = 0;
  std::uint64_t augmented_cost = 0;
  double ratio = 1.0;  // base / augmented, 1 when both are 0
};

/// Splays `base` from S0, then again with `extras` inserted. Extras sharing a
/// position run in the given order.
TrialResult regular_access_trial(const Tree& S0, std::span<const Key> base,
                                 std::span<const ExtraSplay> extras);

struct SearchConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  std::size_t chains = 8;
  std::size_t extras = 64;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SearchResult {
  double max_ratio = 1.0;
  std::uint64_t base_cost = 0;
  std::uint64_t best_augmented_cost = 0;
  std::vector<ExtraSplay> best_extras;
  std::vector<double> chain_max;
  std::size_t trials = 0;
};

/// Hill climbing over extra-splay placements, maximizing base / augmented
/// cost. Chains are independent and seeded by index, so the result does not
/// depend on the thread count.
SearchResult search_regular_access(const Tree& S0, std::span<const Key> base,
                                   const SearchConfig& config);

class BoundViolation : public std::runtime_error {
 public:
  BoundViolation(const std::string& what, PotentialSnapshot snap)
      : std::runtime_error(what), snapshot_(std::move(snap)) {}
  const PotentialSnapshot& snapshot() const noexcept { return snapshot_; }

 private:
  PotentialSnapshot snapshot_;
};

struct BoundTerms {
  double rotation_term = 0.0;       // (11 + log2 11) R'
  double splay_term = 0.0;          // (1 + 3)(4 + 6 M')
  std::uint64_t ell_multiplier = 0; // m + 3 R'
  double final_constant = 16.0;
  double final_M_coefficient = 118.0 + 2.0 * std::log2(11.0);
  double final_R_coefficient = 83.0 + std::log2(11.0);
  std::uint64_t final_ell_multiplier = 0;  // m + 6 M + 3 R
  double final_ell_free = 0.0;              // 16 + c_M M + c_R R
};

struct AccountingReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t e = 0;
  std::uint64_t M = 0, R = 0, M_prime = 0, R_prime = 0;
  std::uint64_t total_S_cost = 0;      // plain splaying of the queries
  std::uint64_t augmented_S_cost = 0;  // query plus organizing splays
  double sum_amortized = 0.0;
  double phi_initial = 0.0;
  double phi_final = 0.0;
  double telescoping_residual = 0.0;  // sum amortized - sum real - (phi_final - phi_initial)
  double phi_recompute_residual = 0.0;
  double empirical_ratio = 1.0;        // total_S_cost / augmented_S_cost
  double cost_per_offline_op = 0.0;    // total_S_cost / (n + M' + R')
  std::size_t access_violations = 0;
  std::size_t step_violations = 0;
  std::size_t depth_violations = 0;
  std::size_t rotation_violations = 0;
  std::size_t local_sum_mismatches = 0;
  bool restricted = false;
  bool phi_floor_ok = false;
  double max_delta_phi_rotation = 0.0;
  BoundTerms bounds;

  bool passed() const noexcept;
};

struct AccountingOptions {
  bool abort_on_violation = true;
};

/// Full pipeline: simulate the offline program on T' (with sentinels), start S
/// as a copy of T', then for each query splay it in S and replay that query's
/// segment of the T' program, accounting each T' rotation with organizing
/// splays.
AccountingReport accounting_run(const ServingProgram& serving, const AccountingOptions& options = {});
AccountingReport accounting_run(Strategy strategy, const Tree& initial, std::span<const Key> queries,
                                const AccountingOptions& options = {});

}  // namespace splaylab
