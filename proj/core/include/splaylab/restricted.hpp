#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splaylab/machine.hpp"
#include "splaylab/tree.hpp"

namespace splaylab {

// Root-pinned simulation of an arbitrary cursor program on T by a restricted
// program on T', a copy of T with two sentinel keys. T' always keeps T's
// cursor key at its root. The ancestors of that key are split across T''s
// two outer branches:
//
//   root           = cursor key c of T
//   left branch    = left ancestors of c, deepest first, then MIN
//   right branch   = right ancestors of c, deepest first, then MAX
//
// The k-th node on the left branch holds, as its right child, the off-path
// subtree of the (k-1)-th (c's own left subtree for k = 1); the right branch
// mirrors this. Every T move then costs 4 moves and 2 rotations on T', and
// every T rotation 3 moves and 1 rotation.

enum class Direction : std::uint8_t { DownLeft, DownRight, Up };

struct SimulationResult;

class SentineledTree {
 public:
  const Tree& prime() const noexcept { return prime_; }
  /// The T being simulated. Only consulted to decide which root child of T'
  /// leads to T's parent; T' itself stores no extra per-node data.
  const Tree& simulated() const noexcept { return simulated_; }
  Key min_key() const noexcept { return min_; }
  Key max_key() const noexcept { return max_; }
  const CostLedger& ledger() const noexcept { return ledger_; }

  /// True when T' has exactly the layout implied by the simulated T.
  bool consistent() const;

 private:
  friend SentineledTree init_prime(const Tree& T);
  friend std::vector<MachineOp> simulate_move(SentineledTree&, Direction);
  friend std::vector<MachineOp> simulate_rotation(SentineledTree&);
  friend std::vector<MachineOp> simulate_compare(SentineledTree&);
  friend SimulationResult simulate_program(const Tree&, const MachineProgram&);

  void run(std::vector<MachineOp>& ops);

  Tree prime_;
  Tree simulated_;
  Key min_ = 0;
  Key max_ = 0;
  CostLedger ledger_;
  std::vector<Key>* visit_log_ = nullptr;
};

/// Sentinel keys for a key set: one below the smallest, one above the largest.
Key min_sentinel(const Tree& T);
Key max_sentinel(const Tree& T);

/// T' for T with its cursor at the root: same root key, MIN and MAX as its
/// children, T's left subtree under MIN's right child and T's right subtree
/// under MAX's left child.
SentineledTree init_prime(const Tree& T);

/// The T' layout corresponding to T with its cursor anywhere.
Tree expected_prime(const Tree& T);

/// Emits and executes 4 moves and 2 rotations on T' (and the move on the
/// simulated T). Throws MachineError when the move is illegal in T.
std::vector<MachineOp> simulate_move(SentineledTree& prime, Direction direction);

/// Emits and executes 3 moves and 1 rotation on T' (and the rotation on the
/// simulated T). Throws MachineError at T's root.
std::vector<MachineOp> simulate_rotation(SentineledTree& prime);

/// A compare at T's cursor is a compare at T''s root.
std::vector<MachineOp> simulate_compare(SentineledTree& prime);

struct SimulationResult {
  Tree initial_prime;
  Tree final_prime;
  Tree final_simulated;
  MachineProgram program;   // restricted flag set by check_restricted
  CostLedger source;        // M and R of the input program
  CostLedger ledger;        // M' and R' of the emitted program
  std::vector<std::size_t> block_starts;  // emitted index of each input op, plus the end
  std::vector<Key> source_cursor_keys;    // T's cursor key, initially and after each move
  std::vector<Key> prime_cursor_keys;     // T''s cursor key, initially and after each move
};

/// Translates a program on T into a restricted program on T'. Illegal input
/// ops raise ProgramError carrying the input index.
SimulationResult simulate_program(const Tree& T, const MachineProgram& program);

enum class RestrictionKind : std::uint8_t { Depth, NoReturn };

struct RestrictionViolation {
  std::size_t index = 0;
  RestrictionKind kind = RestrictionKind::Depth;
  Key key = 0;
  std::uint32_t depth = 0;
};

struct RestrictedReport {
  std::vector<RestrictionViolation> violations;
  bool restricted() const noexcept { return violations.empty(); }
  std::size_t count(RestrictionKind k) const noexcept;
};

/// Replays `program` from `initial` and records every node visited or rotated
/// at depth >= 3 and every rotation whose cursor does not walk straight back to
/// the root.
RestrictedReport check_restricted(const Tree& initial, const MachineProgram& program);

/// Greedy subsequence test.
bool is_subsequence(std::span<const Key> needle, std::span<const Key> haystack);

}  // namespace splaylab
