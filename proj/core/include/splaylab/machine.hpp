#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "splaylab/tree.hpp"

namespace splaylab {

// The cursor machine: a tree, a cursor, and three primitives. Compare is
// free, moves and rotations are tallied separately so each tree can be
// charged under its own rule (T pays for both, S for moves only).

enum class OpKind : std::uint8_t { Compare, MoveLeft, MoveRight, MoveParent, Rotate };

struct MachineOp {
  OpKind kind = OpKind::Compare;
  std::optional<Key> operand;  // informational only

  friend bool operator==(const MachineOp& a, const MachineOp& b) { return a.kind == b.kind; }
};

inline MachineOp move_left() { return {OpKind::MoveLeft, std::nullopt}; }
inline MachineOp move_right() { return {OpKind::MoveRight, std::nullopt}; }
inline MachineOp move_parent() { return {OpKind::MoveParent, std::nullopt}; }
inline MachineOp move_down(Side s) { return s == Side::Left ? move_left() : move_right(); }
inline MachineOp rotate() { return {OpKind::Rotate, std::nullopt}; }
inline MachineOp compare() { return {OpKind::Compare, std::nullopt}; }

inline bool is_move(OpKind k) noexcept {
  return k == OpKind::MoveLeft || k == OpKind::MoveRight || k == OpKind::MoveParent;
}

struct CostLedger {
  std::uint64_t moves = 0;
  std::uint64_t rotations = 0;
  std::uint64_t comparisons = 0;

  /// Cost charged to the offline tree: moves and rotations.
  std::uint64_t charged_offline() const noexcept { return moves + rotations; }
  /// Cost charged to the splay tree: moves only.
  std::uint64_t charged_splay() const noexcept { return moves; }

  CostLedger& operator+=(const CostLedger& o) noexcept {
    moves += o.moves;
    rotations += o.rotations;
    comparisons += o.comparisons;
    return *this;
  }
  friend CostLedger operator+(CostLedger a, const CostLedger& b) noexcept { return a += b; }
  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

struct MachineProgram {
  std::vector<MachineOp> ops;
  // Set by the restricted checker; never trusted as an input.
  bool restricted = false;

  std::size_t size() const noexcept { return ops.size(); }
  bool empty() const noexcept { return ops.empty(); }
  std::uint64_t move_count() const noexcept;
  std::uint64_t rotation_count() const noexcept;
  void append(const MachineProgram& other);
};

// Trace steps cover the machine primitives plus the three splay cases, which
// splay traces record as single restructuring steps.
enum class StepOp : std::uint8_t {
  Compare,
  MoveLeft,
  MoveRight,
  MoveParent,
  Rotate,
  Zig,
  ZigZig,
  ZigZag
};

StepOp to_step(OpKind k) noexcept;
std::optional<OpKind> to_op(StepOp s) noexcept;
std::string_view step_name(StepOp s) noexcept;
std::optional<StepOp> parse_step_name(std::string_view name) noexcept;

struct TraceStep {
  StepOp op = StepOp::Compare;
  Key cursor = 0;  // key at the cursor after the step
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Trace {
  std::string initial_shape;
  std::vector<Key> keys;
  Key initial_cursor = 0;
  std::vector<TraceStep> steps;
  CostLedger ledger;
};

class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An illegal operation inside a program, with the position that failed.
class ProgramError : public MachineError {
 public:
  ProgramError(std::size_t index, const std::string& what)
      : MachineError("op " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Applies one primitive at the cursor. Throws MachineError (leaving state and
/// ledger untouched) when the op is illegal.
void apply_op(Tree& state, CostLedger& ledger, const MachineOp& op);

/// Runs a program from the current state. On an illegal op throws
/// ProgramError; `state` then reflects every op before the failing one.
Trace run_program(Tree& state, const MachineProgram& program);

/// Replays a trace containing only machine primitives, checking the recorded
/// cursor after each step and the ledger totals.
Tree replay(const Trace& trace);

/// Moves that bring the cursor from its current node back to the root.
std::vector<MachineOp> return_to_root(const Tree& state);

/// Downward moves from the root to `k`.
std::vector<MachineOp> descend_to(const Tree& state, Key k);

}  // namespace splaylab
