#include "splaylab/machine.hpp"

#include <algorithm>
#include <array>

namespace splaylab {

namespace {

constexpr std::array<std::string_view, 8> kStepNames = {
    "compare", "move_left", "move_right", "move_parent", "rotate", "zig", "zigzig", "zigzag"};

}  // namespace

std::uint64_t MachineProgram::move_count() const noexcept {
  return static_cast<std::uint64_t>(
      std::count_if(ops.begin(), ops.end(), [](const MachineOp& op) { return is_move(op.kind); }));
}

std::uint64_t MachineProgram::rotation_count() const noexcept {
  return static_cast<std::uint64_t>(std::count_if(
      ops.begin(), ops.end(), [](const MachineOp& op) { return op.kind == OpKind::Rotate; }));
}

void MachineProgram::append(const MachineProgram& other) {
  ops.insert(ops.end(), other.ops.begin(), other.ops.end());
}

StepOp to_step(OpKind k) noexcept {
  switch (k) {
    case OpKind::Compare: return StepOp::Compare;
    case OpKind::MoveLeft: return StepOp::MoveLeft;
    case OpKind::MoveRight: return StepOp::MoveRight;
    case OpKind::MoveParent: return StepOp::MoveParent;
    case OpKind::Rotate: return StepOp::Rotate;
  }
  return StepOp::Compare;
}

std::optional<OpKind> to_op(StepOp s) noexcept {
  switch (s) {
    case StepOp::Compare: return OpKind::Compare;
    case StepOp::MoveLeft: return OpKind::MoveLeft;
    case StepOp::MoveRight: return OpKind::MoveRight;
    case StepOp::MoveParent: return OpKind::MoveParent;
    case StepOp::Rotate: return OpKind::Rotate;
    default: return std::nullopt;
  }
}

std::string_view step_name(StepOp s) noexcept { return kStepNames[static_cast<std::size_t>(s)]; }

std::optional<StepOp> parse_step_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kStepNames.size(); ++i) {
    if (kStepNames[i] == name) return static_cast<StepOp>(i);
  }
  return std::nullopt;
}

void apply_op(Tree& state, CostLedger& ledger, const MachineOp& op) {
  if (state.empty()) throw MachineError("operation on an empty tree");
  const Slot at = state.cursor_slot();
  switch (op.kind) {
    case OpKind::Compare:
      ++ledger.comparisons;
      return;
    case OpKind::MoveLeft:
    case OpKind::MoveRight: {
      const Side side = op.kind == OpKind::MoveLeft ? Side::Left : Side::Right;
      const Slot next = state.child_slot(at, side);
      if (next == kNoSlot) {
        throw MachineError(std::string("no ") + (side == Side::Left ? "left" : "right") +
                           " child at key " + std::to_string(state.key_at(at)));
      }
      state.set_cursor_slot(next);
      ++ledger.moves;
      return;
    }
    case OpKind::MoveParent: {
      const Slot next = state.parent_slot(at);
      if (next == kNoSlot) throw MachineError("move to parent at the root");
      state.set_cursor_slot(next);
      ++ledger.moves;
      return;
    }
    case OpKind::Rotate:
      if (state.parent_slot(at) == kNoSlot) throw MachineError("rotate at the root");
      state.rotate_up_slot(at);
      ++ledger.rotations;
      return;
  }
}

Trace run_program(Tree& state, const MachineProgram& program) {
  Trace trace;
  trace.initial_shape = state.shape();
  trace.keys.assign(state.keys().begin(), state.keys().end());
  trace.initial_cursor = state.empty() ? 0 : state.cursor();
  trace.steps.reserve(program.size());
  for (std::size_t i = 0; i < program.ops.size(); ++i) {
    const MachineOp& op = program.ops[i];
    try {
      apply_op(state, trace.ledger, op);
    } catch (const MachineError& e) {
      throw ProgramError(i, e.what());
    }
    trace.steps.push_back({to_step(op.kind), state.cursor()});
  }
  return trace;
}

Tree replay(const Trace& trace) {
  Tree state = Tree::from_shape(trace.keys, trace.initial_shape);
  if (!state.empty()) state.set_cursor(trace.initial_cursor);
  CostLedger ledger;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& step = trace.steps[i];
    const auto kind = to_op(step.op);
    if (!kind) {
      throw ProgramError(i, "splay step '" + std::string(step_name(step.op)) +
                                "' needs the splay-aware replay");
    }
    try {
      apply_op(state, ledger, {*kind, std::nullopt});
    } catch (const MachineError& e) {
      throw ProgramError(i, e.what());
    }
    if (state.cursor() != step.cursor) throw ProgramError(i, "cursor diverges from trace");
  }
  if (ledger != trace.ledger) throw MachineError("replayed ledger differs from trace ledger");
  return state;
}

std::vector<MachineOp> return_to_root(const Tree& state) {
  std::vector<MachineOp> ops(state.depth_slot(state.cursor_slot()), move_parent());
  return ops;
}

std::vector<MachineOp> descend_to(const Tree& state, Key k) {
  std::vector<MachineOp> ops;
  const Slot target = state.slot_of(k);
  for (Slot s = target; state.parent_slot(s) != kNoSlot; s = state.parent_slot(s)) {
    ops.push_back(move_down(state.side_of(s)));
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

}  // namespace splaylab
