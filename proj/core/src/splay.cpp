#include "splaylab/splay.hpp"

#include <stdexcept>
#include <string>

namespace splaylab {

namespace {

std::uint64_t rotations_of(SplayCase c) noexcept { return c == SplayCase::Zig ? 1 : 2; }

SplayStepKind splay_step_slot(Tree& t, Slot x) {
  const Slot p = t.parent_slot(x);
  if (p == kNoSlot) throw std::invalid_argument("splay step at the root");
  const Slot g = t.parent_slot(p);
  if (g == kNoSlot) {
    const SplayStepKind step{SplayCase::Zig, t.side_of(x)};
    t.rotate_up_slot(x);
    return step;
  }
  const Side xs = t.side_of(x);
  const Side ps = t.side_of(p);
  if (xs == ps) {
    t.rotate_up_slot(p);
    t.rotate_up_slot(x);
    return {SplayCase::ZigZig, ps};
  }
  t.rotate_up_slot(x);
  t.rotate_up_slot(x);
  return {SplayCase::ZigZag, ps};
}

}  // namespace

StepOp to_step(SplayCase c) noexcept {
  switch (c) {
    case SplayCase::Zig: return StepOp::Zig;
    case SplayCase::ZigZig: return StepOp::ZigZig;
    case SplayCase::ZigZag: return StepOp::ZigZag;
  }
  return StepOp::Zig;
}

SplayStepKind splay_step(Tree& state, Key key) { return splay_step_slot(state, state.slot_of(key)); }

SplayRecord splay(Tree& state, Key key) {
  const Slot x = state.slot_of(key);
  SplayRecord rec;
  rec.key = key;
  rec.depth_before = state.depth_slot(x);
  rec.move_cost = rec.depth_before;
  while (state.parent_slot(x) != kNoSlot) rec.steps.push_back(splay_step_slot(state, x));
  state.set_cursor_slot(state.root_slot());
  return rec;
}

ServeResult serve_queries(Tree& state, std::span<const Key> queries) {
  ServeResult out;
  out.trace.initial_shape = state.shape();
  out.trace.keys.assign(state.keys().begin(), state.keys().end());
  if (state.empty()) {
    if (!queries.empty()) throw KeyError("query 0: empty tree");
    return out;
  }
  if (state.cursor_slot() != state.root_slot()) throw MachineError("cursor must start at the root");
  out.trace.initial_cursor = state.cursor();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (!state.contains(queries[i])) {
      throw KeyError("query " + std::to_string(i) + ": unknown key " + std::to_string(queries[i]));
    }
  }
  out.records.reserve(queries.size());
  for (const Key q : queries) {
    for (const MachineOp& op : descend_to(state, q)) {
      apply_op(state, out.trace.ledger, op);
      out.trace.steps.push_back({to_step(op.kind), state.cursor()});
    }
    SplayRecord rec = splay(state, q);
    for (const SplayStepKind& s : rec.steps) {
      out.trace.ledger.rotations += rotations_of(s.kind);
      out.trace.steps.push_back({to_step(s.kind), q});
    }
    out.total_cost += rec.move_cost;
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::uint64_t splay_cost(Tree& state, std::span<const Key> queries) {
  std::uint64_t total = 0;
  for (const Key q : queries) total += splay(state, q).move_cost;
  return total;
}

Tree replay_splay_trace(const Trace& trace) {
  Tree state = Tree::from_shape(trace.keys, trace.initial_shape);
  if (!state.empty()) state.set_cursor(trace.initial_cursor);
  CostLedger ledger;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& step = trace.steps[i];
    try {
      if (const auto kind = to_op(step.op)) {
        apply_op(state, ledger, {*kind, std::nullopt});
      } else {
        const Slot x = state.cursor_slot();
        const SplayStepKind done = splay_step_slot(state, x);
        if (to_step(done.kind) != step.op) throw MachineError("splay case differs from trace");
        ledger.rotations += rotations_of(done.kind);
      }
    } catch (const std::exception& e) {
      throw ProgramError(i, e.what());
    }
    if (state.cursor() != step.cursor) throw ProgramError(i, "cursor diverges from trace");
  }
  if (ledger != trace.ledger) throw MachineError("replayed ledger differs from trace ledger");
  return state;
}

DepthHalvingReport splay_with_depth_report(Tree& state, Key key) {
  const auto path = state.path_from_root(key);
  std::vector<std::uint32_t> before;
  before.reserve(path.size());
  for (const Key k : path) before.push_back(state.depth(k));
  splay(state, key);
  DepthHalvingReport report;
  report.path_nodes = path.size();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::uint32_t d = before[i];
    const std::uint32_t limit = (d + 2) / 2 + 1;  // ceil((d + 1) / 2) + 1
    if (state.depth(path[i]) > limit) ++report.flagged;
  }
  return report;
}

}  // namespace splaylab
