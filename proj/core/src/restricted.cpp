#include "splaylab/restricted.hpp"

#include <algorithm>
#include <stdexcept>

namespace splaylab {

namespace {

void expect(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("T' layout broken: ") + what);
}

}  // namespace

Key min_sentinel(const Tree& T) {
  if (T.empty()) throw std::invalid_argument("sentinels need a nonempty tree");
  return T.keys().front() - 1;
}

Key max_sentinel(const Tree& T) {
  if (T.empty()) throw std::invalid_argument("sentinels need a nonempty tree");
  return T.keys().back() + 1;
}

Tree expected_prime(const Tree& T) {
  if (T.empty()) throw std::invalid_argument("T' needs a nonempty T");
  const std::size_t n = T.size();
  std::vector<Key> keys;
  keys.reserve(n + 2);
  keys.push_back(min_sentinel(T));
  keys.insert(keys.end(), T.keys().begin(), T.keys().end());
  keys.push_back(max_sentinel(T));

  // Slot s of T is slot s + 1 of T'.
  const Slot min_slot = 0;
  const auto max_slot = static_cast<Slot>(n + 1);
  auto lift = [](Slot s) { return s == kNoSlot ? kNoSlot : s + 1; };

  const Slot c = T.cursor_slot();
  std::vector<Slot> left_anc;
  std::vector<Slot> right_anc;
  std::vector<bool> on_path(n, false);
  on_path[static_cast<std::size_t>(c)] = true;
  for (Slot a = T.parent_slot(c); a != kNoSlot; a = T.parent_slot(a)) {
    on_path[static_cast<std::size_t>(a)] = true;
    (a < c ? left_anc : right_anc).push_back(a);  // deepest first
  }

  std::vector<Slot> parents(n + 2, kNoSlot);
  for (Slot s = 0; s < static_cast<Slot>(n); ++s) {
    if (!on_path[static_cast<std::size_t>(s)]) {
      parents[static_cast<std::size_t>(lift(s))] = lift(T.parent_slot(s));
    }
  }

  auto build_branch = [&](const std::vector<Slot>& anc, Side off_side, Slot sentinel) {
    Slot prev = c;  // the node whose off-path subtree hangs below the next branch node
    Slot above = lift(c);
    auto hang = [&](Slot holder_prime, Slot off_path_owner) {
      const Slot sub = T.child_slot(off_path_owner, off_side);
      if (sub != kNoSlot) parents[static_cast<std::size_t>(lift(sub))] = holder_prime;
    };
    for (const Slot a : anc) {
      parents[static_cast<std::size_t>(lift(a))] = above;
      hang(lift(a), prev);
      prev = a;
      above = lift(a);
    }
    parents[static_cast<std::size_t>(sentinel)] = above;
    hang(sentinel, prev);
  };
  build_branch(left_anc, Side::Left, min_slot);
  build_branch(right_anc, Side::Right, max_slot);

  return Tree::from_parents(std::move(keys), parents);
}

bool SentineledTree::consistent() const {
  const Tree want = expected_prime(simulated_);
  return prime_.same_shape(want) && prime_.cursor() == prime_.root();
}

// Operands record the rotated or compared key, or the key a move lands on.
void SentineledTree::run(std::vector<MachineOp>& ops) {
  for (MachineOp& op : ops) {
    try {
      if (!is_move(op.kind)) op.operand = prime_.cursor();
      apply_op(prime_, ledger_, op);
      if (is_move(op.kind)) {
        op.operand = prime_.cursor();
        if (visit_log_ != nullptr) visit_log_->push_back(prime_.cursor());
      }
    } catch (const MachineError& e) {
      throw std::logic_error(std::string("emitted T' op is illegal: ") + e.what());
    }
  }
}

SentineledTree init_prime(const Tree& T) {
  if (T.empty()) throw std::invalid_argument("T' needs a nonempty T");
  SentineledTree p;
  p.simulated_ = T;
  p.simulated_.set_cursor_slot(p.simulated_.root_slot());
  p.min_ = min_sentinel(T);
  p.max_ = max_sentinel(T);
  p.prime_ = expected_prime(p.simulated_);
  return p;
}

std::vector<MachineOp> simulate_move(SentineledTree& p, Direction direction) {
  Tree& t = p.simulated_;
  const Tree& tp = p.prime_;
  const Key c = t.cursor();
  expect(tp.root() == c && tp.cursor() == c, "cursor key not at the root");
  std::vector<MachineOp> ops;
  MachineOp t_op;

  if (direction == Direction::Up) {
    const auto parent = t.parent(c);
    if (!parent) throw MachineError("no parent at simulated cursor " + std::to_string(c));
    // The parent is the deepest ancestor: the first node of one outer branch.
    const Side toward = *parent > c ? Side::Right : Side::Left;
    expect(tp.child(c, toward) == parent, "parent not adjacent to the root");
    ops = {move_down(toward), rotate(), move_down(opposite(toward)), move_down(opposite(toward)),
           rotate(), move_parent()};
    t_op = move_parent();
  } else {
    const Side side = direction == Direction::DownLeft ? Side::Left : Side::Right;
    const auto target = t.child(c, side);
    if (!target) {
      throw MachineError(std::string("no ") + (side == Side::Left ? "left" : "right") +
                         " child at simulated cursor " + std::to_string(c));
    }
    const auto branch = tp.child(c, side);
    expect(branch && tp.child(*branch, opposite(side)) == target, "child subtree misplaced");
    ops = {move_down(side), move_down(opposite(side)), rotate(), move_parent(), move_down(side),
           rotate()};
    t_op = move_down(side);
  }
  p.run(ops);
  CostLedger scratch;
  apply_op(t, scratch, t_op);
  return ops;
}

std::vector<MachineOp> simulate_rotation(SentineledTree& p) {
  Tree& t = p.simulated_;
  const Tree& tp = p.prime_;
  const Key c = t.cursor();
  expect(tp.root() == c && tp.cursor() == c, "cursor key not at the root");
  const auto parent = t.parent(c);
  if (!parent) throw MachineError("rotate at the simulated root");
  const Side toward = *parent > c ? Side::Right : Side::Left;
  expect(tp.child(c, toward) == parent, "parent not adjacent to the root");
  std::vector<MachineOp> ops = {move_down(toward), move_down(toward), rotate(), move_parent()};
  p.run(ops);
  CostLedger scratch;
  apply_op(t, scratch, rotate());
  return ops;
}

std::vector<MachineOp> simulate_compare(SentineledTree& p) {
  std::vector<MachineOp> ops = {compare()};
  p.run(ops);
  return ops;
}

SimulationResult simulate_program(const Tree& T, const MachineProgram& program) {
  SentineledTree p = init_prime(T);
  SimulationResult out;
  p.visit_log_ = &out.prime_cursor_keys;
  out.initial_prime = p.prime();
  out.source_cursor_keys.push_back(p.simulated().cursor());
  out.prime_cursor_keys.push_back(p.prime().cursor());
  out.block_starts.reserve(program.size() + 1);

  for (std::size_t i = 0; i < program.ops.size(); ++i) {
    const OpKind kind = program.ops[i].kind;
    out.block_starts.push_back(out.program.ops.size());
    std::vector<MachineOp> block;
    try {
      switch (kind) {
        case OpKind::Compare: block = simulate_compare(p); break;
        case OpKind::MoveLeft: block = simulate_move(p, Direction::DownLeft); break;
        case OpKind::MoveRight: block = simulate_move(p, Direction::DownRight); break;
        case OpKind::MoveParent: block = simulate_move(p, Direction::Up); break;
        case OpKind::Rotate: block = simulate_rotation(p); break;
      }
    } catch (const MachineError& e) {
      throw ProgramError(i, e.what());
    }
    if (is_move(kind)) ++out.source.moves;
    if (kind == OpKind::Rotate) ++out.source.rotations;
    if (kind == OpKind::Compare) ++out.source.comparisons;

    out.program.ops.insert(out.program.ops.end(), block.begin(), block.end());
    if (is_move(kind)) out.source_cursor_keys.push_back(p.simulated().cursor());
  }
  out.block_starts.push_back(out.program.ops.size());
  p.visit_log_ = nullptr;
  out.final_prime = p.prime();
  out.final_simulated = p.simulated();
  out.ledger = p.ledger();
  out.program.restricted = check_restricted(out.initial_prime, out.program).restricted();
  return out;
}

std::size_t RestrictedReport::count(RestrictionKind k) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(),
                    [k](const RestrictionViolation& v) { return v.kind == k; }));
}

RestrictedReport check_restricted(const Tree& initial, const MachineProgram& program) {
  constexpr std::uint32_t kDepthLimit = 3;
  RestrictedReport report;
  Tree t = initial;
  CostLedger scratch;
  bool returning = false;
  for (std::size_t i = 0; i < program.ops.size(); ++i) {
    const MachineOp& op = program.ops[i];
    if (returning && op.kind != OpKind::MoveParent) {
      report.violations.push_back({i, RestrictionKind::NoReturn, t.cursor(), t.depth(t.cursor())});
      returning = false;
    }
    if (op.kind == OpKind::Rotate) {
      const std::uint32_t d = t.depth_slot(t.cursor_slot());
      if (d >= kDepthLimit) report.violations.push_back({i, RestrictionKind::Depth, t.cursor(), d});
    }
    try {
      apply_op(t, scratch, op);
    } catch (const MachineError& e) {
      throw ProgramError(i, e.what());
    }
    const std::uint32_t d = t.depth_slot(t.cursor_slot());
    if (is_move(op.kind) && d >= kDepthLimit) {
      report.violations.push_back({i, RestrictionKind::Depth, t.cursor(), d});
    }
    if (op.kind == OpKind::Rotate) returning = d != 0;
    if (op.kind == OpKind::MoveParent && d == 0) returning = false;
  }
  if (returning) {
    report.violations.push_back(
        {program.ops.size(), RestrictionKind::NoReturn, t.cursor(), t.depth(t.cursor())});
  }
  return report;
}

bool is_subsequence(std::span<const Key> needle, std::span<const Key> haystack) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < haystack.size() && j < needle.size(); ++i) {
    if (haystack[i] == needle[j]) ++j;
  }
  return j == needle.size();
}

}  // namespace splaylab
