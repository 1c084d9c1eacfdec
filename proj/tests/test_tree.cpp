#include <gtest/gtest.h>

#include "splaylab/machine.hpp"
#include "splaylab/sequences.hpp"
#include "splaylab/tree.hpp"
#include "support.hpp"

using namespace splaylab;
using namespace splaylab::testing;

TEST(BuildTree, Singleton) {
  const Tree t = Tree::from_shape({1}, "(.)");
  EXPECT_EQ(t.size(), 1U);
  EXPECT_EQ(t.root(), 1);
  EXPECT_EQ(t.cursor(), 1);
  EXPECT_EQ(t.depth(1), 0U);
}

TEST(BuildTree, FiveKeyExample) {
  const Tree t = example_T();
  EXPECT_EQ(t.root(), kD);
  EXPECT_EQ(t.left(kD), kB);
  EXPECT_EQ(t.right(kD), kE);
  EXPECT_EQ(t.left(kB), kA);
  EXPECT_EQ(t.right(kB), kC);
  EXPECT_EQ(t.in_order(), Tree::iota_keys(5));
  EXPECT_EQ(t.shape(), "(((.).(.)).(.))");
  t.validate();
}

TEST(BuildTree, LeftSpineDepths) {
  const Tree t = Tree::left_spine({1, 2, 3});
  EXPECT_EQ(t.depth(3), 0U);
  EXPECT_EQ(t.depth(2), 1U);
  EXPECT_EQ(t.depth(1), 2U);
  EXPECT_EQ(t.shape(), "(((.).).)");
}

TEST(BuildTree, EmptyShapeIsEmptyTree) {
  const Tree t = Tree::from_shape({}, "");
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.shape(), "");
}

TEST(BuildTree, RejectsMalformedShapes) {
  EXPECT_THROW(Tree::from_shape({1}, "("), ShapeError);
  EXPECT_THROW(Tree::from_shape({1}, "(.))"), ShapeError);
  EXPECT_THROW(Tree::from_shape({1}, "()"), ShapeError);
  EXPECT_THROW(Tree::from_shape({1}, "(x)"), ShapeError);
  EXPECT_THROW(Tree::from_shape({1, 2}, "(.)"), ShapeError);
  EXPECT_THROW(Tree::from_shape({1}, "((.).)"), ShapeError);
}

TEST(BuildTree, RejectsDuplicateOrUnsortedKeys) {
  EXPECT_THROW(Tree::from_shape({1, 1}, "((.).)"), ShapeError);
  EXPECT_THROW(Tree::from_shape({2, 1}, "((.).)"), ShapeError);
}

TEST(BuildTree, ShapeRoundTrip) {
  Rng rng = substream(11, 0);
  for (int i = 0; i < 200; ++i) {
    const Tree t = random_tree(rng, Tree::iota_keys(1 + uniform_below(rng, 40)));
    const Tree back = Tree::from_shape(std::vector<Key>(t.keys().begin(), t.keys().end()), t.shape());
    EXPECT_TRUE(back.same_shape(t));
  }
}

TEST(BuildTree, BalancedHeight) {
  const Tree t = Tree::balanced(Tree::iota_keys(1023));
  EXPECT_EQ(t.height(), 9U);
  t.validate();
}

TEST(Depth, FiveKeyExample) {
  const Tree t = example_T();
  EXPECT_EQ(t.depth(kD), 0U);
  EXPECT_EQ(t.depth(kB), 1U);
  EXPECT_EQ(t.depth(kA), 2U);
  EXPECT_THROW(t.depth(17), KeyError);
}

TEST(Depth, SingletonAndSpine) {
  EXPECT_EQ(Tree::from_shape({5}, "(.)").depth(5), 0U);
  EXPECT_EQ(Tree::left_spine({1, 2, 3}).depth(1), 2U);
}

TEST(Rotate, MovesNodeAboveParentAndReattachesMiddleSubtree) {
  // x = 1 under y = 3; x's right subtree {2} must move to y's left.
  Tree t = Tree::from_shape(Tree::iota_keys(5), "(((.).(.)).(.))");
  t.set_cursor(1);
  CostLedger ledger;
  apply_op(t, ledger, rotate());
  EXPECT_EQ(t.root(), 1);
  EXPECT_EQ(t.right(1), 3);
  EXPECT_EQ(t.left(3), 2);
  EXPECT_EQ(t.left(1), 0);
  EXPECT_EQ(t.cursor(), 1);
  EXPECT_EQ(ledger.rotations, 1U);
  EXPECT_EQ(ledger.moves, 0U);
  t.validate();
}

TEST(Rotate, AtRootFails) {
  Tree t = example_T();
  CostLedger ledger;
  EXPECT_THROW(apply_op(t, ledger, rotate()), MachineError);
  EXPECT_EQ(ledger, CostLedger{});
  EXPECT_EQ(t, example_T());
}

TEST(ApplyOp, MoveLeftFromRoot) {
  Tree t = example_T();
  CostLedger ledger;
  apply_op(t, ledger, move_left());
  EXPECT_EQ(t.cursor(), kB);
  EXPECT_EQ(ledger.moves, 1U);
}

TEST(ApplyOp, IllegalMovesLeaveStateUntouched) {
  Tree t = example_T();
  CostLedger ledger;
  EXPECT_THROW(apply_op(t, ledger, move_parent()), MachineError);
  t.set_cursor(kE);
  EXPECT_THROW(apply_op(t, ledger, move_left()), MachineError);
  EXPECT_THROW(apply_op(t, ledger, move_right()), MachineError);
  EXPECT_EQ(ledger, CostLedger{});
}

TEST(ApplyOp, CompareIsFree) {
  Tree t = example_T();
  CostLedger ledger;
  apply_op(t, ledger, compare());
  EXPECT_EQ(ledger.comparisons, 1U);
  EXPECT_EQ(ledger.charged_offline(), 0U);
  EXPECT_EQ(ledger.charged_splay(), 0U);
}

TEST(RunProgram, EmptyProgram) {
  Tree t = example_T();
  const Trace tr = run_program(t, {});
  EXPECT_TRUE(tr.steps.empty());
  EXPECT_EQ(tr.ledger, CostLedger{});
}

TEST(RunProgram, DownAndBack) {
  Tree t = example_T();
  const Trace tr = run_program(t, {{move_left(), move_parent()}});
  EXPECT_EQ(t.cursor(), kD);
  EXPECT_EQ(tr.ledger.moves, 2U);
  EXPECT_EQ(tr.ledger.rotations, 0U);
  ASSERT_EQ(tr.steps.size(), 2U);
  EXPECT_EQ(tr.steps[0].cursor, kB);
  EXPECT_EQ(tr.steps[1].cursor, kD);
}

TEST(RunProgram, SixOpBlockCountsFourMovesTwoRotations) {
  // Root x = 1 with sentinels -1 and 3 as children; y = 0 hangs as the
  // sentinel -1's right child. The block walks to the sentinel, to y, rotates
  // y over the sentinel, returns to x, steps to y and rotates it to the root.
  Tree t = Tree::from_parents({-1, 0, 1, 2, 3}, std::vector<Slot>{2, 0, kNoSlot, 4, 2});
  const MachineProgram p{{move_left(), move_right(), rotate(), move_parent(), move_left(), rotate()}};
  const Trace tr = run_program(t, p);
  EXPECT_EQ(tr.ledger.moves, 4U);
  EXPECT_EQ(tr.ledger.rotations, 2U);
  EXPECT_EQ(t.root(), 0);
  t.validate();
}

TEST(RunProgram, FailureReportsIndex) {
  Tree t = example_T();
  try {
    run_program(t, {{move_left(), move_left(), move_left()}});
    FAIL();
  } catch (const ProgramError& e) {
    EXPECT_EQ(e.index(), 2U);
  }
  EXPECT_EQ(t.cursor(), kA);
}

TEST(RunProgram, ReplayReproducesStateAndLedger) {
  Rng rng = substream(3, 0);
  for (int i = 0; i < 50; ++i) {
    Tree t = random_tree(rng, Tree::iota_keys(1 + uniform_below(rng, 20)));
    const Tree start = t;
    MachineProgram p;
    Tree probe = t;
    CostLedger scratch;
    for (int k = 0; k < 200; ++k) {
      std::vector<MachineOp> legal{compare()};
      const Slot c = probe.cursor_slot();
      if (probe.left_slot(c) != kNoSlot) legal.push_back(move_left());
      if (probe.right_slot(c) != kNoSlot) legal.push_back(move_right());
      if (probe.parent_slot(c) != kNoSlot) {
        legal.push_back(move_parent());
        legal.push_back(rotate());
      }
      p.ops.push_back(legal[uniform_below(rng, legal.size())]);
      apply_op(probe, scratch, p.ops.back());
    }
    const Trace tr = run_program(t, p);
    EXPECT_EQ(tr.initial_shape, start.shape());
    EXPECT_EQ(tr.ledger, scratch);
    EXPECT_EQ(replay(tr), t);
  }
}

TEST(MachineProperties, FuzzKeepsOrderAndDepths) {
  Rng rng = substream(5, 0);
  Tree t = random_tree(rng, Tree::iota_keys(64));
  CostLedger ledger;
  CostLedger previous;
  for (int i = 0; i < 100000; ++i) {
    const Slot c = t.cursor_slot();
    std::vector<MachineOp> legal{compare()};
    if (t.left_slot(c) != kNoSlot) legal.push_back(move_left());
    if (t.right_slot(c) != kNoSlot) legal.push_back(move_right());
    if (t.parent_slot(c) != kNoSlot) {
      legal.push_back(move_parent());
      legal.push_back(rotate());
    }
    const MachineOp op = legal[uniform_below(rng, legal.size())];
    apply_op(t, ledger, op);
    ASSERT_GE(ledger.moves, previous.moves);
    ASSERT_GE(ledger.rotations, previous.rotations);
    previous = ledger;
    if (i % 97 == 0) {
      t.validate();
      ASSERT_EQ(t.in_order(), Tree::iota_keys(64));
    }
    if (op.kind == OpKind::Rotate) {
      const auto fast = t.depths();
      for (const Key k : t.keys()) {
        ASSERT_EQ(t.depth(k), fast[static_cast<std::size_t>(t.slot_of(k))]);
        ASSERT_EQ(t.depth(k), t.path_from_root(k).size() - 1);
      }
    }
  }
  t.validate();
}

TEST(MachineProperties, RotationIsLocallyInvertible) {
  Rng rng = substream(9, 0);
  for (int i = 0; i < 500; ++i) {
    Tree t = random_tree(rng, Tree::iota_keys(2 + uniform_below(rng, 30)));
    Key x;
    do {
      x = t.keys()[uniform_below(rng, t.size())];
    } while (!t.parent(x));
    const Tree before = t;
    const Key y = *t.parent(x);
    t.rotate_up(x);
    EXPECT_EQ(t.parent(y), x);
    t.rotate_up(y);
    EXPECT_TRUE(t.same_shape(before));
  }
}

TEST(MachineProperties, LedgerIsAdditive) {
  Rng rng = substream(13, 0);
  for (int i = 0; i < 100; ++i) {
    const Tree start = random_tree(rng, Tree::iota_keys(1 + uniform_below(rng, 16)));
    auto random_legal = [&](Tree probe, std::size_t len) {
      MachineProgram p;
      CostLedger scratch;
      for (std::size_t k = 0; k < len; ++k) {
        const Slot c = probe.cursor_slot();
        std::vector<MachineOp> legal{compare()};
        if (probe.left_slot(c) != kNoSlot) legal.push_back(move_left());
        if (probe.right_slot(c) != kNoSlot) legal.push_back(move_right());
        if (probe.parent_slot(c) != kNoSlot) {
          legal.push_back(move_parent());
          legal.push_back(rotate());
        }
        p.ops.push_back(legal[uniform_below(rng, legal.size())]);
        apply_op(probe, scratch, p.ops.back());
      }
      return std::pair{p, probe};
    };
    const auto [P, mid] = random_legal(start, 30);
    const auto [Q, end] = random_legal(mid, 30);
    Tree a = start;
    const Trace ta = run_program(a, P);
    const Trace tb = run_program(a, Q);
    MachineProgram PQ = P;
    PQ.append(Q);
    Tree b = start;
    const Trace tc = run_program(b, PQ);
    EXPECT_EQ(ta.ledger + tb.ledger, tc.ledger);
    EXPECT_EQ(a, b);
    EXPECT_EQ(b, end);
  }
}

TEST(MachineHelpers, DescendAndReturn) {
  Tree t = example_T();
  const auto down = descend_to(t, kC);
  ASSERT_EQ(down.size(), 2U);
  EXPECT_EQ(down[0].kind, OpKind::MoveLeft);
  EXPECT_EQ(down[1].kind, OpKind::MoveRight);
  CostLedger ledger;
  for (const auto& op : down) apply_op(t, ledger, op);
  EXPECT_EQ(t.cursor(), kC);
  const auto up = return_to_root(t);
  EXPECT_EQ(up.size(), 2U);
  for (const auto& op : up) apply_op(t, ledger, op);
  EXPECT_EQ(t.cursor(), t.root());
}

TEST(StepNames, RoundTrip) {
  for (const StepOp s : {StepOp::Compare, StepOp::MoveLeft, StepOp::MoveRight, StepOp::MoveParent,
                         StepOp::Rotate, StepOp::Zig, StepOp::ZigZig, StepOp::ZigZag}) {
    EXPECT_EQ(parse_step_name(step_name(s)), s);
  }
  EXPECT_FALSE(parse_step_name("spin"));
}
