#include <gtest/gtest.h>

#include <memory>

#include "splaylab/sequences.hpp"
#include "splaylab/splay.hpp"
#include "support.hpp"

using namespace splaylab;
using namespace splaylab::testing;

namespace {

// Independent bottom-up splay on heap nodes.
struct Node {
  Key key;
  Node* left = nullptr;
  Node* right = nullptr;
  Node* parent = nullptr;
};

struct PointerTree {
  std::vector<std::unique_ptr<Node>> pool;
  Node* root = nullptr;

  explicit PointerTree(const Tree& t) {
    std::map<Key, Node*> by_key;
    for (const Key k : t.keys()) {
      pool.push_back(std::make_unique<Node>(Node{k}));
      by_key[k] = pool.back().get();
    }
    for (const Key k : t.keys()) {
      Node* n = by_key[k];
      if (auto l = t.left(k)) n->left = by_key[*l];
      if (auto r = t.right(k)) n->right = by_key[*r];
      if (auto p = t.parent(k)) n->parent = by_key[*p];
    }
    root = by_key[t.root()];
  }

  Node* find(Key k) {
    Node* n = root;
    while (n->key != k) n = k < n->key ? n->left : n->right;
    return n;
  }

  void rotate(Node* x) {
    Node* p = x->parent;
    Node* g = p->parent;
    if (p->left == x) {
      p->left = x->right;
      if (x->right) x->right->parent = p;
      x->right = p;
    } else {
      p->right = x->left;
      if (x->left) x->left->parent = p;
      x->left = p;
    }
    p->parent = x;
    x->parent = g;
    if (!g) {
      root = x;
    } else if (g->left == p) {
      g->left = x;
    } else {
      g->right = x;
    }
  }

  std::uint32_t splay(Key k) {
    Node* x = find(k);
    std::uint32_t d = 0;
    for (Node* a = x; a->parent; a = a->parent) ++d;
    while (x->parent) {
      Node* p = x->parent;
      Node* g = p->parent;
      if (!g) {
        rotate(x);
      } else if ((g->left == p) == (p->left == x)) {
        rotate(p);
        rotate(x);
      } else {
        rotate(x);
        rotate(x);
      }
    }
    return d;
  }

  static void shape_of(const Node* n, std::string& out) {
    out.push_back('(');
    if (n->left) shape_of(n->left, out);
    out.push_back('.');
    if (n->right) shape_of(n->right, out);
    out.push_back(')');
  }
  std::string shape() const {
    std::string s;
    shape_of(root, s);
    return s;
  }
};

}  // namespace

TEST(Splay, RootIsUnchanged) {
  Tree t = example_T();
  const SplayRecord r = splay(t, kD);
  EXPECT_EQ(t, example_T());
  EXPECT_EQ(r.move_cost, 0U);
  EXPECT_TRUE(r.steps.empty());
}

TEST(Splay, ZigCase) {
  // A=0 x=1 B=2 y=3 C=4, x the left child of the root y.
  Tree t = Tree::from_shape(Tree::iota_keys(5), "(((.).(.)).(.))");
  const SplayRecord r = splay(t, 1);
  EXPECT_EQ(t.shape(), "((.).((.).(.)))");
  EXPECT_EQ(t.root(), 1);
  EXPECT_EQ(t.right(1), 3);
  EXPECT_EQ(t.left(3), 2);
  ASSERT_EQ(r.steps.size(), 1U);
  EXPECT_EQ(r.steps[0], (SplayStepKind{SplayCase::Zig, Side::Left}));
  EXPECT_EQ(r.move_cost, 1U);
}

TEST(Splay, ZigZigCase) {
  // A=0 x=1 B=2 y=3 C=4 z=5 D=6 with x under y under the root z, all left.
  Tree t = Tree::from_shape(Tree::iota_keys(7), "((((.).(.)).(.)).(.))");
  const SplayRecord r = splay(t, 1);
  EXPECT_EQ(t.root(), 1);
  EXPECT_EQ(t.left(1), 0);
  EXPECT_EQ(t.right(1), 3);
  EXPECT_EQ(t.left(3), 2);
  EXPECT_EQ(t.right(3), 5);
  EXPECT_EQ(t.left(5), 4);
  EXPECT_EQ(t.right(5), 6);
  ASSERT_EQ(r.steps.size(), 1U);
  EXPECT_EQ(r.steps[0], (SplayStepKind{SplayCase::ZigZig, Side::Left}));
}

TEST(Splay, ZigZagCase) {
  // A=0 y=1 B=2 x=3 C=4 z=5 D=6 with x the right child of y, y left of z.
  Tree t = Tree::from_shape(Tree::iota_keys(7), "(((.).((.).(.))).(.))");
  const SplayRecord r = splay(t, 3);
  EXPECT_EQ(t.root(), 3);
  EXPECT_EQ(t.left(3), 1);
  EXPECT_EQ(t.right(3), 5);
  EXPECT_EQ(t.left(1), 0);
  EXPECT_EQ(t.right(1), 2);
  EXPECT_EQ(t.left(5), 4);
  EXPECT_EQ(t.right(5), 6);
  ASSERT_EQ(r.steps.size(), 1U);
  EXPECT_EQ(r.steps[0], (SplayStepKind{SplayCase::ZigZag, Side::Left}));
}

TEST(Splay, MirroredCases) {
  Tree zig = Tree::from_shape(Tree::iota_keys(2), "(.(.))");
  EXPECT_EQ(splay_step(zig, 1), (SplayStepKind{SplayCase::Zig, Side::Right}));
  Tree zigzig = Tree::right_spine(Tree::iota_keys(3));
  EXPECT_EQ(splay_step(zigzig, 2), (SplayStepKind{SplayCase::ZigZig, Side::Right}));
  EXPECT_EQ(zigzig.shape(), "(((.).).)");
  Tree zigzag = Tree::from_shape(Tree::iota_keys(3), "(.((.).))");
  EXPECT_EQ(splay_step(zigzag, 1), (SplayStepKind{SplayCase::ZigZag, Side::Right}));
  EXPECT_EQ(zigzag.shape(), "((.).(.))");
}

TEST(SplayStep, DepthDecreases) {
  Tree t = Tree::left_spine(Tree::iota_keys(6));
  EXPECT_EQ(splay_step(t, 0).kind, SplayCase::ZigZig);
  EXPECT_EQ(t.depth(0), 3U);
  EXPECT_EQ(splay_step(t, 0).kind, SplayCase::ZigZig);
  EXPECT_EQ(t.depth(0), 1U);
  EXPECT_EQ(splay_step(t, 0).kind, SplayCase::Zig);
  EXPECT_EQ(t.depth(0), 0U);
  EXPECT_THROW(splay_step(t, 0), std::invalid_argument);
}

TEST(Splay, UnknownKey) {
  Tree t = example_T();
  EXPECT_THROW(splay(t, 99), KeyError);
}

TEST(Splay, MatchesIndependentImplementation) {
  Rng rng = substream(21, 0);
  for (int trial = 0; trial < 100; ++trial) {
    Tree t = random_tree(rng, Tree::iota_keys(1 + uniform_below(rng, 60)));
    PointerTree ref(t);
    for (int i = 0; i < 100; ++i) {
      const Key k = static_cast<Key>(uniform_below(rng, t.size()));
      const SplayRecord r = splay(t, k);
      ASSERT_EQ(r.move_cost, ref.splay(k));
      ASSERT_EQ(t.shape(), ref.shape());
      ASSERT_EQ(t.root(), k);
      ASSERT_EQ(t.cursor(), k);
    }
    t.validate();
  }
}

TEST(Splay, StepwiseEqualsWhole) {
  Rng rng = substream(22, 0);
  for (int trial = 0; trial < 200; ++trial) {
    Tree a = random_tree(rng, Tree::iota_keys(1 + uniform_below(rng, 50)));
    Tree b = a;
    const Key k = static_cast<Key>(uniform_below(rng, a.size()));
    const SplayRecord r = splay(a, k);
    std::size_t steps = 0;
    while (b.root() != k) {
      splay_step(b, k);
      ++steps;
    }
    EXPECT_TRUE(a.same_shape(b));
    EXPECT_EQ(steps, r.steps.size());
    for (std::size_t i = 0; i + 1 < r.steps.size(); ++i) EXPECT_NE(r.steps[i].kind, SplayCase::Zig);
  }
}

TEST(ServeQueries, EmptyQueries) {
  Tree t = example_T();
  const ServeResult r = serve_queries(t, {});
  EXPECT_EQ(r.total_cost, 0U);
  EXPECT_EQ(t, example_T());
}

TEST(ServeQueries, RepeatedKeyCostsOnce) {
  Tree t = example_T();
  const std::vector<Key> q(10, kA);
  const ServeResult r = serve_queries(t, q);
  EXPECT_EQ(r.total_cost, 2U);
  EXPECT_EQ(r.records[0].move_cost, 2U);
  for (std::size_t i = 1; i < q.size(); ++i) EXPECT_EQ(r.records[i].move_cost, 0U);
}

TEST(ServeQueries, SequentialScanFromRightSpine) {
  Tree t = Tree::right_spine(Tree::iota_keys(8));
  const ServeResult r = serve_queries(t, Tree::iota_keys(8));
  EXPECT_EQ(r.total_cost, 7U);
  EXPECT_LE(r.total_cost, 72U);
}

TEST(ServeQueries, ScanCostsAtMostNineN) {
  for (const std::size_t n : {128U, 1024U}) {
    for (Tree t : {Tree::left_spine(Tree::iota_keys(n)), Tree::right_spine(Tree::iota_keys(n)),
                   Tree::balanced(Tree::iota_keys(n))}) {
      EXPECT_LE(splay_cost(t, Tree::iota_keys(n)), 9 * n);
    }
  }
}

TEST(ServeQueries, TraceReplaysAndCostsAddUp) {
  Rng rng = substream(23, 0);
  for (int trial = 0; trial < 30; ++trial) {
    Tree t = random_tree(rng, Tree::iota_keys(1 + uniform_below(rng, 40)));
    const Tree start = t;
    std::vector<Key> q;
    for (int i = 0; i < 60; ++i) q.push_back(static_cast<Key>(uniform_below(rng, t.size())));
    const ServeResult r = serve_queries(t, q);
    std::uint64_t sum = 0;
    for (const SplayRecord& rec : r.records) sum += rec.depth_before;
    EXPECT_EQ(r.total_cost, sum);
    EXPECT_EQ(r.trace.ledger.moves, sum);
    EXPECT_EQ(replay_splay_trace(r.trace), t);
    Tree again = start;
    EXPECT_EQ(splay_cost(again, q), sum);
    EXPECT_EQ(again, t);
  }
}

TEST(ServeQueries, UnknownKeyNamesIndex) {
  Tree t = example_T();
  try {
    serve_queries(t, std::vector<Key>{kA, kB, 42});
    FAIL();
  } catch (const KeyError& e) {
    EXPECT_NE(std::string(e.what()).find("query 2"), std::string::npos);
  }
  EXPECT_EQ(t, example_T());
}

TEST(DepthHalving, ReportCoversPath) {
  Rng rng = substream(24, 0);
  std::size_t flagged = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Tree t = random_tree(rng, Tree::iota_keys(1 + uniform_below(rng, 100)));
    const Key k = static_cast<Key>(uniform_below(rng, t.size()));
    const std::uint32_t d = t.depth(k);
    const DepthHalvingReport r = splay_with_depth_report(t, k);
    EXPECT_EQ(r.path_nodes, d + 1U);
    EXPECT_EQ(t.root(), k);
    flagged += r.flagged;
  }
  RecordProperty("flagged", static_cast<int>(flagged));
}
