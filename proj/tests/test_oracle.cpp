#include <gtest/gtest.h>

#include "splaylab/harness.hpp"
#include "splaylab/oracle.hpp"
#include "splaylab/shapes.hpp"
#include "support.hpp"

using namespace splaylab;
using namespace splaylab::testing;

TEST(Oracle, RootQueryIsFree) {
  const Tree t = example_T();
  const OracleResult r = opt_cost(t, std::vector<Key>{kD, kD});
  EXPECT_EQ(r.opt_cost, 0U);
  EXPECT_TRUE(r.witness.empty());
}

TEST(Oracle, NoQueries) {
  EXPECT_EQ(opt_cost(example_T(), {}).opt_cost, 0U);
}

TEST(Oracle, TwoKeys) {
  const Tree t = Tree::right_spine(Tree::iota_keys(2));
  EXPECT_EQ(opt_cost(t, std::vector<Key>{1}).opt_cost, 2U);
  EXPECT_EQ(opt_cost(t, std::vector<Key>{1, 1, 1}).opt_cost, 2U);
}

TEST(Oracle, ThreeKeysAlternating) {
  const Tree t = Tree::balanced(Tree::iota_keys(3, 1));
  const std::vector<Key> q{1, 3, 1, 3};
  const OracleResult r = opt_cost(t, q);
  EXPECT_EQ(r.opt_cost, bfs_opt(t, q));
  EXPECT_EQ(r.opt_cost, 8U);
}

TEST(Oracle, WitnessServesAtOptimalCost) {
  Rng rng = substream(61, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const Tree t = harness::random_instance(rng, 1, 6);
    std::vector<Key> q;
    for (std::uint64_t i = 0, m = uniform_below(rng, 9); i < m; ++i) {
      q.push_back(static_cast<Key>(uniform_below(rng, t.size())));
    }
    const OracleResult r = opt_cost(t, q);
    const ServiceCheck c = check_service(t, r.witness, q);
    ASSERT_TRUE(c.served);
    ASSERT_EQ(c.ledger.charged_offline(), r.opt_cost);
    ASSERT_EQ(c.segment_starts.size(), q.size());
  }
}

TEST(Oracle, MatchesExhaustiveSearch) {
  Rng rng = substream(62, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Tree t = harness::random_instance(rng, 1, 4);
    std::vector<Key> q;
    for (std::uint64_t i = 0, m = 1 + uniform_below(rng, 4); i < m; ++i) {
      q.push_back(static_cast<Key>(uniform_below(rng, t.size())));
    }
    ASSERT_EQ(opt_cost(t, q).opt_cost, bfs_opt(t, q)) << t.shape();
  }
}

TEST(Oracle, AppendingQueriesNeverHelps) {
  Rng rng = substream(63, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const Tree t = harness::random_instance(rng, 2, 5);
    std::vector<Key> q;
    std::uint64_t last = 0;
    for (int i = 0; i < 6; ++i) {
      q.push_back(static_cast<Key>(uniform_below(rng, t.size())));
      const std::uint64_t c = opt_cost(t, q).opt_cost;
      ASSERT_GE(c, last);
      last = c;
    }
  }
}

TEST(Oracle, Limits) {
  EXPECT_THROW(opt_cost(Tree::balanced(Tree::iota_keys(7)), std::vector<Key>{0}), InstanceTooLarge);
  EXPECT_THROW(opt_cost(example_T(), std::vector<Key>(9, kA)), InstanceTooLarge);
  try {
    opt_cost(example_T(), std::vector<Key>{kA, 17});
    FAIL();
  } catch (const KeyError& e) {
    EXPECT_NE(std::string(e.what()).find("query 1"), std::string::npos);
  }
}

TEST(CheckService, RejectsIncompletePrograms) {
  const Tree t = Tree::right_spine(Tree::iota_keys(2));
  const std::vector<Key> q{1};
  EXPECT_FALSE(check_service(t, MachineProgram{{move_right()}}, q).served);
  EXPECT_TRUE(check_service(t, MachineProgram{{move_right(), move_parent()}}, q).served);
  EXPECT_TRUE(check_service(t, MachineProgram{{move_right(), rotate()}}, q).served);
  EXPECT_FALSE(check_service(t, MachineProgram{{move_left()}}, q).served);
}

TEST(StaticOptimal, MatchesBruteForce) {
  Rng rng = substream(64, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 8);
    FrequencyTable f;
    f.keys = Tree::iota_keys(n);
    for (std::size_t i = 0; i < n; ++i) {
      f.counts.push_back(uniform_below(rng, 20));
      f.total += f.counts.back();
    }
    const Tree t = static_optimal(f);
    t.validate();
    ASSERT_EQ(static_cost(t, f), brute_static(f));
  }
}

TEST(StaticOptimal, UniformThreeIsBalanced) {
  const std::vector<Key> q{0, 1, 2};
  const Tree t = static_optimal(FrequencyTable::from_queries(Tree::iota_keys(3), q));
  EXPECT_EQ(t.shape(), "((.).(.))");
  EXPECT_EQ(t.root(), 1);
}

TEST(StaticOptimal, HeavyKeyAtRoot) {
  FrequencyTable f{Tree::iota_keys(3, 1), {1000, 1, 1}, 1002};
  const Tree t = static_optimal(f);
  EXPECT_EQ(t.root(), 1);
  EXPECT_EQ(static_cost(t, f), 1000U + 2 + 3);
}

TEST(FrequencyTable, CountsQueries) {
  const std::vector<Key> q{2, 0, 2, 2};
  const FrequencyTable f = FrequencyTable::from_queries(Tree::iota_keys(3), q);
  EXPECT_EQ(f.counts, (std::vector<std::uint64_t>{1, 0, 3}));
  EXPECT_EQ(f.total, 4U);
  EXPECT_THROW(FrequencyTable::from_queries(Tree::iota_keys(3), std::vector<Key>{5}), KeyError);
}

TEST(StaticWalk, CostsTwiceDepth) {
  const ServingProgram p = static_walk_program(example_T(), std::vector<Key>{kA});
  EXPECT_EQ(p.ledger.moves, 4U);
  EXPECT_EQ(p.ledger.rotations, 0U);
  EXPECT_TRUE(check_service(p.initial, p.program, p.queries).served);
  EXPECT_TRUE(static_walk_program(example_T(), {}).program.empty());
}

TEST(StrategyProgram, BothStrategiesServe) {
  const std::vector<Key> q{0, 3, 3, 1};
  const Tree t = Tree::right_spine(Tree::iota_keys(4));
  for (const Strategy s : {Strategy::StaticOptimal, Strategy::OracleWitness}) {
    const ServingProgram p = strategy_program(s, t, q);
    const ServiceCheck c = check_service(p.initial, p.program, q);
    EXPECT_TRUE(c.served);
    EXPECT_EQ(c.ledger, p.ledger);
  }
  EXPECT_LE(strategy_program(Strategy::OracleWitness, t, q).ledger.charged_offline(),
            static_walk_program(t, q).ledger.charged_offline());
}
