#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "splaylab/machine.hpp"
#include "splaylab/oracle.hpp"
#include "splaylab/shapes.hpp"
#include "splaylab/tree.hpp"

namespace splaylab::testing {

using Rational = boost::multiprecision::cpp_rational;

// Keys a..e of the five-key worked example.
inline constexpr Key kA = 0, kB = 1, kC = 2, kD = 3, kE = 4;

/// d at the root, children b and e, b's children a and c.
inline Tree example_T() { return Tree::from_shape(Tree::iota_keys(5), "(((.).(.)).(.))"); }
/// b at the root over a and d, d's children c and e.
inline Tree example_S() { return Tree::from_shape(Tree::iota_keys(5), "((.).((.).(.)))"); }

inline double lg(const Rational& r) {
  return std::log2(static_cast<long double>(boost::multiprecision::numerator(r)) /
                   static_cast<long double>(boost::multiprecision::denominator(r)));
}

/// Weight 4^-depth in T for every key, as exact rationals.
inline std::map<Key, Rational> rational_weights(const Tree& T) {
  std::map<Key, Rational> w;
  for (const Key k : T.keys()) {
    Rational v = 1;
    for (std::uint32_t i = 0; i < T.depth(k); ++i) v /= 4;
    w[k] = v;
  }
  return w;
}

/// Subtree sums by descendant enumeration: u lies below v iff v is on u's root path.
inline std::map<Key, Rational> rational_sums(const Tree& tree, const std::map<Key, Rational>& w) {
  std::map<Key, Rational> s;
  for (const Key k : tree.keys()) s[k] = 0;
  for (const Key u : tree.keys()) {
    for (const Key v : tree.path_from_root(u)) s[v] += w.at(u);
  }
  return s;
}

inline double rational_potential(const Tree& tree, const std::map<Key, Rational>& w) {
  double p = 0.0;
  for (const auto& [k, s] : rational_sums(tree, w)) p += lg(s);
  return p;
}

inline double rational_phi(const Tree& S, const Tree& T) {
  const auto w = rational_weights(T);
  return rational_potential(S, w) - rational_potential(T, w);
}

// Plain BFS over concrete trees. Serving and returning to the root are free.
inline std::uint64_t bfs_opt(const Tree& initial, const std::vector<Key>& q) {
  struct Node {
    Tree t;
    std::size_t next;
    bool pending;
  };
  auto settle = [&](Node& s) {
    for (;;) {
      const bool at_root = s.t.cursor() == s.t.root();
      if (s.pending && at_root) {
        s.pending = false;
      } else if (!s.pending && s.next < q.size() && s.t.cursor() == q[s.next]) {
        ++s.next;
        s.pending = true;
      } else {
        return;
      }
    }
  };
  auto id = [](const Node& s) {
    return s.t.shape() + "|" + std::to_string(s.t.cursor()) + "|" + std::to_string(s.next) +
           (s.pending ? "p" : "");
  };
  Node start{initial, 0, false};
  settle(start);
  std::deque<std::pair<Node, std::uint64_t>> frontier{{start, 0}};
  std::set<std::string> seen{id(start)};
  while (!frontier.empty()) {
    auto [s, d] = frontier.front();
    frontier.pop_front();
    if (s.next == q.size() && !s.pending) return d;
    for (const MachineOp op : {move_left(), move_right(), move_parent(), rotate()}) {
      Node to = s;
      CostLedger ledger;
      try {
        apply_op(to.t, ledger, op);
      } catch (const MachineError&) {
        continue;
      }
      settle(to);
      if (seen.insert(id(to)).second) frontier.emplace_back(to, d + 1);
    }
  }
  throw std::logic_error("unreachable");
}

inline std::uint64_t brute_static(const FrequencyTable& f) {
  std::uint64_t best = UINT64_MAX;
  for (const Tree& t : enumerate_shapes(f.keys.size())) {
    const Tree keyed = Tree::from_shape(f.keys, t.shape());
    best = std::min(best, static_cost(keyed, f));
  }
  return best;
}

}  // namespace splaylab::testing
